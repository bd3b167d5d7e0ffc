import numpy as np
import pytest

from oracles import random_bounded_feasible, vertex_enumeration
from symlab.errors import CyclingSuspected, InvalidProgram
from symlab.lp import LinearProgram, LpStatus, SimplexSolver, solve_lp


def assert_optimal_invariants(lp, sol):
    assert sol.status is LpStatus.OPTIMAL
    assert sol.x.min() >= -1e-9
    residual = np.abs(lp.A @ sol.x - lp.b).max()
    assert residual <= 1e-8 * (1 + np.abs(lp.b).max())
    nonbasic = np.setdiff1d(np.arange(lp.shape[1]), sol.basis)
    assert np.all(sol.reduced_costs[nonbasic] >= -1e-9)
    assert sol.phase1_objective <= 1e-9


def test_simple_optimal():
    lp = LinearProgram(c=[1, 0], A=[[1, 1]], b=[1])
    sol = solve_lp(lp)
    assert sol.status is LpStatus.OPTIMAL
    assert sol.x == pytest.approx([0, 1])
    assert sol.objective == 0
    assert_optimal_invariants(lp, sol)


def test_unbounded_ray():
    sol = solve_lp(LinearProgram(c=[-1, 0], A=[[1, -1]], b=[0]))
    assert sol.status is LpStatus.UNBOUNDED
    assert sol.x is None


def test_infeasible_negative_rhs():
    sol = solve_lp(LinearProgram(c=[0], A=[[1]], b=[-1]))
    assert sol.status is LpStatus.INFEASIBLE
    assert sol.phase1_objective > 1e-9


def test_inconsistent_equalities_are_infeasible():
    # x1 + x2 = 1 and x1 + x2 = 2
    sol = solve_lp(LinearProgram(c=[1, 1], A=[[1, 1], [1, 1]], b=[1, 2]))
    assert sol.status is LpStatus.INFEASIBLE


def test_redundant_rows_are_dropped():
    lp = LinearProgram(c=[1, 2, 3], A=[[1, 1, 1], [2, 2, 2], [0, 0, 0]], b=[1, 2, 0])
    sol = solve_lp(lp)
    assert sol.objective == pytest.approx(1.0)
    assert sol.x == pytest.approx([1, 0, 0])


def test_unbounded_with_constraints():
    # min -x1 s.t. x1 - x2 + x3 = 1: push x1 and x2 together forever
    sol = solve_lp(LinearProgram(c=[-1, 0, 0], A=[[1, -1, 1]], b=[1]))
    assert sol.status is LpStatus.UNBOUNDED


def test_classic_cycling_example_terminates():
    # Beale's example (standard form with slacks); cycles under Dantzig's rule
    A = [
        [0.25, -8, -1, 9, 1, 0, 0],
        [0.5, -12, -0.5, 3, 0, 1, 0],
        [0, 0, 1, 0, 0, 0, 1],
    ]
    c = [-0.75, 20, -0.5, 6, 0, 0, 0]
    lp = LinearProgram(c=c, A=A, b=[0, 0, 1])
    sol = solve_lp(lp)
    assert sol.objective == pytest.approx(-1.25)
    assert_optimal_invariants(lp, sol)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(c=[1, 2], A=[[1, 1, 1]], b=[1]),
        dict(c=[1, 2], A=[[1, 1]], b=[1, 2]),
        dict(c=[1], A=[1], b=[1]),
        dict(c=[np.nan], A=[[1]], b=[1]),
        dict(c=[], A=np.zeros((1, 0)), b=[1]),
    ],
)
def test_invalid_programs(kwargs):
    with pytest.raises(InvalidProgram):
        LinearProgram(**kwargs)


def test_iteration_budget_raises():
    lp = LinearProgram(c=[1, 0], A=[[1, 1]], b=[1])
    solver = SimplexSolver(lp)
    solver.max_iterations = 0
    with pytest.raises(CyclingSuspected):
        solver.solve()


def test_deterministic():
    rng = np.random.default_rng(3)
    A, b, c = random_bounded_feasible(rng, 5, 10)
    lp = LinearProgram(c=c, A=A, b=b)
    first, second = solve_lp(lp), solve_lp(lp)
    assert np.array_equal(first.x, second.x)
    assert first.basis == second.basis


def _random_instances(count, seed):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        m = int(rng.integers(1, 9))
        n = int(rng.integers(m, 17))
        yield random_bounded_feasible(rng, m, n)


@pytest.mark.parametrize("seed", range(4))
def test_matches_vertex_enumeration(seed):
    for A, b, c in _random_instances(15, seed):
        lp = LinearProgram(c=c, A=A, b=b)
        sol = solve_lp(lp)
        assert_optimal_invariants(lp, sol)
        assert sol.objective == pytest.approx(vertex_enumeration(A, b, c), abs=1e-7)


def test_column_permutation_invariance():
    rng = np.random.default_rng(11)
    for A, b, c in _random_instances(25, 11):
        perm = rng.permutation(A.shape[1])
        base = solve_lp(LinearProgram(c=c, A=A, b=b))
        permuted = solve_lp(LinearProgram(c=c[perm], A=A[:, perm], b=b))
        assert base.objective == pytest.approx(permuted.objective, abs=1e-9)


def test_infeasible_random_instances():
    rng = np.random.default_rng(5)
    for _ in range(20):
        m, n = int(rng.integers(1, 6)), int(rng.integers(2, 10))
        A = rng.integers(0, 6, size=(m, n)).astype(float)
        b = -rng.integers(1, 5, size=m).astype(float)  # nonneg A, x >= 0 cannot reach b < 0
        sol = solve_lp(LinearProgram(c=np.ones(n), A=A, b=b))
        assert sol.status is LpStatus.INFEASIBLE


def test_unbounded_random_instances():
    rng = np.random.default_rng(6)
    for _ in range(20):
        A, b, c = random_bounded_feasible(rng, int(rng.integers(1, 5)), int(rng.integers(4, 10)))
        # a new column that touches no constraint and lowers the cost
        A2 = np.hstack([A, np.zeros((A.shape[0], 1))])
        c2 = np.append(c, -1.0)
        sol = solve_lp(LinearProgram(c=c2, A=A2, b=b))
        assert sol.status is LpStatus.UNBOUNDED
