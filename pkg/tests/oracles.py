"""Independent reference computations used by the tests."""

import itertools
from fractions import Fraction

import numpy as np

from symlab import dist as D
from symlab.symmetrizer import SymmetrizerProblem


def vertex_enumeration(A, b, c, tol=1e-9):
    """Minimum of c @ x over basic feasible solutions of A x = b, x >= 0.

    Returns ``inf`` when no basic feasible solution exists.  Only meaningful
    for bounded problems.
    """
    A = np.asarray(A, float)
    b = np.asarray(b, float)
    c = np.asarray(c, float)
    m, n = A.shape
    rank = np.linalg.matrix_rank(A)
    if rank == 0:
        return 0.0 if np.allclose(b, 0) else float("inf")
    best = float("inf")
    for cols in itertools.combinations(range(n), rank):
        sub = A[:, cols]
        if np.linalg.matrix_rank(sub) < rank:
            continue
        x_sub, *_ = np.linalg.lstsq(sub, b, rcond=None)
        if np.abs(sub @ x_sub - b).max() > 1e-7 * (1 + np.abs(b).max()):
            continue
        if x_sub.min() < -tol:
            continue
        x = np.zeros(n)
        x[list(cols)] = x_sub
        best = min(best, float(c @ x))
    return best


def random_bounded_feasible(rng, m, n):
    """Integer LP that is feasible (b = A x0, x0 >= 0) and bounded (c = A^T y + s, s >= 0)."""
    A = rng.integers(-5, 6, size=(m, n)).astype(float)
    x0 = rng.integers(0, 4, size=n).astype(float)
    b = A @ x0
    y = rng.integers(-3, 4, size=m).astype(float)
    s = rng.integers(0, 5, size=n).astype(float)
    c = A.T @ y + s
    return A, b, c


def random_small_symmetrizer_problem(rng, seeded):
    """X with up to 3 atoms on the half-integers, grid of at most 3 points.

    When ``seeded`` the grid contains the reflected support of X, so Y = -X is
    always feasible.
    """
    n_atoms = int(rng.integers(1, 3)) if seeded else int(rng.integers(1, 4))
    values = sorted(set(Fraction(int(v), 2) for v in rng.integers(-2, 3, size=n_atoms)))
    weights = rng.integers(1, 10, size=len(values)).astype(float)
    tenths = np.round(weights / weights.sum() * 10)
    tenths[-1] = 10 - tenths[:-1].sum()
    if np.any(tenths <= 0):
        tenths = np.full(len(values), 10 / len(values))
    x = D.DiscreteDist(tuple(zip(values, (tenths / 10).tolist())))
    if seeded:
        grid = {-v for v in values}
        while len(grid) < 3 and rng.random() < 0.7:
            grid.add(Fraction(int(rng.integers(-4, 5)), 2))
    else:
        grid = {Fraction(int(v), 2) for v in rng.integers(-4, 5, size=int(rng.integers(1, 4)))}
    return SymmetrizerProblem(x, tuple(sorted(grid)[:3]))


def enumerate_sum_law(x_dist, y_dist):
    """Law of X + Y by listing every outcome pair."""
    outcomes = [(vx + vy, px * py) for vx, px in x_dist.atoms for vy, py in y_dist.atoms]
    law = {}
    for v, w in outcomes:
        law[v] = law.get(v, 0.0) + w
    return law


def mixture_by_brute_force(mu):
    """Enumerate every (negative atom, positive atom) pair directly from the
    definition: pair weight (b - a) mu(a) mu(b) / m, exit to b w.p. -a / (b - a)."""
    neg = [(float(v), p) for v, p in mu.atoms if v < 0]
    pos = [(float(v), p) for v, p in mu.atoms if v > 0]
    m = sum(b * pb for b, pb in pos)
    law = {0.0: mu.prob_of(0)} if mu.prob_of(0) else {}
    total_w = 0.0
    tau = 0.0
    for (a, pa), (b, pb) in itertools.product(neg, pos):
        w = (b - a) * pa * pb / m
        total_w += w
        law[b] = law.get(b, 0.0) + w * (-a) / (b - a)
        law[a] = law.get(a, 0.0) + w * b / (b - a)
        tau += w * (-a * b)
    return law, total_w, tau
