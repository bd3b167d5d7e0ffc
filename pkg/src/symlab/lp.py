"""Dense two-phase revised simplex for standard-form LPs.

    minimize c @ x  subject to  A @ x = b,  x >= 0

Pivoting follows Bland's rule in both phases (lowest-index entering column
with negative reduced cost, lowest-index basic variable among ratio-test
ties), so the method terminates without perturbation on degenerate problems.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import CyclingSuspected, InvalidProgram

PIVOT_TOL = 1e-9
PHASE1_TOL = 1e-9


class LpStatus(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True)
class LinearProgram:
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        c = np.array(self.c, dtype=float)
        A = np.array(self.A, dtype=float)
        b = np.array(self.b, dtype=float)
        if A.ndim != 2 or c.ndim != 1 or b.ndim != 1:
            raise InvalidProgram("c and b must be vectors and A a matrix")
        m, n = A.shape
        if m < 1 or n < 1:
            raise InvalidProgram("need at least one constraint and one variable")
        if c.shape[0] != n or b.shape[0] != m:
            raise InvalidProgram(
                f"dimension mismatch: A is {m}x{n}, c has {c.shape[0]}, b has {b.shape[0]}"
            )
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b)) and np.all(np.isfinite(c))):
            raise InvalidProgram("LP data must be finite")
        for name, arr in (("c", c), ("A", A), ("b", b)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.A.shape


@dataclass
class LpSolution:
    status: LpStatus
    objective: float
    x: np.ndarray | None = None
    basis: tuple[int, ...] = ()
    iterations: int = 0
    phase1_objective: float = 0.0
    reduced_costs: np.ndarray | None = field(default=None, repr=False)


class SimplexSolver:
    """Holds the working state of one solve.  Not reentrant; build one per solve."""

    def __init__(self, lp: LinearProgram, pivot_tol: float = PIVOT_TOL):
        if not isinstance(lp, LinearProgram):
            raise InvalidProgram("expected a LinearProgram")
        self.lp = lp
        self.tol = pivot_tol
        m, n = lp.shape
        self.max_iterations = 50 * (m + n)
        self.iterations = 0

    def _bump(self):
        self.iterations += 1
        if self.iterations > self.max_iterations:
            raise CyclingSuspected(
                f"simplex exceeded {self.max_iterations} iterations"
            )

    def _iterate(self, A, b, c, basis, allowed):
        """Run primal simplex from a feasible ``basis``.

        ``allowed`` masks the columns that may enter.  Returns
        ``(status, basis, x_B)``; ``status`` is ``None`` at optimality.
        """
        tol = self.tol
        while True:
            B = A[:, basis]
            x_B = np.linalg.solve(B, b)
            y = np.linalg.solve(B.T, c[basis])
            reduced = c - A.T @ y
            in_basis = np.zeros(A.shape[1], dtype=bool)
            in_basis[basis] = True
            candidates = np.flatnonzero(allowed & ~in_basis & (reduced < -tol))
            if candidates.size == 0:
                return None, basis, x_B
            entering = int(candidates[0])
            d = np.linalg.solve(B, A[:, entering])
            rows = np.flatnonzero(d > tol)
            if rows.size == 0:
                return LpStatus.UNBOUNDED, basis, x_B
            ratios = np.maximum(x_B[rows], 0.0) / d[rows]
            best = ratios.min()
            tied = rows[ratios <= best + tol * max(1.0, abs(best))]
            leave_row = min(tied, key=lambda r: basis[r])
            basis = list(basis)
            basis[leave_row] = entering
            self._bump()

    def solve(self) -> LpSolution:
        A0, b0, c0 = self.lp.A, self.lp.b, self.lp.c
        m, n = A0.shape
        tol = self.tol

        sign = np.where(b0 < 0, -1.0, 1.0)
        A = A0 * sign[:, None]
        b = b0 * sign

        # phase 1: artificial identity block appended after the real columns
        A1 = np.hstack([A, np.eye(m)])
        c1 = np.concatenate([np.zeros(n), np.ones(m)])
        basis = list(range(n, n + m))
        allowed = np.ones(n + m, dtype=bool)
        _, basis, x_B = self._iterate(A1, b, c1, basis, allowed)
        phase1 = float(np.sum(x_B[np.array(basis) >= n]))
        if phase1 > PHASE1_TOL:
            return LpSolution(
                status=LpStatus.INFEASIBLE,
                objective=float("inf"),
                iterations=self.iterations,
                phase1_objective=phase1,
            )

        # drive zero-level artificials out; rows where that is impossible are redundant
        keep_rows = list(range(m))
        r = 0
        while r < len(basis):
            if basis[r] < n:
                r += 1
                continue
            B = A1[np.ix_(keep_rows, basis)]
            row_of_binv = np.linalg.solve(B.T, np.eye(len(basis))[r])
            alpha = row_of_binv @ A1[keep_rows, :n]
            nonbasic = [j for j in range(n) if j not in basis and abs(alpha[j]) > tol]
            if nonbasic:
                basis[r] = nonbasic[0]
                self._bump()
                r += 1
            else:
                art_row = basis[r] - n
                keep_rows.remove(art_row)
                del basis[r]

        A2 = A[keep_rows, :]
        b2 = b[keep_rows]
        if not basis:
            # every row was redundant (A x = b reduces to 0 = 0)
            x = np.zeros(n)
            if np.any(c0 < -tol):
                return LpSolution(LpStatus.UNBOUNDED, float("-inf"), iterations=self.iterations,
                                  phase1_objective=phase1)
            return LpSolution(LpStatus.OPTIMAL, 0.0, x=x, iterations=self.iterations,
                              phase1_objective=phase1, reduced_costs=c0.copy())

        status, basis, x_B = self._iterate(A2, b2, c0, basis, np.ones(n, dtype=bool))
        if status is LpStatus.UNBOUNDED:
            return LpSolution(
                status=LpStatus.UNBOUNDED,
                objective=float("-inf"),
                basis=tuple(basis),
                iterations=self.iterations,
                phase1_objective=phase1,
            )
        x = np.zeros(n)
        x[basis] = x_B
        y = np.linalg.solve(A2[:, basis].T, c0[basis])
        return LpSolution(
            status=LpStatus.OPTIMAL,
            objective=float(c0 @ x),
            x=x,
            basis=tuple(int(j) for j in basis),
            iterations=self.iterations,
            phase1_objective=phase1,
            reduced_costs=c0 - A2.T @ y,
        )


def solve_lp(lp: LinearProgram) -> LpSolution:
    """Solve ``lp``; deterministic for identical input."""
    return SimplexSolver(lp).solve()
