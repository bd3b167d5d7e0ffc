"""Minimum-variance symmetrizers on a finite grid, posed as a linear program.

Unknown: a probability vector ``mu`` over ``y_grid``.  Constraints: total mass
one, and for each ``s > 0`` in the exact sum support of X + Y,
``P(X + Y = s) = P(X + Y = -s)``.  Objective: ``E[Y^2]``.  Any feasible ``mu``
makes X + Y symmetric, hence centred, so ``E[Y] = -E[X]`` is pinned and
minimizing ``E[Y^2]`` minimizes the variance.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import dist as D
from .dist import DiscreteDist, as_rational
from .errors import InvalidProblem, OracleTooLarge, SolverInconsistency
from .lp import LinearProgram, LpStatus, solve_lp

DROP_TOL = 1e-12
SYMMETRY_TOL = 1e-7
ORACLE_MAX_GRID = 4
ORACLE_MAX_RESOLUTION = 200


@dataclass(frozen=True)
class SymmetrizerProblem:
    x_dist: DiscreteDist
    y_grid: tuple[Fraction, ...]

    def __post_init__(self):
        grid = tuple(as_rational(v) for v in self.y_grid)
        if not grid:
            raise InvalidProblem("y_grid must be nonempty")
        if any(not a < b for a, b in zip(grid, grid[1:])):
            raise InvalidProblem("y_grid must be strictly increasing")
        object.__setattr__(self, "y_grid", grid)


def make_grid(lo, hi, step) -> tuple[Fraction, ...]:
    """All integer multiples of ``step`` lying in ``[lo, hi]``."""
    lo, hi, step = as_rational(lo), as_rational(hi), as_rational(step)
    if step <= 0:
        raise InvalidProblem("grid step must be positive")
    if not lo < hi:
        raise InvalidProblem("grid bounds must satisfy lo < hi")
    k_lo = math.ceil(lo / step)
    k_hi = math.floor(hi / step)
    return tuple(k * step for k in range(k_lo, k_hi + 1))


def bernoulli_parameter(d: DiscreteDist) -> float | None:
    """Return p if ``d`` is Bernoulli(p) with 0 < p < 1, else None."""
    if d.values == (Fraction(0), Fraction(1)) and all(p > 0 for p in d.probs):
        return d.probs[1]
    return None


def symmetry_rows(prob: SymmetrizerProblem) -> tuple[list[Fraction], np.ndarray]:
    """Positive sum values ``s`` and the matrix of ``P(S=s) - P(S=-s)`` coefficients.

    Row ``k`` of the matrix, dotted with ``mu``, is ``P(S = s_k) - P(S = -s_k)``.
    """
    sums: dict[Fraction, dict[int, float]] = {}
    for j, y in enumerate(prob.y_grid):
        for x, px in prob.x_dist.atoms:
            col = sums.setdefault(x + y, {})
            col[j] = col.get(j, 0.0) + px
    positive = sorted({abs(s) for s in sums if s != 0})
    rows = np.zeros((len(positive), len(prob.y_grid)))
    for k, s in enumerate(positive):
        for j, w in sums.get(s, {}).items():
            rows[k, j] += w
        for j, w in sums.get(-s, {}).items():
            rows[k, j] -= w
    return positive, rows


def build_problem(prob: SymmetrizerProblem) -> LinearProgram:
    """Encode ``prob`` as ``min E[Y^2]`` over grid measures with a symmetric sum."""
    _, sym = symmetry_rows(prob)
    n = len(prob.y_grid)
    A = np.vstack([np.ones((1, n)), sym])
    b = np.zeros(A.shape[0])
    b[0] = 1.0
    c = np.array([float(y) ** 2 for y in prob.y_grid])
    return LinearProgram(c=c, A=A, b=b)


@dataclass(frozen=True)
class SymmetrizerSolution:
    status: LpStatus
    y_dist: DiscreteDist | None = None
    second_moment: float = math.nan
    mean_y: float = math.nan
    variance: float = math.nan
    certificate_gap: float | None = None

    def to_json(self) -> dict:
        out = {
            "status": self.status.value,
            "variance": None if math.isnan(self.variance) else self.variance,
            "second_moment": None if math.isnan(self.second_moment) else self.second_moment,
            "mean_y": None if math.isnan(self.mean_y) else self.mean_y,
            "y_atoms": self.y_dist.to_json()["atoms"] if self.y_dist is not None else [],
            "certificate_gap": self.certificate_gap,
        }
        return out


def solve_symmetrizer(prob: SymmetrizerProblem) -> SymmetrizerSolution:
    """Solve for the minimum-variance symmetrizer supported on ``prob.y_grid``."""
    lp = build_problem(prob)
    sol = solve_lp(lp)
    if sol.status is not LpStatus.OPTIMAL:
        return SymmetrizerSolution(status=sol.status)

    mu = np.where(sol.x < DROP_TOL, 0.0, sol.x)
    mu = mu / math.fsum(mu)
    y_dist = DiscreteDist(tuple((y, float(w)) for y, w in zip(prob.y_grid, mu) if w > 0))

    second_moment = sol.objective
    mean_y = D.mean(y_dist)
    variance = second_moment - mean_y**2
    if not D.is_symmetric_about_zero(D.convolve(prob.x_dist, y_dist), SYMMETRY_TOL):
        raise SolverInconsistency("optimal LP point does not symmetrize X")
    if variance < -1e-9:
        raise SolverInconsistency(f"negative variance {variance!r}")

    p = bernoulli_parameter(prob.x_dist)
    gap = None if p is None else variance - p * (1.0 - p)
    return SymmetrizerSolution(
        status=sol.status,
        y_dist=y_dist,
        second_moment=second_moment,
        mean_y=mean_y,
        variance=variance,
        certificate_gap=gap,
    )


def _compositions(total: int, parts: int) -> np.ndarray:
    """All vectors of ``parts`` non-negative integers summing to ``total``."""
    if parts == 1:
        return np.array([[total]])
    # stars and bars: choose the bar positions
    bars = np.array(list(itertools.combinations(range(total + parts - 1), parts - 1)))
    padded = np.hstack([np.full((len(bars), 1), -1), bars, np.full((len(bars), 1), total + parts - 1)])
    return np.diff(padded, axis=1) - 1


def _mixture_residuals(prob: SymmetrizerProblem) -> np.ndarray:
    """Matrix R with ``(R @ mu)[k] = P(S = s_k) - P(S = -s_k)`` over every sum value s_k.

    Built from per-grid-point convolutions so it shares no code with the LP
    encoding.
    """
    laws = [D.convolve(prob.x_dist, DiscreteDist.point_mass(y)) for y in prob.y_grid]
    support = sorted({v for law in laws for v in law.values})
    table = np.array([[law.prob_of(v) for law in laws] for v in support])
    index = {v: i for i, v in enumerate(support)}
    mirrored = np.array([table[index[-v]] if -v in index else np.zeros(len(laws)) for v in support])
    return table - mirrored


def oracle_tolerance(resolution: int) -> float:
    """Symmetry slack for the oracle: float noise only, growing with the lattice size."""
    return 1e-9 * resolution


def brute_force_oracle(prob: SymmetrizerProblem, resolution: int) -> float:
    """Minimum ``E[Y^2]`` over grid measures with masses in multiples of 1/resolution.

    Only lattice points whose sum law is symmetric (up to
    :func:`oracle_tolerance`) count, so every accepted point is a genuine
    symmetrizer and the result can only exceed the LP optimum.  Returns
    ``inf`` if none qualifies.
    """
    k = len(prob.y_grid)
    if k > ORACLE_MAX_GRID or resolution > ORACLE_MAX_RESOLUTION:
        raise OracleTooLarge(
            f"oracle limited to |y_grid| <= {ORACLE_MAX_GRID} and resolution <= {ORACLE_MAX_RESOLUTION}"
        )
    if resolution < 1:
        raise InvalidProblem("resolution must be positive")
    mus = _compositions(resolution, k) / resolution
    R = _mixture_residuals(prob)
    tol = oracle_tolerance(resolution)
    ok = np.all(np.abs(mus @ R.T) <= tol, axis=1)
    if not ok.any():
        return math.inf
    y2 = np.array([float(y) ** 2 for y in prob.y_grid])
    return float((mus[ok] @ y2).min())


def bernoulli_problem(p, grid: Sequence | None = None, *, lo=-2, hi=1, step=Fraction(1, 20)) -> SymmetrizerProblem:
    """Convenience: Bernoulli(p) against a grid (default: multiples of 1/20 in [-2, 1])."""
    y_grid: Iterable = grid if grid is not None else make_grid(lo, hi, step)
    return SymmetrizerProblem(D.bernoulli(p), tuple(y_grid))
