"""Skorokhod embedding by randomized first-exit pairs, and Monte Carlo checks of
the Ito identities it is used with.

A centred finite-support law ``mu`` is embedded in standard Brownian motion W by
drawing an interval ``(a, b)`` with ``a < 0 < b`` with probability
``(b - a) mu(a) mu(b) / m`` (``m = sum_{b > 0} b mu(b)``), or stopping at once
with probability ``mu(0)``, then running W until it leaves ``(a, b)``.  Exit
laws and ``E[tau] = -a b`` are exact per pair, so the embedding itself is
checked without discretizing paths.  Time integrals of ``rho''`` need paths;
those use Gaussian increments with exit detected on the time grid.

Every path draws from its own stream keyed by ``(seed, path index)``, so
results do not depend on how paths are split across workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import dist as D
from .certificate import rho, rho_pp
from .dist import DiscreteDist, as_rational
from .errors import DegenerateParameter, InvalidArgument, InvalidInterval, NotCentered

CENTER_TOL = 1e-12
MAX_TRUNCATED_FRACTION = 1e-3


@dataclass(frozen=True)
class ExitPair:
    """Exit interval ``(a, b)``, or the zero atom (``is_zero``) meaning tau = 0."""

    a: float
    b: float
    is_zero: bool = False

    def __post_init__(self):
        if not self.is_zero and not self.a < 0 < self.b:
            raise InvalidInterval(f"need a < 0 < b, got ({self.a}, {self.b})")


ZERO_ATOM = ExitPair(0.0, 0.0, is_zero=True)


@dataclass(frozen=True)
class SimConfig:
    n_paths: int = 10_000
    dt: float = 1e-4
    seed: int = 0
    t_max: float = 1000.0
    workers: int = 1

    def __post_init__(self):
        if self.n_paths < 1:
            raise InvalidArgument("n_paths must be at least 1")
        if not 0 < self.dt <= 1e-2:
            raise InvalidArgument("dt must lie in (0, 1e-2]")
        if not self.t_max > 0:
            raise InvalidArgument("t_max must be positive")
        if self.seed < 0:
            raise InvalidArgument("seed must be non-negative")
        if self.workers < 1:
            raise InvalidArgument("workers must be at least 1")

    def check_horizon(self, expected_tau: float):
        if self.t_max < 100 * expected_tau:
            raise InvalidArgument(
                f"t_max={self.t_max} is below 100 x expected tau ({expected_tau:.4g})"
            )


def path_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator for path ``index`` under ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _map_paths(fn, n_paths: int, workers: int) -> list:
    """Apply ``fn(index)`` to every path index, returning results in index order."""
    if workers == 1:
        return [fn(i) for i in range(n_paths)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n_paths), chunksize=max(1, n_paths // (8 * workers))))


def _stderr(values: np.ndarray) -> float:
    if values.size < 2:
        return 0.0
    return float(np.std(values, ddof=1) / math.sqrt(values.size))


# -- exact pair machinery ----------------------------------------------------


def _check_centered(mu: DiscreteDist):
    m = D.mean(mu)
    if abs(m) > CENTER_TOL:
        raise NotCentered(f"law has mean {m!r}, expected 0")


def pair_law(mu: DiscreteDist) -> tuple[float, list[tuple[float, float, float]]]:
    """Return ``(mu(0), [(a, b, prob), ...])`` for the randomized-pair construction."""
    _check_centered(mu)
    neg = [(float(v), p) for v, p in mu.atoms if v < 0 and p > 0]
    pos = [(float(v), p) for v, p in mu.atoms if v > 0 and p > 0]
    zero = mu.prob_of(0)
    m = math.fsum(b * pb for b, pb in pos)
    pairs = [(a, b, (b - a) * pa * pb / m) for a, pa in neg for b, pb in pos] if m > 0 else []
    return zero, pairs


def exit_two_point_exact(a: float, b: float) -> tuple[float, float]:
    """Exit of W from ``(a, b)`` started at 0: ``(P(hit b), E[tau])``."""
    if not a < 0 < b:
        raise InvalidInterval(f"need a < 0 < b, got ({a}, {b})")
    return -a / (b - a), -a * b


def embedded_law(mu: DiscreteDist) -> dict[float, float]:
    """Exact law of W_tau under the pair construction (no sampling)."""
    zero, pairs = pair_law(mu)
    out: dict[float, float] = {}
    if zero > 0:
        out[0.0] = zero
    for a, b, w in pairs:
        hit_b, _ = exit_two_point_exact(a, b)
        out[a] = out.get(a, 0.0) + w * (1.0 - hit_b)
        out[b] = out.get(b, 0.0) + w * hit_b
    return out


def expected_tau(mu: DiscreteDist) -> float:
    """Exact ``E[tau] = sum_pairs P(pair) * (-a b)``."""
    _, pairs = pair_law(mu)
    return math.fsum(w * exit_two_point_exact(a, b)[1] for a, b, w in pairs)


class _PairTable:
    def __init__(self, mu: DiscreteDist):
        zero, pairs = pair_law(mu)
        self.pairs = [ZERO_ATOM] + [ExitPair(a, b) for a, b, _ in pairs]
        weights = np.array([zero] + [w for _, _, w in pairs])
        self.cum = np.cumsum(weights)
        self.cum[-1] = max(self.cum[-1], 1.0)
        self.a = np.array([p.a for p in self.pairs])
        self.b = np.array([p.b for p in self.pairs])
        with np.errstate(invalid="ignore", divide="ignore"):
            self.hit_b = np.where(self.b > self.a, -self.a / (self.b - self.a), 0.0)

    def index(self, u):
        return np.minimum(np.searchsorted(self.cum, u, side="right"), len(self.pairs) - 1)


def sample_exit_pair(mu: DiscreteDist, rng: np.random.Generator) -> ExitPair:
    """Draw one exit pair for ``mu`` (which must be centred)."""
    table = _PairTable(mu)
    return table.pairs[int(table.index(rng.random()))]


# -- embedding ---------------------------------------------------------------


@dataclass(frozen=True)
class EmbeddingReport:
    empirical_dist: tuple[tuple[float, float], ...]
    mean_tau: float
    mean_tau_stderr: float
    target_variance: float
    n_paths: int

    def to_json(self) -> dict:
        out = asdict(self)
        out["empirical_dist"] = [{"value": v, "mass": w} for v, w in self.empirical_dist]
        return out


def simulate_embedding(mu: DiscreteDist, cfg: SimConfig) -> EmbeddingReport:
    """Sample exit pairs and exit sides; E[tau] uses the exact per-pair value -ab."""
    table = _PairTable(mu)
    cfg.check_horizon(expected_tau(mu))

    uniforms = np.array(_map_paths(lambda i: path_rng(cfg.seed, i).random(2), cfg.n_paths, cfg.workers))
    idx = table.index(uniforms[:, 0])
    hit_b = uniforms[:, 1] < table.hit_b[idx]
    exits = np.where(hit_b, table.b[idx], table.a[idx])
    taus = -table.a[idx] * table.b[idx]

    values = [float(v) for v in mu.values]
    counts = {v: 0 for v in values}
    found, freq = np.unique(exits, return_counts=True)
    for v, k in zip(found.tolist(), freq.tolist()):
        counts[v] += k
    empirical = tuple((v, counts[v] / cfg.n_paths) for v in values)
    return EmbeddingReport(
        empirical_dist=empirical,
        mean_tau=float(np.mean(taus)),
        mean_tau_stderr=_stderr(taus),
        target_variance=D.variance(mu),
        n_paths=cfg.n_paths,
    )


# -- discretized paths -------------------------------------------------------


def _walk_to_exit(rng, lo, hi, dt, max_steps, chunk, offsets):
    """Run W from 0 until it leaves ``(lo, hi)`` on the dt-grid.

    Returns ``(W_exit, n_steps, truncated, integrals)`` where ``integrals[k]``
    is the left-point sum of ``rho''(offsets[k] + W_s) dt`` over the steps
    before exit.
    """
    offsets = np.asarray(offsets, dtype=float)
    integrals = np.zeros(offsets.size)
    w = 0.0
    steps = 0
    sd = math.sqrt(dt)
    while steps < max_steps:
        size = min(chunk, max_steps - steps)
        path = w + np.cumsum(rng.standard_normal(size) * sd)
        out = np.flatnonzero((path <= lo) | (path >= hi))
        n_in = int(out[0]) if out.size else size
        # left points of this chunk: current position, then the interior points
        left = np.concatenate(([w], path[: n_in if out.size else size - 1]))
        integrals += rho_pp(offsets[:, None] + left[None, :]).sum(axis=1) * dt
        if out.size:
            return float(path[n_in]), steps + n_in + 1, False, integrals
        w = float(path[-1])
        steps += size
    return w, steps, True, integrals


def _parse_p(p) -> tuple[float, float]:
    p = as_rational(p)
    if not 0 < p < 1:
        raise DegenerateParameter(f"p must lie in (0, 1), got {p}")
    return float(p), float(1 - p)


def _chunk_size(e_tau: float, dt: float) -> int:
    return int(min(max(2.0 * e_tau / dt, 256), 1 << 16))


@dataclass(frozen=True)
class ItoReport:
    """Both sides of ``E rho(B_tau) - E rho(B_0) = 1/2 E int_0^tau rho''(B_s) ds``."""

    p: float
    dt: float
    lhs_estimate: float
    lhs_stderr: float
    rhs_estimate: float
    rhs_stderr: float
    n_paths_used: int
    truncated_paths: int

    @property
    def exact_lhs(self) -> float:
        """``-E rho(B_0) = (q - p) rho(q)``, using ``E rho(B_tau) = 0``."""
        q = 1.0 - self.p
        return (q - self.p) * rho(q)

    @property
    def valid(self) -> bool:
        return self.truncated_paths <= MAX_TRUNCATED_FRACTION * self.n_paths_used

    def gap(self) -> float:
        return abs(self.lhs_estimate - self.rhs_estimate)

    def consistent(self, c_sqrt_dt: float, k: float = 3.0) -> bool:
        bound = k * (self.lhs_stderr + self.rhs_stderr) + c_sqrt_dt * math.sqrt(self.dt)
        return self.gap() <= bound

    def to_json(self) -> dict:
        out = asdict(self)
        out["exact_lhs"] = self.exact_lhs
        return out


def simulate_ito_identity(p, cfg: SimConfig) -> ItoReport:
    """Monte Carlo for both sides of the Ito identity with B_0 ~ X - E[X], X ~ Bernoulli(p).

    The stopping time embeds Y = -X: W runs until it leaves ``(-q, p)``.
    Truncated paths are counted and left out of the estimates.
    """
    p, q = _parse_p(p)
    e_tau = p * q
    cfg.check_horizon(e_tau)
    max_steps = int(math.ceil(cfg.t_max / cfg.dt))
    chunk = _chunk_size(e_tau, cfg.dt)

    def one_path(i):
        rng = path_rng(cfg.seed, i)
        b0 = q if rng.random() < p else -p
        w_exit, _, truncated, (integral,) = _walk_to_exit(rng, -q, p, cfg.dt, max_steps, chunk, [b0])
        return truncated, rho(b0 + w_exit) - rho(b0), 0.5 * integral

    results = _map_paths(one_path, cfg.n_paths, cfg.workers)
    kept = np.array([not t for t, _, _ in results])
    lhs = np.array([v for _, v, _ in results])[kept]
    rhs = np.array([v for _, _, v in results])[kept]
    return ItoReport(
        p=p,
        dt=cfg.dt,
        lhs_estimate=float(np.mean(lhs)),
        lhs_stderr=_stderr(lhs),
        rhs_estimate=float(np.mean(rhs)),
        rhs_stderr=_stderr(rhs),
        n_paths_used=cfg.n_paths,
        truncated_paths=int((~kept).sum()),
    )


@dataclass(frozen=True)
class ConditioningReport:
    """Three estimates of ``E int_0^tau rho''(B_s) ds`` sharing W-paths and tau.

    ``combined`` integrates along ``B = B_0 + W`` with a random start,
    ``decomposed`` is ``p E int rho''(q + W) + q E int rho''(-p + W)``, and
    ``collapsed`` is ``(p - q) E int rho''(q + W)`` after the reflection
    ``rho''(x - p) = -rho''(x + q)``.
    """

    p: float
    dt: float
    combined: float
    combined_stderr: float
    decomposed: float
    decomposed_stderr: float
    collapsed: float
    collapsed_stderr: float
    n_paths_used: int
    truncated_paths: int

    def conditioning_consistent(self, k: float = 3.0) -> bool:
        return abs(self.combined - self.decomposed) <= k * (self.combined_stderr + self.decomposed_stderr)

    def reflection_consistent(self, k: float = 3.0) -> bool:
        slack = k * (self.decomposed_stderr + self.collapsed_stderr) + 1e-12
        return abs(self.decomposed - self.collapsed) <= slack

    @property
    def passed(self) -> bool:
        return self.conditioning_consistent() and self.reflection_consistent()

    def to_json(self) -> dict:
        out = asdict(self)
        out["conditioning_consistent"] = self.conditioning_consistent()
        out["reflection_consistent"] = self.reflection_consistent()
        return out


def verify_conditioning(p, cfg: SimConfig) -> ConditioningReport:
    p, q = _parse_p(p)
    e_tau = p * q
    cfg.check_horizon(e_tau)
    max_steps = int(math.ceil(cfg.t_max / cfg.dt))
    chunk = _chunk_size(e_tau, cfg.dt)

    def one_path(i):
        rng = path_rng(cfg.seed, i)
        start_high = rng.random() < p
        _, _, truncated, (from_q, from_minus_p) = _walk_to_exit(
            rng, -q, p, cfg.dt, max_steps, chunk, [q, -p]
        )
        combined = from_q if start_high else from_minus_p
        return truncated, combined, from_q, from_minus_p

    results = np.array(_map_paths(one_path, cfg.n_paths, cfg.workers), dtype=float)
    kept = results[:, 0] == 0
    combined, from_q, from_minus_p = results[kept, 1], results[kept, 2], results[kept, 3]
    decomposed = p * from_q + q * from_minus_p
    collapsed = (p - q) * from_q
    return ConditioningReport(
        p=p,
        dt=cfg.dt,
        combined=float(np.mean(combined)),
        combined_stderr=_stderr(combined),
        decomposed=float(np.mean(decomposed)),
        decomposed_stderr=_stderr(decomposed),
        collapsed=float(np.mean(collapsed)),
        collapsed_stderr=_stderr(collapsed),
        n_paths_used=cfg.n_paths,
        truncated_paths=int((~kept).sum()),
    )


def centered_negated_bernoulli(p) -> DiscreteDist:
    """Law of ``-X + p`` for X ~ Bernoulli(p): the centred optimal symmetrizer."""
    p = as_rational(p)
    return D.center(D.negate(D.bernoulli(p)))
