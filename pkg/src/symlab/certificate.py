"""The piecewise-parabolic test function rho and the bound it certifies.

``rho(x) = x(1-x)/2`` on [0, 1], extended to the real line by
``rho(1 + x) = -rho(x)`` and oddness.  Both extensions collapse into

    rho(x) = (-1)**floor(x) * f * (1 - f) / 2,   f = x - floor(x),

which is what :func:`rho` evaluates.  ``|rho''| = 1`` off the integers, and
feeding rho through Ito's rule along a Skorokhod embedding gives
``Var(Y) >= 2 rho(q) = p q`` for every symmetrizer Y of Bernoulli(p).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .dist import as_rational
from .errors import DegenerateParameter, InvalidArgument

INTEGER_EXCLUSION = 1e-9


def _parity_sign(k):
    # (-1)**k for integer-valued floats, negative k included
    return 1.0 - 2.0 * np.mod(k, 2.0)


def rho(x):
    """Evaluate rho at a scalar or array ``x``."""
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidArgument("rho is only defined for finite arguments")
    k = np.floor(arr)
    f = arr - k
    out = _parity_sign(k) * f * (1.0 - f) / 2.0
    return float(out) if out.ndim == 0 else out


def rho_pp(x):
    """Second derivative of rho: ``(-1)**(floor(x) + 1)`` off the integers, 0 on them.

    The value at integers is a convention; occupation time of a point is zero.
    """
    arr = np.asarray(x, dtype=float)
    k = np.floor(arr)
    out = np.where(arr == k, 0.0, -_parity_sign(k))
    return float(out) if out.ndim == 0 else out


def _check_p(p) -> float:
    if isinstance(p, (Fraction, int, str)):
        p = as_rational(p)
    if not 0 < p < 1:
        raise DegenerateParameter(f"p must lie in (0, 1), got {p}")
    return float(p)


def certificate_bound(p) -> float:
    """Lower bound ``2 rho(1 - p)`` on the variance of any symmetrizer of Bernoulli(p).

    Algebraically equal to ``p (1 - p)``.  At p = 1/2 the argument behind the
    bound degenerates and the true minimum variance is 0.
    """
    p = _check_p(p)
    return 2.0 * rho(1.0 - p)


def bound_applies(p) -> bool:
    """Whether the rho argument yields a valid bound (every p except 1/2)."""
    return as_rational(p) != Fraction(1, 2)


@dataclass(frozen=True)
class CertificateReport:
    samples_checked: int
    max_oddness_violation: float
    max_antiperiod_violation: float
    max_second_derivative_abs: float
    max_second_derivative_excess: float
    max_reflection_violation: float

    def violations(self) -> dict[str, float]:
        return {
            "oddness": self.max_oddness_violation,
            "antiperiod": self.max_antiperiod_violation,
            "second_derivative_excess": self.max_second_derivative_excess,
            "reflection": self.max_reflection_violation,
        }

    def passes(self, tol: float = 1e-12) -> bool:
        return all(v <= tol for v in self.violations().values())

    def to_json(self) -> dict:
        return asdict(self)


def _away_from_integers(x: np.ndarray) -> np.ndarray:
    return np.abs(x - np.round(x)) > INTEGER_EXCLUSION


def _max_or_zero(values: np.ndarray) -> float:
    return float(np.max(values)) if values.size else 0.0


def verify_certificate(n_samples: int, seed: int, p: float) -> CertificateReport:
    """Spot-check the defining properties of rho at uniform points of [-5, 5].

    Checks oddness, anti-periodicity, ``|rho''| <= 1`` and the reflection
    ``rho''(x - p) = -rho''(x + q)``.  Second-derivative checks skip points
    within ``INTEGER_EXCLUSION`` of an integer.
    """
    if n_samples < 1:
        raise InvalidArgument("n_samples must be at least 1")
    p = float(p)
    q = 1.0 - p
    x = np.random.default_rng(seed).uniform(-5.0, 5.0, size=n_samples)

    oddness = np.abs(rho(-x) + rho(x))
    antiperiod = np.abs(rho(1.0 + x) + rho(x))

    smooth = x[_away_from_integers(x)]
    pp_abs = np.abs(rho_pp(smooth))

    shifted_lo, shifted_hi = x - p, x + q
    ok = _away_from_integers(shifted_lo) & _away_from_integers(shifted_hi)
    reflection = np.abs(rho_pp(shifted_lo[ok]) + rho_pp(shifted_hi[ok]))

    max_pp = _max_or_zero(pp_abs)
    return CertificateReport(
        samples_checked=int(n_samples),
        max_oddness_violation=_max_or_zero(oddness),
        max_antiperiod_violation=_max_or_zero(antiperiod),
        max_second_derivative_abs=max_pp,
        max_second_derivative_excess=max(0.0, max_pp - 1.0),
        max_reflection_violation=_max_or_zero(reflection),
    )
