"""Finite-support distributions with exact rational atoms.

Atom values are :class:`fractions.Fraction` so that the pairing ``s <-> -s``
used by symmetry checks is exact.  Probabilities are plain floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Union

from .errors import DegenerateParameter, InvalidArgument, NonRepresentableMean

Rational = Fraction

MASS_TOL = 1e-12
DEFAULT_MAX_DENOMINATOR = 10**6
# irrationals lie within ~1/den**2 = 1e-12 of some den <= 1e6 fraction, so the
# snap tolerance has to sit well below that
MEAN_SNAP_TOL = 1e-14

RationalLike = Union[Fraction, int, str]


def as_rational(value, max_denominator: int = DEFAULT_MAX_DENOMINATOR) -> Fraction:
    """Convert ``value`` to a Fraction.

    Integers, Fractions and strings such as ``"3/10"`` or ``"0.3"`` convert
    exactly.  Floats are snapped to the nearest fraction with denominator at
    most ``max_denominator``.
    """
    if isinstance(value, bool):
        raise InvalidArgument("booleans are not rationals")
    if isinstance(value, (_RationalABC, str)):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidArgument(f"cannot parse {value!r} as a rational") from exc
    value = float(value)
    if not math.isfinite(value):
        raise InvalidArgument(f"non-finite value {value!r}")
    return Fraction(value).limit_denominator(max_denominator)


@dataclass(frozen=True)
class DiscreteDist:
    """Probability law on finitely many rational points.

    ``atoms`` is a tuple of ``(value, prob)`` sorted by strictly increasing
    value.  Use :meth:`from_pairs` to build one from unsorted or repeated
    values.
    """

    atoms: tuple[tuple[Fraction, float], ...]

    def __post_init__(self):
        if not self.atoms:
            raise InvalidArgument("a distribution needs at least one atom")
        atoms = tuple((Fraction(v), float(p)) for v, p in self.atoms)
        for (v0, _), (v1, _) in zip(atoms, atoms[1:]):
            if not v0 < v1:
                raise InvalidArgument("atom values must be strictly increasing")
        total = math.fsum(p for _, p in atoms)
        if any(p < 0 or not math.isfinite(p) for _, p in atoms):
            raise InvalidArgument("probabilities must be finite and non-negative")
        if abs(total - 1.0) > MASS_TOL:
            raise InvalidArgument(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[RationalLike, float]]) -> "DiscreteDist":
        """Build a distribution, merging repeated values and sorting."""
        acc: dict[Fraction, float] = {}
        for v, p in pairs:
            key = as_rational(v)
            acc[key] = acc.get(key, 0.0) + float(p)
        return cls(tuple(sorted(acc.items())))

    @classmethod
    def point_mass(cls, value: RationalLike) -> "DiscreteDist":
        return cls(((as_rational(value), 1.0),))

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(v for v, _ in self.atoms)

    @property
    def probs(self) -> tuple[float, ...]:
        return tuple(p for _, p in self.atoms)

    def prob_of(self, value: RationalLike) -> float:
        key = as_rational(value)
        for v, p in self.atoms:
            if v == key:
                return p
        return 0.0

    def as_dict(self) -> dict[Fraction, float]:
        return dict(self.atoms)

    def to_json(self) -> dict:
        return {
            "atoms": [
                {"num": v.numerator, "den": v.denominator, "prob": p}
                for v, p in self.atoms
            ]
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "DiscreteDist":
        try:
            pairs = [(Fraction(a["num"], a["den"]), float(a["prob"])) for a in obj["atoms"]]
        except (KeyError, TypeError, ZeroDivisionError) as exc:
            raise InvalidArgument(f"malformed distribution JSON: {exc}") from exc
        return cls(tuple(pairs))

    def __len__(self) -> int:
        return len(self.atoms)


def bernoulli(p) -> DiscreteDist:
    """Bernoulli(p) on {0, 1}.  ``p`` may be a Fraction, a string or a float."""
    p = as_rational(p)
    if not 0 < p < 1:
        raise DegenerateParameter(f"Bernoulli parameter must lie in (0, 1), got {p}")
    return DiscreteDist(((Fraction(0), float(1 - p)), (Fraction(1), float(p))))


def mean(d: DiscreteDist) -> float:
    return math.fsum(float(v) * p for v, p in d.atoms)


def variance(d: DiscreteDist) -> float:
    m = mean(d)
    # central form avoids cancellation in E[X^2] - E[X]^2
    return math.fsum(p * (float(v) - m) ** 2 for v, p in d.atoms)


def exact_mean(d: DiscreteDist, max_denominator: int = DEFAULT_MAX_DENOMINATOR) -> Fraction:
    """Mean of ``d`` as a rational with denominator at most ``max_denominator``.

    Probabilities are floats, so the mean is only known up to rounding; it is
    snapped to the nearest small-denominator rational and rejected if that
    rational is further than ``MEAN_SNAP_TOL * max|v|`` from the float mean.
    """
    raw = sum((v * Fraction(p) for v, p in d.atoms), Fraction(0))
    snapped = raw.limit_denominator(max_denominator)
    scale = max(1.0, max(abs(float(v)) for v in d.values))
    if abs(float(raw - snapped)) > MEAN_SNAP_TOL * scale:
        raise NonRepresentableMean(
            f"mean {float(raw)!r} is not a rational with denominator <= {max_denominator}"
        )
    return snapped


def negate(d: DiscreteDist) -> DiscreteDist:
    return DiscreteDist(tuple((-v, p) for v, p in reversed(d.atoms)))


def shift(d: DiscreteDist, c: RationalLike) -> DiscreteDist:
    c = as_rational(c)
    return DiscreteDist(tuple((v + c, p) for v, p in d.atoms))


def center(d: DiscreteDist, max_denominator: int = DEFAULT_MAX_DENOMINATOR) -> DiscreteDist:
    """Shift ``d`` so its mean is exactly zero (see :func:`exact_mean`)."""
    return shift(d, -exact_mean(d, max_denominator))


def convolve(d1: DiscreteDist, d2: DiscreteDist) -> DiscreteDist:
    """Law of the sum of independent draws from ``d1`` and ``d2``.

    Tiny atoms are kept; nothing is pruned.
    """
    acc: dict[Fraction, float] = {}
    for v1, p1 in d1.atoms:
        for v2, p2 in d2.atoms:
            s = v1 + v2
            acc[s] = acc.get(s, 0.0) + p1 * p2
    return DiscreteDist(tuple(sorted(acc.items())))


def is_symmetric_about_zero(d: DiscreteDist, tol: float = MASS_TOL) -> bool:
    """True iff P(v) and P(-v) agree within ``tol`` for every atom v.

    A value whose mirror image is absent is compared against zero mass.
    """
    if tol < 0:
        raise InvalidArgument("tol must be non-negative")
    masses = d.as_dict()
    return all(abs(p - masses.get(-v, 0.0)) <= tol for v, p in d.atoms)
