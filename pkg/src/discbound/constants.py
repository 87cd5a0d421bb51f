"""Explicit constants of the random-matrix discrepancy bounds.

Everything here is a pure function of its arguments.  The series
``A_s = 2 (sum_{k>=-1} sqrt(a_{k,s}))^2`` and ``B = 2 (sum_{k>=-1} sqrt(b_k))^2``
are truncated adaptively; the returned values are upper bounds on the
infinite sums that overshoot by at most ``tol``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import DomainError, PrecisionError
from .zeta import zeta

__all__ = [
    "Variant",
    "ConstantProfile",
    "BoundQuery",
    "AW_A",
    "AW_B",
    "b_seq",
    "c_factor",
    "log_c_factor",
    "a_term",
    "big_A",
    "big_B",
    "failure_budget",
    "bound_c",
]

AW_A = 1165.0
AW_B = 178.0
MAX_TERMS = 10_000

_LN2 = math.log(2.0)
_LN_PI = math.log(math.pi)
_LN_SQRT_2_OVER_PI = 0.5 * math.log(2.0 / math.pi)
_LN_1_1 = math.log(1.1)


class Variant(str, enum.Enum):
    """Which family of chaining constants to evaluate."""

    EXTREME = "extreme"
    STAR = "star"
    AW_DEP = "aw-dep"
    AW_CONST = "aw-const"

    @classmethod
    def parse(cls, value: "str | Variant") -> "Variant":
        try:
            return cls(value)
        except ValueError:
            names = ", ".join(v.value for v in cls)
            raise DomainError(f"unknown variant {value!r}; expected one of {names}") from None


def _check_k(k: int) -> None:
    if k < -1:
        raise DomainError(f"k must be >= -1, got {k}")


def _check_s(s: int) -> None:
    if s < 1:
        raise DomainError(f"dimension s must be >= 1, got {s}")


def b_seq(k: int) -> float:
    """``3`` for ``k in {-1, 0}``, else ``2^(3-k) (1 - 2^-k)``."""
    _check_k(k)
    if k <= 0:
        return 3.0
    return 2.0 ** (3 - k) * (1.0 - 2.0 ** -k)


def log_c_factor(s: int) -> float:
    """Natural log of :func:`c_factor`; finite for every ``s``."""
    _check_s(s)
    return max(0.0, (s - 101) * _LN_1_1)


def c_factor(s: int) -> float:
    """``max(1, 1.1^(s-101))``; ``inf`` once the power overflows."""
    _check_s(s)
    if s <= 101:
        return 1.0
    try:
        return 1.1 ** (s - 101)
    except OverflowError:
        return math.inf


def _bracket(variant: Variant, k: int, s: int) -> float:
    """The parenthesised factor of ``a_{k,s}`` (so that ``a = b_k * bracket``)."""
    if variant is Variant.EXTREME:
        lead = 2.0 * log_c_factor(s) + (k + 2) * _LN2 - _LN_PI
        return lead / s + 2.0 * math.log(2.0 * math.e * (2.0 ** (k + 2) + 1.0))
    if variant is Variant.STAR:
        lead = log_c_factor(s) + (k + 2) * _LN2 + _LN_SQRT_2_OVER_PI
        return lead / s + math.log(2.0 * math.e * (2.0 ** (k + 1) + 1.0))
    if variant is Variant.AW_DEP:
        lead = (k + 1) * _LN2 + _LN_SQRT_2_OVER_PI
        return lead / s + math.log(4.0 * math.e * (2.0 ** (k + 1) + 1.0))
    raise DomainError(f"variant {variant.value!r} has no k-dependent a-term")


def _bracket_majorant(variant: Variant, s: int) -> tuple[float, float]:
    """``(P, Q)`` with ``bracket(k) <= P + Q k`` for all ``k >= 0``.

    Uses ``ln(c e (2^m + 1)) <= ln c + 1 + (m + 1) ln 2``.
    """
    if variant is Variant.EXTREME:
        p = (2.0 * log_c_factor(s) + 2.0 * _LN2 - _LN_PI) / s + 2.0 + 8.0 * _LN2
        q = _LN2 / s + 2.0 * _LN2
    elif variant is Variant.STAR:
        p = (log_c_factor(s) + 2.0 * _LN2 + _LN_SQRT_2_OVER_PI) / s + 1.0 + 3.0 * _LN2
        q = _LN2 / s + _LN2
    elif variant is Variant.AW_DEP:
        p = (_LN2 + _LN_SQRT_2_OVER_PI) / s + 1.0 + 4.0 * _LN2
        q = _LN2 / s + _LN2
    else:
        raise DomainError(f"variant {variant.value!r} has no k-dependent a-term")
    return p, q


def a_term(variant: "Variant | str", k: int, s: int) -> float:
    """Chaining weight ``a_{k,s}`` of the given variant; ``a_{-1,s} = a_{0,s}``."""
    variant = Variant.parse(variant)
    _check_k(k)
    _check_s(s)
    if variant is Variant.AW_CONST:
        raise DomainError("aw-const uses the fixed A = 1165 and has no a-term")
    k = max(k, 0)
    return b_seq(k) * _bracket(variant, k, s)


def _geometric_tail(first: float, ratio: float) -> float:
    return first / (1.0 - ratio)


def _series(sqrt_term, tail_after, tol: float) -> float:
    """``2 (sum_{k>=-1} sqrt_term(k))^2`` as a certified upper bound within ``tol``."""
    if not tol > 0.0:
        raise DomainError(f"tol must be > 0, got {tol!r}")
    partial = sqrt_term(-1) + sqrt_term(0)
    k = 0
    while True:
        tail = tail_after(k)
        lower = 2.0 * partial * partial
        upper = 2.0 * (partial + tail) ** 2
        if upper - lower <= tol:
            return upper
        k += 1
        if k > MAX_TERMS:
            raise PrecisionError(f"series tail still {tail:.3g} after {MAX_TERMS} terms")
        partial += sqrt_term(k)


def big_A(variant: "Variant | str", s: int, tol: float = 1e-6) -> float:
    """``A_s = 2 (sum_{k>=-1} sqrt(a_{k,s}))^2`` for the given variant.

    For ``k >= 1``: ``a_{k,s} <= 2^(3-k) (P + Q k)``, whose square roots
    decay at least geometrically with ratio
    ``2^(-1/2) sqrt(1 + Q / (P + Q (K+1)))`` beyond the cutoff ``K``.
    """
    variant = Variant.parse(variant)
    _check_s(s)
    if variant is Variant.AW_CONST:
        return AW_A
    p, q = _bracket_majorant(variant, s)

    def sqrt_term(k: int) -> float:
        return math.sqrt(a_term(variant, k, s))

    def tail_after(k: int) -> float:
        j = k + 1
        lin = p + q * j
        first = math.sqrt(2.0 ** (3 - j) * lin)
        ratio = math.sqrt(0.5 * (1.0 + q / lin))
        return _geometric_tail(first, ratio)

    return _series(sqrt_term, tail_after, tol)


def big_B(tol: float = 1e-6) -> float:
    """``B = 2 (sum_{k>=-1} sqrt(b_k))^2``, using ``b_k <= 2^(3-k)`` for the tail."""

    def tail_after(k: int) -> float:
        return _geometric_tail(2.0 ** ((2 - k) / 2.0), math.sqrt(0.5))

    return _series(lambda k: math.sqrt(b_seq(k)), tail_after, tol)


def failure_budget(alpha: float, beta: float) -> float:
    """``(zeta(alpha) - 1)(zeta(beta) - 1)``; the bound fails with at most this probability."""
    return (zeta(alpha) - 1.0) * (zeta(beta) - 1.0)


@dataclass(frozen=True)
class BoundQuery:
    N: int
    s: int

    def __post_init__(self) -> None:
        if self.N < 2:
            raise DomainError(f"N must be >= 2 so that ln(log2 N) is defined, got {self.N}")
        _check_s(self.s)


@dataclass
class ConstantProfile:
    """A variant together with ``alpha``, ``beta`` and lazily evaluated constants.

    ``A_s`` maps dimensions to evaluated ``A_s`` values and fills up as
    dimensions are queried.
    """

    variant: Variant
    alpha: float = 1.73
    beta: float = 1.73
    tol: float = 1e-6
    A_s: dict[int, float] = field(default_factory=dict)
    B: float = field(init=False)

    def __post_init__(self) -> None:
        self.variant = Variant.parse(self.variant)
        if not (self.alpha > 1.0 and self.beta > 1.0):
            raise DomainError(f"alpha and beta must exceed 1, got {self.alpha}, {self.beta}")
        if not self.tol > 0.0:
            raise DomainError(f"tol must be > 0, got {self.tol!r}")
        self.B = AW_B if self.variant is Variant.AW_CONST else big_B(self.tol)

    def A(self, s: int) -> float:
        try:
            return self.A_s[s]
        except KeyError:
            value = big_A(self.variant, s, self.tol)
            self.A_s[s] = value
            return value


def bound_c(profile: ConstantProfile, q: BoundQuery) -> float:
    """The factor ``c`` in ``D_N <= c sqrt(s / N)`` for the profile's variant.

    ``sqrt(alpha A_s + beta B ln(log2 N) / s)``, or for ``aw-const``
    ``sqrt(alpha) sqrt(A + B ln(log2 N) / s)`` with ``A = 1165, B = 178``.
    """
    loglog = math.log(math.log2(q.N))
    if profile.variant is Variant.AW_CONST:
        return math.sqrt(profile.alpha) * math.sqrt(AW_A + AW_B * loglog / q.s)
    return math.sqrt(profile.alpha * profile.A(q.s) + profile.beta * profile.B * loglog / q.s)
