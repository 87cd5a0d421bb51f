"""Riemann zeta on the real half-line (1, inf) and its inverse.

Euler-Maclaurin summation with a fixed head of ``_HEAD`` terms and
Bernoulli corrections up to ``B_{2 * _ORDER}``.  For real ``x > 1`` the
remainder is bounded in magnitude by the first omitted correction term,
which is returned alongside the value by :func:`zeta_with_error`.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .errors import DomainError, PrecisionError

__all__ = ["zeta", "zeta_with_error", "zeta_inv"]

_HEAD = 10
_ORDER = 9
_ABS_TOL = 1e-12

# B_2, B_4, ..., B_20
_BERNOULLI_EVEN = (
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
    Fraction(43867, 798),
    Fraction(-174611, 330),
)
# B_{2j} / (2j)!
_EM_COEFFS = tuple(
    float(b / math.factorial(2 * j)) for j, b in enumerate(_BERNOULLI_EVEN, start=1)
)


def zeta_with_error(x: float) -> tuple[float, float]:
    """Return ``(zeta(x), bound)`` where ``bound`` majorises the truncation error."""
    if not x > 1.0:
        raise DomainError(f"zeta is defined here only for x > 1, got {x!r}")
    if math.isinf(x):
        return 1.0, 0.0
    n = float(_HEAD)
    head = math.fsum(k ** -x for k in range(1, _HEAD))
    n_pow = n ** -x
    parts = [head, n ** (1.0 - x) / (x - 1.0), 0.5 * n_pow]
    # rising = x (x+1) ... (x+2j-2); power = N^{-x-2j+1}
    rising = x
    power = n_pow / n
    for j in range(1, _ORDER + 1):
        parts.append(_EM_COEFFS[j - 1] * rising * power)
        rising *= (x + 2 * j - 1) * (x + 2 * j)
        power /= n * n
    remainder = abs(_EM_COEFFS[_ORDER] * rising * power)
    return math.fsum(parts), remainder


def zeta(x: float) -> float:
    """Riemann zeta function for real ``x > 1`` to absolute error 1e-12."""
    value, err = zeta_with_error(x)
    if err > _ABS_TOL:
        raise PrecisionError(f"zeta({x!r}) remainder bound {err:.3g} exceeds {_ABS_TOL}")
    return value


def zeta_inv(y: float, tol: float = 1e-10) -> float:
    """Unique ``x > 1`` with ``zeta(x) == y``, found by bisection on ``[1 + 1e-9, 50]``."""
    if not y > 1.0:
        raise DomainError(f"zeta_inv requires y > 1, got {y!r}")
    lo, hi = 1.0 + 1e-9, 50.0
    if y > zeta(lo) or y < zeta(hi):
        raise DomainError(f"zeta_inv({y!r}) lies outside the bracket [{lo}, {hi}]")
    # zeta is strictly decreasing: zeta(lo) >= y >= zeta(hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if zeta(mid) > y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
