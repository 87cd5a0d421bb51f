"""Seeded double-infinite matrices with uniform entries in [0, 1).

Entry ``(n, s)`` is a keyed hash of ``(seed, n, s)``, so any ``N x s``
prefix can be materialised without generating the rest of the matrix and
every prefix agrees entry-by-entry with every larger one.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .discrepancy import PointSet
from .errors import DomainError

__all__ = ["MatrixSource", "MatrixPrefix", "entry", "entries", "prefix", "MAX_PREFIX_ENTRIES"]

MAX_PREFIX_ENTRIES = 10**8
_MASK64 = (1 << 64) - 1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_INV_2_53 = 1.0 / (1 << 53)


def _mix(z: np.ndarray) -> np.ndarray:
    # splitmix64 step: add the Weyl increment, then the finaliser
    z = z + _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


@dataclass(frozen=True)
class MatrixSource:
    seed: int

    @property
    def key(self) -> np.uint64:
        return np.uint64(self.seed & _MASK64)


def entries(src: MatrixSource, n, s) -> np.ndarray:
    """Vectorised entries for broadcastable 1-based row and column indices."""
    n = np.asarray(n)
    s = np.asarray(s)
    if np.any(n < 1) or np.any(s < 1):
        raise DomainError("row and column indices are 1-based")
    n64, s64 = np.broadcast_arrays(n.astype(np.uint64), s.astype(np.uint64))
    with np.errstate(over="ignore"):
        z = _mix(np.full(n64.shape, src.key, dtype=np.uint64))
        z = _mix(z ^ n64)
        z = _mix(z ^ _mix(s64))
    return (z >> np.uint64(11)).astype(np.float64) * _INV_2_53


def entry(src: MatrixSource, n: int, s: int) -> float:
    """The ``(n, s)`` entry (1-based) of the matrix keyed by ``src.seed``."""
    return float(entries(src, np.array([n]), np.array([s]))[0])


@dataclass(frozen=True)
class MatrixPrefix:
    seed: int
    N: int
    s: int
    points: PointSet


def prefix(src: MatrixSource, N: int, s: int) -> MatrixPrefix:
    """The top-left ``N x s`` block, rows as points in ``[0, 1)^s``."""
    if N < 1 or s < 1:
        raise DomainError(f"N and s must be >= 1, got N={N}, s={s}")
    if N * s > MAX_PREFIX_ENTRIES:
        raise DomainError(f"prefix of {N * s} entries exceeds the limit {MAX_PREFIX_ENTRIES}")
    rows = np.arange(1, N + 1)[:, None]
    cols = np.arange(1, s + 1)[None, :]
    return MatrixPrefix(src.seed, N, s, PointSet(entries(src, rows, cols)))
