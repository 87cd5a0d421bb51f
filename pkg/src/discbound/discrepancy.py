"""Star and extreme discrepancy of finite point sets.

The suprema over half-open boxes are reduced to maxima over critical
grids: per axis the distinct point coordinates plus ``1`` (anchored) or
``0`` and ``1`` (unanchored).  At every grid box both one-sided limits are
evaluated, ``vol - open/N`` (box shrunk from outside, points on the faces
excluded) and ``closed/N - vol`` (box grown from inside, points on the
faces included).
"""
from __future__ import annotations

import enum
import io
import os
from dataclasses import dataclass
from typing import Iterable, TextIO, Union

import numpy as np

from . import kernels
from .errors import BudgetExceededError, DomainError

__all__ = [
    "BoxKind",
    "Closure",
    "Box",
    "PointSet",
    "DiscrepancyResult",
    "EXACT_BUDGET",
    "as_point_set",
    "local_discrepancy",
    "star_discrepancy_exact",
    "extreme_discrepancy_exact",
    "discrepancy_lower_bound",
    "read_points_csv",
    "write_points_csv",
]

EXACT_BUDGET = 10**8
_ESTIMATE_BATCH = 1 << 15
# rank bitmasks above this size fall back to direct point-in-box counting
MASK_BUDGET_BYTES = 1 << 28


class BoxKind(str, enum.Enum):
    ANCHORED = "anchored"
    UNANCHORED = "unanchored"


class Closure(str, enum.Enum):
    OPEN = "open"
    CLOSED = "closed"


@dataclass(frozen=True)
class Box:
    """``[lower, upper)`` in the unit cube; anchored boxes have ``lower == 0``."""

    kind: BoxKind
    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self) -> None:
        lo = tuple(float(v) for v in self.lower)
        up = tuple(float(v) for v in self.upper)
        object.__setattr__(self, "kind", BoxKind(self.kind))
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)
        if len(lo) != len(up) or not lo:
            raise DomainError("box corners must be non-empty and of equal dimension")
        if not all(0.0 <= a <= b <= 1.0 for a, b in zip(lo, up)):
            raise DomainError(f"box corners must satisfy 0 <= lower <= upper <= 1: {lo}, {up}")
        if self.kind is BoxKind.ANCHORED and any(lo):
            raise DomainError("anchored boxes must have lower corner 0")

    @classmethod
    def anchored(cls, upper: Iterable[float]) -> "Box":
        upper = tuple(upper)
        return cls(BoxKind.ANCHORED, (0.0,) * len(upper), upper)

    @classmethod
    def unanchored(cls, lower: Iterable[float], upper: Iterable[float]) -> "Box":
        return cls(BoxKind.UNANCHORED, tuple(lower), tuple(upper))

    @property
    def dim(self) -> int:
        return len(self.upper)

    def volume(self) -> float:
        vol = 1.0
        for a, b in zip(self.lower, self.upper):
            vol = vol * (b - a)
        return vol

    def is_empty(self) -> bool:
        return any(a >= b for a, b in zip(self.lower, self.upper))

    def issubset(self, other: "Box") -> bool:
        """Set inclusion of the half-open boxes (empty boxes are subsets of anything)."""
        if self.dim != other.dim:
            raise DomainError(f"cannot compare boxes of dimension {self.dim} and {other.dim}")
        if self.is_empty():
            return True
        if other.is_empty():
            return False
        return all(
            c <= a and b <= d
            for a, b, c, d in zip(self.lower, self.upper, other.lower, other.upper)
        )


@dataclass(frozen=True)
class PointSet:
    """``N`` points in ``[0, 1)^s`` stored as an ``(N, s)`` float array."""

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.array(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DomainError(f"point set must be a non-empty (N, s) array, got shape {pts.shape}")
        if not np.all((pts >= 0.0) & (pts < 1.0)):
            raise DomainError("all coordinates must lie in [0, 1)")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def s(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class DiscrepancyResult:
    value: float
    witness: Box
    exact: bool
    closure: Closure


PointsLike = Union[PointSet, np.ndarray, Iterable]


def as_point_set(points: PointsLike) -> PointSet:
    return points if isinstance(points, PointSet) else PointSet(points)


def _counts(points: np.ndarray, box: Box, closure: Closure) -> int:
    lo = np.asarray(box.lower)
    up = np.asarray(box.upper)
    if closure is Closure.CLOSED:
        inside = (points >= lo) & (points <= up)
    elif box.kind is BoxKind.ANCHORED:
        # the origin face of an anchored box is always part of it
        inside = points < up
    else:
        inside = (points > lo) & (points < up)
    return int(np.all(inside, axis=1).sum())


def local_discrepancy(P: PointsLike, box: Box, closure: Closure | str = Closure.CLOSED) -> float:
    """Signed ``count / N - vol(box)`` with the given face convention."""
    P = as_point_set(P)
    closure = Closure(closure)
    if box.dim != P.s:
        raise DomainError(f"box dimension {box.dim} does not match point dimension {P.s}")
    return _counts(P.points, box, closure) / P.n - box.volume()


def _grids(points: np.ndarray, extras: tuple[float, ...]):
    grids, ranks = [], np.empty(points.shape, dtype=np.int64)
    for j in range(points.shape[1]):
        g = np.unique(np.concatenate([points[:, j], extras]))
        grids.append(g)
        ranks[:, j] = np.searchsorted(g, points[:, j])
    offsets = np.zeros(len(grids) + 1, dtype=np.int64)
    offsets[1:] = np.cumsum([len(g) for g in grids])
    return grids, np.ascontiguousarray(ranks), np.concatenate(grids), offsets


def _check_budget(cost: float, what: str) -> None:
    if cost > EXACT_BUDGET:
        raise BudgetExceededError(
            f"exact {what} discrepancy needs ~{cost:.3g} grid cells (budget {EXACT_BUDGET:.0e}); "
            "use discrepancy_lower_bound instead"
        )


def star_discrepancy_exact(P: PointsLike) -> DiscrepancyResult:
    """Exact ``sup_y |#{x in [0, y)} / N - vol([0, y))|``."""
    P = as_point_set(P)
    _check_budget(float(P.n + 1) ** P.s, "star")
    grids, ranks, flat, offsets = _grids(P.points, (1.0,))
    value, idx, closure = kernels.star_grid_max(ranks, flat, offsets)
    witness = Box.anchored(grids[j][idx[j]] for j in range(P.s))
    return DiscrepancyResult(float(value), witness, True, Closure.CLOSED if closure else Closure.OPEN)


def extreme_discrepancy_exact(P: PointsLike) -> DiscrepancyResult:
    """Exact ``sup_{a <= b} |#{x in [a, b)} / N - vol([a, b))|``."""
    P = as_point_set(P)
    _check_budget(float(P.n + 2) ** (2 * P.s), "extreme")
    grids, ranks, flat, offsets = _grids(P.points, (0.0, 1.0))
    value, lo, hi, closure = kernels.extreme_grid_max(ranks, flat, offsets)
    witness = Box.unanchored(
        (grids[j][lo[j]] for j in range(P.s)), (grids[j][hi[j]] for j in range(P.s))
    )
    return DiscrepancyResult(float(value), witness, True, Closure.CLOSED if closure else Closure.OPEN)


def _snap_nearest(grid: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Index of the grid value nearest to each ``v`` (ties go down)."""
    i = np.clip(np.searchsorted(grid, v), 1, len(grid) - 1)
    return np.where(v - grid[i - 1] <= grid[i] - v, i - 1, i)


def _rank_masks(ranks: np.ndarray, sizes: list[int]):
    """Per axis and grid index ``g``, the bitmask of points with rank below ``g``."""
    n = ranks.shape[0]
    words = -(-n // 64)
    mask_offsets = np.zeros(len(sizes) + 1, dtype=np.int64)
    mask_offsets[1:] = np.cumsum([m + 1 for m in sizes])
    masks = np.zeros((int(mask_offsets[-1]), words), dtype=np.uint64)
    step = max(1, (1 << 22) // max(1, n))
    for j, m in enumerate(sizes):
        for g0 in range(0, m + 1, step):
            g = np.arange(g0, min(m + 1, g0 + step))
            bits = np.zeros((len(g), words * 64), dtype=bool)
            bits[:, :n] = ranks[None, :, j] < g[:, None]
            packed = np.packbits(bits, axis=1, bitorder="little")
            masks[mask_offsets[j] + g] = packed.view("<u8").astype(np.uint64)
    return masks, mask_offsets


def discrepancy_lower_bound(
    P: PointsLike, kind: str = "star", trials: int = 100_000, rng_seed: int = 0
) -> DiscrepancyResult:
    """Randomised lower bound: best of ``trials`` random grid boxes.

    Each random box has its corners snapped to the nearest critical-grid
    values and is scored with both face conventions; every score is a
    limit of genuine local discrepancies, so the result never exceeds the
    true discrepancy.
    """
    P = as_point_set(P)
    if kind not in ("star", "extreme"):
        raise DomainError(f"kind must be 'star' or 'extreme', got {kind!r}")
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    anchored = kind == "star"
    grids, ranks, _, _ = _grids(P.points, (1.0,) if anchored else (0.0, 1.0))
    n, s = P.n, P.s
    sizes = [len(g) for g in grids]
    use_masks = sum(m + 1 for m in sizes) * (-(-n // 64)) * 8 <= MASK_BUDGET_BYTES
    if use_masks:
        masks, mask_offsets = _rank_masks(ranks, sizes)
    rng = np.random.default_rng(rng_seed)
    best = None
    done = 0
    while done < trials:
        t = min(_ESTIMATE_BATCH, trials - done)
        if anchored:
            raw = rng.random((t, s))
            up_idx = np.column_stack([_snap_nearest(grids[j], raw[:, j]) for j in range(s)])
            lo_idx = np.zeros_like(up_idx)
        else:
            raw = rng.random((t, 2, s))
            u = np.column_stack([_snap_nearest(grids[j], raw[:, 0, j]) for j in range(s)])
            v = np.column_stack([_snap_nearest(grids[j], raw[:, 1, j]) for j in range(s)])
            lo_idx, up_idx = np.minimum(u, v), np.maximum(u, v)
        upper = np.column_stack([grids[j][up_idx[:, j]] for j in range(s)])
        lower = np.zeros_like(upper) if anchored else np.column_stack(
            [grids[j][lo_idx[:, j]] for j in range(s)]
        )
        if use_masks:
            open_c, closed_c = kernels.grid_box_counts(
                masks, mask_offsets, np.ascontiguousarray(lo_idx), np.ascontiguousarray(up_idx), anchored
            )
        else:
            open_c, closed_c = kernels.box_counts(P.points, lower, upper, anchored)
        vol = np.ones(t)
        for j in range(s):
            vol = vol * (upper[:, j] - lower[:, j])
        scores = np.column_stack([np.abs(open_c / n - vol), np.abs(closed_c / n - vol)]).ravel()
        pos = int(np.argmax(scores))
        if best is None or scores[pos] > best[0]:
            row, which = divmod(pos, 2)
            best = (float(scores[pos]), lower[row].copy(), upper[row].copy(), which)
        done += t
    value, lo, up, which = best
    witness = Box.anchored(up) if anchored else Box.unanchored(lo, up)
    return DiscrepancyResult(value, witness, False, Closure.CLOSED if which else Closure.OPEN)


def read_points_csv(source: Union[str, os.PathLike, TextIO]) -> PointSet:
    """Read points from CSV: one point per row, ``#`` lines are comments."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            return read_points_csv(fh)
    rows = []
    for lineno, line in enumerate(source, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([float(tok) for tok in line.split(",")])
        except ValueError:
            raise DomainError(f"line {lineno}: cannot parse {line!r}") from None
        if len(rows[-1]) != len(rows[0]):
            raise DomainError(f"line {lineno}: expected {len(rows[0])} coordinates")
    if not rows:
        raise DomainError("no points found")
    return PointSet(np.array(rows))


def write_points_csv(target: Union[str, os.PathLike, TextIO], P: PointsLike) -> None:
    P = as_point_set(P)
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w", encoding="utf-8", newline="") as fh:
            write_points_csv(fh, P)
        return
    buf = io.StringIO()
    buf.write("# " + ",".join(f"x_{j + 1}" for j in range(P.s)) + "\n")
    for row in P.points:
        buf.write(",".join(repr(float(v)) for v in row) + "\n")
    target.write(buf.getvalue())

