"""delta-covers and delta-bracketing covers of anchored and unanchored boxes.

The constructions are uniform grids, far from minimal but provably valid:

* anchored delta-cover: all ``[0, y)`` with ``y`` on the grid ``{1/m, ..., 1}``,
  ``m = ceil(s / delta)``; snapping ``x`` down and up per axis changes the
  volume by at most ``s / m <= delta``.
* unanchored delta-bracketing cover: grid ``{0, 1/m, ..., 1}`` with
  ``m = ceil(2 s / delta)``; the outer box ``[g_i, g_j)`` and the inner box
  ``[g_{i+1}, g_{j-1})`` differ by at most ``2 s / m <= delta`` in volume.

Grid covers are stored implicitly (their size grows like ``m^(2s)``) and
enumerated lazily.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, TextIO, Union

import numpy as np

from .constants import c_factor
from .discrepancy import Box, BoxKind
from .errors import DomainError

__all__ = [
    "CoverSet",
    "CoverReport",
    "build_cover_anchored",
    "build_bracketing_unanchored",
    "validate_cover",
    "bracketing_bound_anchored",
    "bracketing_bound_unanchored",
    "cover_bracketing_relation_check",
    "minimal_cover_size_1d",
    "minimal_bracketing_size_1d",
    "write_cover_csv",
]

VOLUME_SLACK = 1e-12
MAX_EXPORT = 10**6


def _check_delta(delta: float) -> None:
    if not 0.0 < delta <= 1.0:
        raise DomainError(f"delta must lie in (0, 1], got {delta!r}")


def _check_s(s: int) -> None:
    if s < 1:
        raise DomainError(f"dimension s must be >= 1, got {s}")


def _grid_resolution(width: float, delta: float) -> int:
    # smallest m with width / m <= delta, robust to 3 / 0.1 = 30.000000000000004
    m = max(1, math.ceil(width / delta - 1e-9))
    while width / m > delta * (1.0 + 1e-12):
        m += 1
    return m


@dataclass(frozen=True, eq=False)
class CoverSet:
    """A finite family of boxes (or nested box pairs when ``bracketing``).

    Either ``explicit`` holds the elements, or ``axis_grid`` holds the
    per-axis grid from which the grid constructions are generated.
    """

    family: BoxKind
    delta: float
    s: int
    bracketing: bool
    explicit: Optional[tuple] = None
    axis_grid: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", BoxKind(self.family))
        _check_delta(self.delta)
        _check_s(self.s)
        if (self.explicit is None) == (self.axis_grid is None):
            raise DomainError("a cover needs exactly one of explicit elements or an axis grid")
        if self.explicit is not None:
            object.__setattr__(self, "explicit", tuple(self.explicit))
            for el in self.explicit:
                boxes = el if self.bracketing else (el,)
                for box in boxes:
                    if box.kind is not self.family or box.dim != self.s:
                        raise DomainError(f"{box} does not belong to the {self.family.value} family")
                if self.bracketing:
                    inner, outer = el
                    if not inner.issubset(outer):
                        raise DomainError(f"bracket {el} is not nested")
                    if outer.volume() - inner.volume() > self.delta + VOLUME_SLACK:
                        raise DomainError(f"bracket {el} is wider than delta")

    @classmethod
    def from_boxes(cls, family, delta, boxes) -> "CoverSet":
        boxes = tuple(boxes)
        return cls(family, delta, boxes[0].dim if boxes else 1, False, explicit=boxes)

    @classmethod
    def from_brackets(cls, family, delta, pairs) -> "CoverSet":
        pairs = tuple(pairs)
        return cls(family, delta, pairs[0][0].dim if pairs else 1, True, explicit=pairs)

    def _axis_count(self) -> int:
        m = len(self.axis_grid)
        return m if self.family is BoxKind.ANCHORED else m * (m - 1) // 2

    def __len__(self) -> int:
        if self.explicit is not None:
            return len(self.explicit)
        return self._axis_count() ** self.s

    def elements(self) -> Iterator:
        """Boxes (or ``(inner, outer)`` pairs) in lexicographic grid order."""
        if self.explicit is not None:
            yield from self.explicit
            return
        g = [float(v) for v in self.axis_grid]
        if self.family is BoxKind.ANCHORED:
            for y in itertools.product(g, repeat=self.s):
                yield Box.anchored(y)
            return
        m = len(g)
        axis_pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
        for combo in itertools.product(axis_pairs, repeat=self.s):
            outer = Box.unanchored((g[i] for i, _ in combo), (g[j] for _, j in combo))
            inner_lo = [g[i + 1] for i, _ in combo]
            inner_up = [max(g[j - 1], g[i + 1]) for i, j in combo]
            yield Box.unanchored(inner_lo, inner_up), outer


def build_cover_anchored(delta: float, s: int) -> CoverSet:
    """Grid delta-cover of the anchored boxes ``[0, x)``; ``ceil(s/delta)^s`` elements."""
    _check_delta(delta)
    _check_s(s)
    m = _grid_resolution(s, delta)
    grid = np.arange(1, m + 1, dtype=np.float64) / m
    return CoverSet(BoxKind.ANCHORED, delta, s, False, axis_grid=grid)


def build_bracketing_unanchored(delta: float, s: int) -> CoverSet:
    """Grid delta-bracketing cover of the unanchored boxes ``[a, b)``.

    Uses the grid of the anchored construction at ``delta / 2`` on both
    corners, so it has at most ``ceil(2s/delta)^(2s)`` brackets.
    """
    _check_delta(delta)
    _check_s(s)
    m = _grid_resolution(2 * s, delta)
    grid = np.arange(0, m + 1, dtype=np.float64) / m
    return CoverSet(BoxKind.UNANCHORED, delta, s, True, axis_grid=grid)


@dataclass
class CoverReport:
    passed: bool
    failures: list[Box]
    samples: int


def _empty(lo: np.ndarray, up: np.ndarray) -> np.ndarray:
    return np.any(lo >= up, axis=-1)


def _subset(in_lo, in_up, out_lo, out_up) -> np.ndarray:
    """Broadcast set inclusion ``[in_lo, in_up) <= [out_lo, out_up)``."""
    nested = np.all((out_lo <= in_lo) & (in_up <= out_up), axis=-1)
    return _empty(in_lo, in_up) | (nested & ~_empty(out_lo, out_up))


def _volume(lo: np.ndarray, up: np.ndarray) -> np.ndarray:
    w = np.maximum(up - lo, 0.0)
    vol = np.ones(w.shape[:-1])
    for j in range(w.shape[-1]):
        vol = vol * w[..., j]
    return vol


def _sample_family(family: BoxKind, samples: int, s: int, rng) -> tuple[np.ndarray, np.ndarray]:
    if family is BoxKind.ANCHORED:
        up = rng.random((samples, s))
        return np.zeros_like(up), up
    raw = rng.random((samples, 2, s))
    return raw.min(axis=1), raw.max(axis=1)


def _propose_from_grid(cover: CoverSet, a_lo: np.ndarray, a_up: np.ndarray):
    """Per-axis tightest grid candidates ``(u_lo, u_up, v_lo, v_up)`` for each sample."""
    g = cover.axis_grid
    m = len(g)
    if cover.family is BoxKind.ANCHORED:
        # largest grid value <= x (index -1 means the empty box) and smallest >= x
        below = np.searchsorted(g, a_up, side="right") - 1
        above = np.searchsorted(g, a_up, side="left")
        u_up = np.where(below >= 0, g[np.clip(below, 0, m - 1)], 0.0)
        v_up = g[np.clip(above, 0, m - 1)]
        zeros = np.zeros_like(a_up)
        return zeros, u_up, zeros, v_up
    i = np.clip(np.searchsorted(g, a_lo, side="right") - 1, 0, m - 2)
    j = np.clip(np.searchsorted(g, a_up, side="left"), i + 1, m - 1)
    v_lo, v_up = g[i], g[j]
    u_lo = g[i + 1]
    u_up = np.maximum(g[j - 1], u_lo)
    return u_lo, u_up, v_lo, v_up


def _best_explicit(cover: CoverSet, a_lo: np.ndarray, a_up: np.ndarray) -> np.ndarray:
    """Minimal ``vol(V) - vol(U)`` over admissible choices, ``inf`` if none."""
    if cover.bracketing:
        inner = np.array([[p[0].lower, p[0].upper] for p in cover.explicit])
        outer = np.array([[p[1].lower, p[1].upper] for p in cover.explicit])
        gap = _volume(outer[:, 0], outer[:, 1]) - _volume(inner[:, 0], inner[:, 1])
        ok = _subset(inner[None, :, 0], inner[None, :, 1], a_lo[:, None], a_up[:, None])
        ok &= _subset(a_lo[:, None], a_up[:, None], outer[None, :, 0], outer[None, :, 1])
        return np.where(ok, gap[None, :], np.inf).min(axis=1, initial=np.inf)
    boxes = np.array([[b.lower, b.upper] for b in cover.explicit]).reshape(-1, 2, cover.s)
    vol = _volume(boxes[:, 0], boxes[:, 1])
    inner_ok = _subset(boxes[None, :, 0], boxes[None, :, 1], a_lo[:, None], a_up[:, None])
    outer_ok = _subset(a_lo[:, None], a_up[:, None], boxes[None, :, 0], boxes[None, :, 1])
    # the empty set is always an admissible inner element
    u_vol = np.where(inner_ok, vol[None, :], 0.0).max(axis=1, initial=0.0)
    v_vol = np.where(outer_ok, vol[None, :], np.inf).min(axis=1, initial=np.inf)
    return v_vol - u_vol


def validate_cover(cover: CoverSet, samples: int = 10_000, rng_seed: int = 0) -> CoverReport:
    """Check the covering property on ``samples`` random boxes of the family.

    For grid covers the search proposes the per-axis tightest candidates and
    then verifies containment and the volume gap explicitly, so a pass is
    always backed by a concrete witness.
    """
    if samples < 1:
        raise DomainError(f"samples must be >= 1, got {samples}")
    rng = np.random.default_rng(rng_seed)
    a_lo, a_up = _sample_family(cover.family, samples, cover.s, rng)
    if cover.explicit is not None:
        gap = np.empty(samples)
        step = max(1, (1 << 20) // max(1, len(cover.explicit) * cover.s))
        for start in range(0, samples, step):
            sl = slice(start, start + step)
            gap[sl] = _best_explicit(cover, a_lo[sl], a_up[sl])
        ok = gap <= cover.delta + VOLUME_SLACK
    else:
        u_lo, u_up, v_lo, v_up = _propose_from_grid(cover, a_lo, a_up)
        ok = _subset(u_lo, u_up, a_lo, a_up) & _subset(a_lo, a_up, v_lo, v_up)
        ok &= _volume(v_lo, v_up) - _volume(u_lo, u_up) <= cover.delta + VOLUME_SLACK
    failures = [
        Box(cover.family, tuple(a_lo[k]), tuple(a_up[k])) for k in np.flatnonzero(~ok)
    ]
    return CoverReport(not failures, failures, samples)


def _sized_ratio(s: int) -> float:
    """``s^s / s!``; exact integer division for moderate ``s``, log domain beyond."""
    if s <= 170:
        return s**s / math.factorial(s)
    return math.exp(s * math.log(s) - math.lgamma(s + 1))


def bracketing_bound_anchored(delta: float, s: int) -> float:
    """``C_s (s^s / s!) (1/delta + 1)^s``, ``inf`` on overflow."""
    _check_delta(delta)
    _check_s(s)
    try:
        return c_factor(s) * _sized_ratio(s) * (1.0 / delta + 1.0) ** s
    except OverflowError:
        return math.inf


def bracketing_bound_unanchored(delta: float, s: int) -> float:
    """Bound for unanchored boxes: the anchored bound at ``delta / 2``, squared."""
    _check_delta(delta)
    return bracketing_bound_anchored(delta / 2.0, s) ** 2


def cover_bracketing_relation_check(delta: float, s: int, cover_size: int, bracket_size: int) -> bool:
    """Whether ``N <= 2 N_[] <= N (1 + N)`` holds for the given sizes."""
    _check_delta(delta)
    _check_s(s)
    return cover_size <= 2 * bracket_size <= cover_size * (1 + cover_size)


def _probe_points_1d(resolution: int) -> list[Fraction]:
    # membership only changes at grid points, so grid points and midpoints suffice
    pts = [Fraction(k, resolution) for k in range(resolution + 1)]
    pts += [Fraction(2 * k + 1, 2 * resolution) for k in range(resolution)]
    return sorted(pts)


def minimal_cover_size_1d(delta: Fraction, resolution: int = 12) -> int:
    """Smallest delta-cover of ``{[0, x)}`` in 1D using endpoints on a ``1/resolution`` grid."""
    delta = Fraction(delta)
    cands = [Fraction(k, resolution) for k in range(1, resolution + 1)]
    probes = _probe_points_1d(resolution)
    for size in range(1, len(cands) + 1):
        for gamma in itertools.combinations(cands, size):
            members = (Fraction(0),) + gamma  # Fraction(0) is the empty set
            if all(
                any(v >= x for v in members)
                and min(v for v in members if v >= x) - max(u for u in members if u <= x) <= delta
                for x in probes
            ):
                return size
    raise DomainError(f"no cover found for delta={delta} at resolution {resolution}")


def minimal_bracketing_size_1d(delta: Fraction, resolution: int = 12) -> int:
    """Smallest delta-bracketing cover of ``{[0, x)}`` in 1D on a ``1/resolution`` grid."""
    delta = Fraction(delta)
    ends = [Fraction(k, resolution) for k in range(resolution + 1)]
    probes = _probe_points_1d(resolution)
    full = (1 << len(probes)) - 1
    masks = []
    for u in ends:
        for v in ends:
            if u <= v and v - u <= delta:
                masks.append(sum(1 << i for i, x in enumerate(probes) if u <= x <= v))
    for size in range(1, len(masks) + 1):
        for combo in itertools.combinations(masks, size):
            acc = 0
            for mk in combo:
                acc |= mk
            if acc == full:
                return size
    raise DomainError(f"no bracketing cover found for delta={delta} at resolution {resolution}")


def write_cover_csv(target: Union[str, os.PathLike, TextIO], cover: CoverSet) -> None:
    """One row per box: ``kind,lower_1..lower_s,upper_1..upper_s``.

    Bracketing covers add ``pair`` and ``role`` (``inner``/``outer``) columns.
    """
    if len(cover) > MAX_EXPORT:
        raise DomainError(f"cover has {len(cover)} elements; export is limited to {MAX_EXPORT}")
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w", encoding="utf-8", newline="") as fh:
            write_cover_csv(fh, cover)
        return
    s = cover.s
    header = ["kind"] + [f"lower_{j + 1}" for j in range(s)] + [f"upper_{j + 1}" for j in range(s)]
    if cover.bracketing:
        header += ["pair", "role"]
    lines = [",".join(header)]

    def row(box: Box) -> list[str]:
        return [box.kind.value] + [repr(v) for v in box.lower] + [repr(v) for v in box.upper]

    for k, el in enumerate(cover.elements()):
        if cover.bracketing:
            lines.append(",".join(row(el[0]) + [str(k), "inner"]))
            lines.append(",".join(row(el[1]) + [str(k), "outer"]))
        else:
            lines.append(",".join(row(el)))
    target.write("\n".join(lines) + "\n")
