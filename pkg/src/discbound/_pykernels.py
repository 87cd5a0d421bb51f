"""NumPy implementation of the critical-grid kernels.

Same signatures and bit-identical results as the compiled ``_kernels``
module; used when the extension is not built.

Inputs are rank-encoded: ``ranks[i, j]`` is the index of point ``i``'s
``j``-th coordinate inside axis ``j``'s grid, which is stored as
``grid_flat[offsets[j]:offsets[j + 1]]``.  A point is strictly below grid
value ``g`` exactly when its rank is smaller than ``g``'s index.
"""
from __future__ import annotations

import numpy as np

_CHUNK_ELEMS = 1 << 22


def _axis_grids(grid_flat, offsets):
    return [grid_flat[offsets[j]:offsets[j + 1]] for j in range(len(offsets) - 1)]


def _running_best(best, vals, order_base):
    """Fold a chunk of candidate values into ``best = (value, flat_pos)``."""
    pos = int(np.argmax(vals))
    if best is None or vals[pos] > best[0]:
        return float(vals[pos]), order_base + pos
    return best


def star_grid_max(ranks, grid_flat, offsets):
    """Max over anchored grid boxes of ``vol - open/N`` and ``closed/N - vol``.

    Returns ``(value, idx, closure)`` with ``idx`` the per-axis grid index
    of the upper corner and ``closure`` 0 for open, 1 for closed counts.
    Ties resolve to the first cell in lexicographic order, open before closed.
    """
    ranks = np.asarray(ranks, dtype=np.int64)
    n, s = ranks.shape
    grids = _axis_grids(grid_flat, offsets)
    sizes = [len(g) for g in grids]
    total = int(np.prod(sizes))
    chunk = max(1, _CHUNK_ELEMS // max(1, n * s))
    best = None
    for start in range(0, total, chunk):
        flat = np.arange(start, min(total, start + chunk))
        idx = np.unravel_index(flat, sizes)
        vol = np.ones(len(flat))
        open_in = np.ones((len(flat), n), dtype=bool)
        closed_in = np.ones((len(flat), n), dtype=bool)
        for j in range(s):
            vol = vol * grids[j][idx[j]]
            r = ranks[:, j][None, :]
            g = idx[j][:, None]
            open_in &= r < g
            closed_in &= r <= g
        d_open = vol - open_in.sum(axis=1) / n
        d_closed = closed_in.sum(axis=1) / n - vol
        vals = np.column_stack([d_open, d_closed]).ravel()
        best = _running_best(best, vals, 2 * start)
    value, pos = best
    cell, closure = divmod(pos, 2)
    idx = np.array(np.unravel_index(cell, sizes), dtype=np.int64)
    return value, idx, closure


def _pair_table(m):
    lo, hi = np.triu_indices(m)
    return lo.astype(np.int64), hi.astype(np.int64)


def extreme_grid_max(ranks, grid_flat, offsets):
    """Max over unanchored grid boxes ``[g_lo, g_hi)``, ``lo <= hi`` per axis.

    Returns ``(value, lo_idx, hi_idx, closure)``.  Open counts are strict on
    every face, closed counts inclusive on every face.  Per axis the pairs
    are ordered by ``lo`` then ``hi``; cells are lexicographic over axes.
    """
    ranks = np.asarray(ranks, dtype=np.int64)
    n, s = ranks.shape
    grids = _axis_grids(grid_flat, offsets)
    pairs = [_pair_table(len(g)) for g in grids]
    sizes = [len(p[0]) for p in pairs]
    total = int(np.prod(sizes))
    chunk = max(1, _CHUNK_ELEMS // max(1, n * s))
    best = None
    for start in range(0, total, chunk):
        flat = np.arange(start, min(total, start + chunk))
        idx = np.unravel_index(flat, sizes)
        vol = np.ones(len(flat))
        open_in = np.ones((len(flat), n), dtype=bool)
        closed_in = np.ones((len(flat), n), dtype=bool)
        for j in range(s):
            lo = pairs[j][0][idx[j]]
            hi = pairs[j][1][idx[j]]
            vol = vol * (grids[j][hi] - grids[j][lo])
            r = ranks[:, j][None, :]
            lo = lo[:, None]
            hi = hi[:, None]
            open_in &= (r > lo) & (r < hi)
            closed_in &= (r >= lo) & (r <= hi)
        d_open = vol - open_in.sum(axis=1) / n
        d_closed = closed_in.sum(axis=1) / n - vol
        vals = np.column_stack([d_open, d_closed]).ravel()
        best = _running_best(best, vals, 2 * start)
    value, pos = best
    cell, closure = divmod(pos, 2)
    idx = np.unravel_index(cell, sizes)
    lo_idx = np.array([pairs[j][0][idx[j]] for j in range(s)], dtype=np.int64)
    hi_idx = np.array([pairs[j][1][idx[j]] for j in range(s)], dtype=np.int64)
    return value, lo_idx, hi_idx, closure


def box_counts(points, lower, upper, anchored):
    """Open and closed point counts for each of ``T`` boxes.

    ``anchored`` boxes ignore ``lower`` and keep the origin face inclusive.
    """
    points = np.asarray(points, dtype=np.float64)
    lower = np.asarray(lower, dtype=np.float64)
    upper = np.asarray(upper, dtype=np.float64)
    t = upper.shape[0]
    n, s = points.shape
    open_counts = np.empty(t, dtype=np.int64)
    closed_counts = np.empty(t, dtype=np.int64)
    chunk = max(1, _CHUNK_ELEMS // max(1, n * s))
    for start in range(0, t, chunk):
        stop = min(t, start + chunk)
        x = points[None, :, :]
        b = upper[start:stop, None, :]
        if anchored:
            o = np.all(x < b, axis=2)
            c = np.all(x <= b, axis=2)
        else:
            a = lower[start:stop, None, :]
            o = np.all((x > a) & (x < b), axis=2)
            c = np.all((x >= a) & (x <= b), axis=2)
        open_counts[start:stop] = o.sum(axis=1)
        closed_counts[start:stop] = c.sum(axis=1)
    return open_counts, closed_counts


_POPCOUNT8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)


def grid_box_counts(masks, mask_offsets, lo_idx, up_idx, anchored):
    """Open and closed counts of grid boxes from per-axis rank bitmasks.

    Row ``mask_offsets[j] + g`` of ``masks`` has bit ``i`` set when point
    ``i`` has rank below ``g`` on axis ``j``.
    """
    masks = np.asarray(masks, dtype=np.uint64)
    mask_offsets = np.asarray(mask_offsets, dtype=np.int64)
    lo_idx = np.asarray(lo_idx, dtype=np.int64)
    up_idx = np.asarray(up_idx, dtype=np.int64)
    t, s = up_idx.shape
    w = masks.shape[1]
    open_counts = np.empty(t, dtype=np.int64)
    closed_counts = np.empty(t, dtype=np.int64)
    chunk = max(1, _CHUNK_ELEMS // max(1, s * w))
    base = mask_offsets[:s][None, :]
    for start in range(0, t, chunk):
        stop = min(t, start + chunk)
        up = base + up_idx[start:stop]
        o = np.bitwise_and.reduce(masks[up], axis=1)
        c = np.bitwise_and.reduce(masks[up + 1], axis=1)
        if not anchored:
            lo = base + lo_idx[start:stop]
            o &= ~np.bitwise_or.reduce(masks[lo + 1], axis=1)
            c &= ~np.bitwise_or.reduce(masks[lo], axis=1)
        open_counts[start:stop] = _POPCOUNT8[o.view(np.uint8)].reshape(stop - start, -1).sum(axis=1)
        closed_counts[start:stop] = _POPCOUNT8[c.view(np.uint8)].reshape(stop - start, -1).sum(axis=1)
    return open_counts, closed_counts
