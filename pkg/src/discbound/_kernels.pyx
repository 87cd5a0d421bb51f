# cython: language_level=3
"""Compiled critical-grid kernels.

Mirrors ``_pykernels`` exactly (same enumeration order, same floating
point operations) but sweeps the last axis with prefix histograms, so a
prefix cell costs O(N s + m) for anchored boxes and O(N s + m^2) for
unanchored ones instead of O(N s) per cell.
"""
from libc.stdint cimport int64_t as i64, uint64_t as u64

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

import numpy as np


def star_grid_max(const i64[:, ::1] ranks, const double[::1] grid_flat, const i64[::1] offsets):
    cdef Py_ssize_t n = ranks.shape[0]
    cdef Py_ssize_t s = ranks.shape[1]
    cdef Py_ssize_t last = s - 1
    cdef Py_ssize_t off_last = offsets[last]
    cdef Py_ssize_t m_last = offsets[s] - offsets[last]
    cdef double dn = <double>n
    cdef i64[::1] idx = np.zeros(s, dtype=np.int64)
    cdef i64[::1] best_idx = np.zeros(s, dtype=np.int64)
    cdef i64[::1] hist_open = np.zeros(m_last, dtype=np.int64)
    cdef i64[::1] hist_closed = np.zeros(m_last, dtype=np.int64)
    cdef double best = -2.0
    cdef int best_closure = 0
    cdef double vol_p, vol, d
    cdef i64 open_cum, closed_cum, r, g
    cdef Py_ssize_t i, j
    cdef bint in_open, in_closed, done = False

    while not done:
        vol_p = 1.0
        for j in range(last):
            vol_p = vol_p * grid_flat[offsets[j] + idx[j]]
        for g in range(m_last):
            hist_open[g] = 0
            hist_closed[g] = 0
        for i in range(n):
            in_open = True
            in_closed = True
            for j in range(last):
                r = ranks[i, j]
                if r > idx[j]:
                    in_closed = False
                    in_open = False
                    break
                if r == idx[j]:
                    in_open = False
            r = ranks[i, last]
            if in_open:
                hist_open[r] += 1
            if in_closed:
                hist_closed[r] += 1
        open_cum = 0
        closed_cum = 0
        for g in range(m_last):
            closed_cum += hist_closed[g]
            vol = vol_p * grid_flat[off_last + g]
            d = vol - open_cum / dn
            if d > best:
                best = d
                best_closure = 0
                for j in range(last):
                    best_idx[j] = idx[j]
                best_idx[last] = g
            d = closed_cum / dn - vol
            if d > best:
                best = d
                best_closure = 1
                for j in range(last):
                    best_idx[j] = idx[j]
                best_idx[last] = g
            open_cum += hist_open[g]
        # odometer over the prefix axes, axis last-1 fastest
        done = True
        j = last - 1
        while j >= 0:
            idx[j] += 1
            if idx[j] < offsets[j + 1] - offsets[j]:
                done = False
                break
            idx[j] = 0
            j -= 1
    return best, np.asarray(best_idx), best_closure


def extreme_grid_max(const i64[:, ::1] ranks, const double[::1] grid_flat, const i64[::1] offsets):
    cdef Py_ssize_t n = ranks.shape[0]
    cdef Py_ssize_t s = ranks.shape[1]
    cdef Py_ssize_t last = s - 1
    cdef Py_ssize_t off_last = offsets[last]
    cdef Py_ssize_t m_last = offsets[s] - offsets[last]
    cdef double dn = <double>n
    cdef i64[::1] lo = np.zeros(s, dtype=np.int64)
    cdef i64[::1] hi = np.zeros(s, dtype=np.int64)
    cdef i64[::1] best_lo = np.zeros(s, dtype=np.int64)
    cdef i64[::1] best_hi = np.zeros(s, dtype=np.int64)
    cdef i64[::1] cum_open = np.zeros(m_last + 1, dtype=np.int64)
    cdef i64[::1] cum_closed = np.zeros(m_last + 1, dtype=np.int64)
    cdef double best = -2.0
    cdef int best_closure = 0
    cdef double vol_p, vol, d
    cdef i64 r, cnt_open, cnt_closed, m_j
    cdef Py_ssize_t i, j, a, b
    cdef bint in_open, in_closed, done = False

    while not done:
        vol_p = 1.0
        for j in range(last):
            vol_p = vol_p * (grid_flat[offsets[j] + hi[j]] - grid_flat[offsets[j] + lo[j]])
        for a in range(m_last + 1):
            cum_open[a] = 0
            cum_closed[a] = 0
        for i in range(n):
            in_open = True
            in_closed = True
            for j in range(last):
                r = ranks[i, j]
                if r < lo[j] or r > hi[j]:
                    in_closed = False
                    in_open = False
                    break
                if r == lo[j] or r == hi[j]:
                    in_open = False
            r = ranks[i, last]
            if in_open:
                cum_open[r + 1] += 1
            if in_closed:
                cum_closed[r + 1] += 1
        for a in range(m_last):
            cum_open[a + 1] += cum_open[a]
            cum_closed[a + 1] += cum_closed[a]
        for a in range(m_last):
            for b in range(a, m_last):
                if b > a:
                    cnt_open = cum_open[b] - cum_open[a + 1]
                else:
                    cnt_open = 0
                cnt_closed = cum_closed[b + 1] - cum_closed[a]
                vol = vol_p * (grid_flat[off_last + b] - grid_flat[off_last + a])
                d = vol - cnt_open / dn
                if d > best:
                    best = d
                    best_closure = 0
                    for j in range(last):
                        best_lo[j] = lo[j]
                        best_hi[j] = hi[j]
                    best_lo[last] = a
                    best_hi[last] = b
                d = cnt_closed / dn - vol
                if d > best:
                    best = d
                    best_closure = 1
                    for j in range(last):
                        best_lo[j] = lo[j]
                        best_hi[j] = hi[j]
                    best_lo[last] = a
                    best_hi[last] = b
        # odometer over (lo, hi) pairs with lo <= hi, axis last-1 fastest
        done = True
        j = last - 1
        while j >= 0:
            m_j = offsets[j + 1] - offsets[j]
            hi[j] += 1
            if hi[j] >= m_j:
                lo[j] += 1
                hi[j] = lo[j]
            if lo[j] < m_j:
                done = False
                break
            lo[j] = 0
            hi[j] = 0
            j -= 1
    return best, np.asarray(best_lo), np.asarray(best_hi), best_closure


def box_counts(points, lower, upper, bint anchored):
    cdef const double[:, ::1] x = np.ascontiguousarray(points, dtype=np.float64)
    cdef const double[:, ::1] lo = np.ascontiguousarray(lower, dtype=np.float64)
    cdef const double[:, ::1] up = np.ascontiguousarray(upper, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t s = x.shape[1]
    cdef Py_ssize_t t = up.shape[0]
    open_arr = np.zeros(t, dtype=np.int64)
    closed_arr = np.zeros(t, dtype=np.int64)
    cdef i64[::1] open_counts = open_arr
    cdef i64[::1] closed_counts = closed_arr
    cdef Py_ssize_t k, i, j
    cdef bint in_open, in_closed
    cdef double v
    for k in range(t):
        for i in range(n):
            in_open = True
            in_closed = True
            for j in range(s):
                v = x[i, j]
                if v > up[k, j]:
                    in_closed = False
                    in_open = False
                    break
                if v == up[k, j]:
                    in_open = False
                if not anchored:
                    if v < lo[k, j]:
                        in_closed = False
                        in_open = False
                        break
                    if v == lo[k, j]:
                        in_open = False
            if in_open:
                open_counts[k] += 1
            if in_closed:
                closed_counts[k] += 1
    return open_arr, closed_arr


def grid_box_counts(const u64[:, ::1] masks, const i64[::1] mask_offsets,
                    const i64[:, ::1] lo_idx, const i64[:, ::1] up_idx, bint anchored):
    cdef Py_ssize_t t = up_idx.shape[0]
    cdef Py_ssize_t s = up_idx.shape[1]
    cdef Py_ssize_t w = masks.shape[1]
    open_arr = np.zeros(t, dtype=np.int64)
    closed_arr = np.zeros(t, dtype=np.int64)
    cdef i64[::1] open_counts = open_arr
    cdef i64[::1] closed_counts = closed_arr
    cdef Py_ssize_t k, j, q, u, l
    cdef u64 o, c
    cdef i64 oc, cc
    for k in range(t):
        oc = 0
        cc = 0
        for q in range(w):
            o = ~(<u64>0)
            c = ~(<u64>0)
            for j in range(s):
                u = mask_offsets[j] + up_idx[k, j]
                o &= masks[u, q]
                c &= masks[u + 1, q]
                if not anchored:
                    l = mask_offsets[j] + lo_idx[k, j]
                    o &= ~masks[l + 1, q]
                    c &= ~masks[l, q]
            oc += __builtin_popcountll(o)
            cc += __builtin_popcountll(c)
        open_counts[k] = oc
        closed_counts[k] = cc
    return open_arr, closed_arr
