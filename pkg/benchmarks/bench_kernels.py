"""Compare the compiled and NumPy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 3]

Prints one line per (kernel, case) with the best wall time of each backend
and the speedup, after checking that both backends return identical results.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from discbound import kernels
from discbound.discrepancy import _grids, _rank_masks


def _best(fn, repeat):
    times, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def _same(a, b):
    if isinstance(a, tuple):
        return len(a) == len(b) and all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def cases():
    rng = np.random.default_rng(0)
    for n, s in ((64, 2), (40, 3), (12, 4)):
        pts = rng.random((n, s))
        _, ranks, flat, offsets = _grids(pts, (1.0,))
        yield "star_grid_max", f"N={n} s={s}", (ranks, flat, offsets)
    for n, s in ((24, 2), (6, 3)):
        pts = rng.random((n, s))
        _, ranks, flat, offsets = _grids(pts, (0.0, 1.0))
        yield "extreme_grid_max", f"N={n} s={s}", (ranks, flat, offsets)
    for n, s, t in ((256, 5, 20_000), (1024, 3, 10_000)):
        pts = rng.random((n, s))
        lo = np.zeros((t, s))
        up = rng.random((t, s))
        yield "box_counts", f"N={n} s={s} boxes={t}", (pts, lo, up, True)
        grids, ranks, _, _ = _grids(pts, (1.0,))
        masks, mo = _rank_masks(ranks, [len(g) for g in grids])
        up_idx = np.column_stack([rng.integers(0, len(g), t) for g in grids])
        yield "grid_box_counts", f"N={n} s={s} boxes={t}", (masks, mo, np.zeros_like(up_idx), up_idx, True)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled backend not built; only", backends, "available")
        return 1
    cy, py = kernels.get_backend("cython"), kernels.get_backend("python")
    print(f"{'kernel':<18}{'case':<28}{'cython [s]':>12}{'python [s]':>12}{'speedup':>10}")
    for name, label, a in cases():
        tc, rc = _best(lambda: getattr(cy, name)(*a), args.repeat)
        tp, rp = _best(lambda: getattr(py, name)(*a), args.repeat)
        if not _same(rc, rp):
            raise SystemExit(f"backends disagree on {name} {label}")
        print(f"{name:<18}{label:<28}{tc:>12.4f}{tp:>12.4f}{tp / tc:>9.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
