"""Acceptance criteria, one test per criterion.

Each criterion prints a single ``PASS``/``FAIL`` line with the measured
quantities and its runtime against the allowed limit.  Run directly with
``python tests/test_acceptance.py`` or through pytest; the lines are also
repeated in the pytest terminal summary.
"""
from __future__ import annotations

import io
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import pytest

from discbound.constants import ConstantProfile, Variant, big_A, big_B, failure_budget
from discbound.covers import (
    build_bracketing_unanchored,
    build_cover_anchored,
    cover_bracketing_relation_check,
    minimal_bracketing_size_1d,
    minimal_cover_size_1d,
    validate_cover,
)
from discbound.discrepancy import extreme_discrepancy_exact, star_discrepancy_exact
from discbound.harness import bernstein_bound, bernstein_empirical_check, emit_figure, verify_bounds, write_csv
from discbound.zeta import zeta, zeta_inv

ALPHA = BETA = 1.73
LINES: list[str] = []


@dataclass
class Outcome:
    ok: bool
    detail: str
    csv: str
    seconds: float = 0.0


def _csv(columns, rows) -> str:
    buf = io.StringIO()
    write_csv(buf, columns, rows)
    return buf.getvalue()


def _timed(fn, limit):
    t0 = time.perf_counter()
    out = fn()
    out.seconds = time.perf_counter() - t0
    out.ok = out.ok and out.seconds < limit
    return out


def _report(tag, title, out, limit):
    line = f"{'PASS' if out.ok else 'FAIL'} {tag} {title}: {out.detail} [{out.seconds:.1f}s < {limit:g}s]"
    LINES.append(line)
    print(line)


def criterion_1() -> Outcome:
    a2 = big_A(Variant.STAR, 2, 1e-6)
    ext = [big_A(Variant.EXTREME, s, 1e-6) for s in range(1, 10_001)]
    s_max = int(np.argmax(ext)) + 1
    b = big_B(1e-6)
    ok = a2 <= 942 and max(ext) <= 2548 and 177 < b < 178
    detail = f"A_star(2)={a2:.4f}<=942, max A_extreme={max(ext):.4f} at s={s_max} <=2548, B={b:.6f} in (177,178)"
    rows = [["A_star", 2, a2], ["A_extreme_max", s_max, max(ext)], ["B", 0, b]]
    return Outcome(ok, detail, _csv(["quantity", "s", "value"], rows))


def criterion_2() -> Outcome:
    zi = zeta_inv(2.0)
    fb = failure_budget(ALPHA, BETA)
    z2 = zeta(2.0)
    err = abs(z2 - math.pi**2 / 6)
    ok = 1.72 < zi < 1.74 and fb < 1 and err <= 1e-10
    detail = f"zeta_inv(2)={zi:.8f}, failure_budget={fb:.6f}<1, |zeta(2)-pi^2/6|={err:.1e}"
    return Outcome(ok, detail, _csv(["quantity", "value"], [["zeta_inv_2", zi], ["budget", fb], ["zeta_2", z2]]))


def criterion_3() -> Outcome:
    prof = ConstantProfile(Variant.EXTREME, ALPHA, BETA)
    vals = [prof.A(s) for s in range(1, 401)]
    dec = all(b < a for a, b in zip(vals[:101], vals[1:101]))
    inc = all(b > a for a, b in zip(vals[101:], vals[102:]))
    far = big_A(Variant.EXTREME, 10**5, 1e-6)
    gap1 = abs(big_A(Variant.STAR, 1) - big_A(Variant.AW_DEP, 1))
    fig1 = emit_figure(1, ALPHA, BETA)
    k_star, k_dep = fig1.columns.index("cStarOurs"), fig1.columns.index("cAwDep")
    k_const = fig1.columns.index("cAwConst")
    a10_below = big_A(Variant.STAR, 10) < big_A(Variant.AW_DEP, 10)
    order = all(r[k_star] < r[k_dep] and r[k_star] < r[k_const] for r in fig1.rows)
    ok = dec and inc and 1640 <= far <= 1700 and gap1 <= 2e-6 and a10_below and order
    detail = (
        f"decreasing s<=101: {dec}, increasing 102..400: {inc}, A_extreme(1e5)={far:.2f}, "
        f"|A_star(1)-A_awDep(1)|={gap1:.1e}, c_star below AW curves at all 20 N: {order}"
    )
    rows = [[s, v] for s, v in enumerate(vals, 1)] + [[10**5, far]]
    return Outcome(ok, detail, _csv(["s", "A_extreme"], rows) + _csv(fig1.columns, fig1.rows))


def _sampled_star(points, samples, rng):
    n, s = points.shape
    best = 0.0
    step = 1 << 16
    for start in range(0, samples, step):
        y = rng.random((min(step, samples - start), s))
        inside = np.all(points[None, :, :] < y[:, None, :], axis=2).sum(axis=1)
        best = max(best, float(np.max(np.abs(inside / n - np.prod(y, axis=1)))))
    return best


def criterion_4() -> Outcome:
    rng = np.random.default_rng(2024)
    rows = []
    above = sandwich = True
    gaps = []
    for i in range(100):
        n, s = int(rng.integers(1, 9)), int(rng.integers(1, 4))
        pts = rng.random((n, s))
        ds = star_discrepancy_exact(pts).value
        de = extreme_discrepancy_exact(pts).value
        sampled = _sampled_star(pts, 10**6, rng)
        above &= ds >= sampled - 1e-9
        sandwich &= ds <= de <= 2**s * ds + 1e-12
        gaps.append(ds - sampled)
        rows.append([i, n, s, ds, de, sampled])
    lattice = all(
        star_discrepancy_exact(((2 * np.arange(N) + 1) / (2 * N))[:, None]).value == 1 / (2 * N)
        for N in (1, 2, 4, 8, 16)
    )
    single = all(extreme_discrepancy_exact(rng.random((1, s))).value == 1.0 for s in (1, 2, 3) for _ in range(10))
    mean_gap = float(np.mean(gaps))
    ok = above and sandwich and mean_gap <= 0.02 and lattice and single
    detail = (
        f"exact >= 1e6-sample oracle on 100/100: {above}, mean gap={mean_gap:.5f}<=0.02, "
        f"D*<=D<=2^s D*: {sandwich}, lattice 1/(2N): {lattice}, single point D=1: {single}"
    )
    return Outcome(ok, detail, _csv(["instance", "N", "s", "star", "extreme", "sampled"], rows))


def criterion_5() -> Outcome:
    rows = []
    valid = True
    for delta in (0.5, 0.25, 0.1):
        for s in (1, 2, 3):
            for name, build in (("anchored", build_cover_anchored), ("unanchored", build_bracketing_unanchored)):
                cover = build(delta, s)
                rep = validate_cover(cover, 10_000, 0)
                valid &= rep.passed
                rows.append([name, delta, s, len(cover), len(rep.failures)])
    relation = True
    for k in (2, 3, 4):
        n = minimal_cover_size_1d(Fraction(1, k))
        nb = minimal_bracketing_size_1d(Fraction(1, k))
        relation &= cover_bracketing_relation_check(1 / k, 1, n, nb)
        rows.append(["minimal_1d_N_Nb", 1 / k, 1, n, nb])
    detail = f"18 covers valid on 1e4 samples: {valid}, N<=2N_[]<=N(1+N) at delta 1/2,1/3,1/4: {relation}"
    return Outcome(valid and relation, detail, _csv(["family", "delta", "s", "size", "failures"], rows))


def criterion_6() -> Outcome:
    floor = 1 - (zeta(ALPHA) - 1) * (zeta(BETA) - 1)
    star = verify_bounds(range(200), range(1, 6), [2**e for e in range(1, 9)], ALPHA, BETA, "star", "star")
    ext = verify_bounds(range(200), [1, 2], [2**e for e in range(1, 7)], ALPHA, BETA, "extreme", "extreme")
    all_exact = all(r.exact for r in ext.records)
    ok = star.pass_fraction >= floor and ext.pass_fraction >= floor and all_exact
    n_est = sum(not r.exact for r in star.records)
    detail = (
        f"star passFraction={star.pass_fraction} ({len(star.records)} cells, {n_est} estimated), "
        f"extreme passFraction={ext.pass_fraction} (all exact: {all_exact}), floor={floor:.4f}"
    )
    h, rs = star.to_rows()
    _, re = ext.to_rows()
    return Outcome(ok, detail, _csv(["kind"] + h, [["star"] + r for r in rs] + [["extreme"] + r for r in re]))


def criterion_7() -> Outcome:
    configs = [(10, k) for k in range(1, 8)] + [(100, k) for k in range(1, 8)] + [(1000, k) for k in range(1, 7)]
    rows = []
    holds = True
    for i, (n, k) in enumerate(configs):
        t = k * math.sqrt(n) / 2
        chk = bernstein_empirical_check(n, 20_000, t, rng_seed=i)
        assert chk.bound == bernstein_bound(t, 1.0, n / 4)
        holds &= chk.holds
        rows.append([n, t, chk.empirical, chk.bound, chk.standard_error, int(chk.holds)])
    detail = f"{len(configs)} configurations, all within bound + 3 SE: {holds}"
    return Outcome(holds, detail, _csv(["n", "t", "empirical", "bound", "standard_error", "holds"], rows))


CRITERIA = {
    "C1": ("constants reproduction", criterion_1, 10),
    "C2": ("zeta machinery", criterion_2, 1),
    "C3": ("qualitative curve checks", criterion_3, 30),
    "C4": ("exact discrepancy oracle equivalence", criterion_4, 120),
    "C5": ("cover validity", criterion_5, 60),
    "C6": ("Monte Carlo bound verification", criterion_6, 300),
    "C7": ("Bernstein sweep", criterion_7, 60),
}

_FIRST_RUN: dict[str, Outcome] = {}


def _run(tag):
    title, fn, limit = CRITERIA[tag]
    out = _timed(fn, limit)
    _FIRST_RUN[tag] = out
    _report(tag, title, out, limit)
    return out


@pytest.mark.slow
@pytest.mark.parametrize("tag", list(CRITERIA))
def test_criterion(tag):
    out = _run(tag)
    assert out.ok, out.detail


@pytest.mark.slow
def test_criterion_8_determinism():
    t0 = time.perf_counter()
    same = []
    for tag, (title, fn, limit) in CRITERIA.items():
        first = _FIRST_RUN.get(tag) or _timed(fn, limit)
        second = fn()
        same.append((tag, first.csv.encode() == second.csv.encode()))
    ok = all(v for _, v in same)
    detail = "byte-identical CSV on rerun: " + ", ".join(f"{t}={v}" for t, v in same)
    out = Outcome(ok, detail, "", time.perf_counter() - t0)
    line = f"{'PASS' if ok else 'FAIL'} C8 determinism: {detail} [{out.seconds:.1f}s]"
    LINES.append(line)
    print(line)
    assert ok, detail


if __name__ == "__main__":
    for tag in CRITERIA:
        _run(tag)
    test_criterion_8_determinism()
