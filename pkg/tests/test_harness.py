import io
import math

import pytest

from discbound.constants import BoundQuery, ConstantProfile, Variant, bound_c, failure_budget
from discbound.errors import DomainError
from discbound.harness import (
    FINITE_SET_C,
    bernstein_bound,
    bernstein_empirical_check,
    emit_figure,
    verify_bounds,
    write_csv,
)


class TestVerify:
    def test_single_cell(self):
        rep = verify_bounds([0], [1], [2])
        (cell,) = rep.records
        assert cell.bound > 1.0 >= cell.discrepancy and cell.passed and cell.exact
        assert rep.pass_fraction == 1.0

    def test_empty(self):
        rep = verify_bounds([], [1, 2], [2, 4])
        assert rep.records == [] and rep.pass_fraction == 1.0

    def test_small_grid(self):
        rep = verify_bounds(range(4), [1, 2, 3], [2, 8, 64], trials_for_estimate=2000)
        assert rep.pass_fraction >= 1 - failure_budget(1.73, 1.73)
        assert [(r.seed, r.s, r.N) for r in rep.records] == sorted((r.seed, r.s, r.N) for r in rep.records)
        assert len(rep.records) == 4 * 3 * 3

    def test_bound_recomputation_bit_identical(self):
        rep = verify_bounds([1, 2], [1, 4], [4, 32], variant="extreme", kind="extreme", trials_for_estimate=500)
        prof = ConstantProfile(Variant.EXTREME)
        for r in rep.records:
            assert r.bound == bound_c(prof, BoundQuery(r.N, r.s)) * math.sqrt(r.s / r.N)

    def test_extreme_bound_above_star(self):
        star = verify_bounds([0], [1, 2, 3], [2, 16], kind="star", trials_for_estimate=100)
        ext = verify_bounds([0], [1, 2, 3], [2, 16], variant="extreme", kind="extreme", trials_for_estimate=100)
        for a, b in zip(star.records, ext.records):
            assert b.bound >= a.bound

    def test_exact_switch(self):
        rep = verify_bounds([0], [5], [8, 16], trials_for_estimate=100)
        assert [r.exact for r in rep.records] == [True, False]

    def test_pass_fraction_per_seed(self):
        rep = verify_bounds([0, 1], [1], [2, 4], alpha=1.01, beta=1.01)
        rep.records[0] = type(rep.records[0])(0, 1, 2, 0.9, True, 0.5)
        assert rep.pass_fraction == 0.5

    def test_rows(self):
        rep = verify_bounds([3], [1], [2])
        header, rows = rep.to_rows()
        assert header == ["seed", "s", "N", "discrepancy", "exact", "bound", "pass"]
        assert rows[0][:3] == [3, 1, 2] and rows[0][-1] == 1

    def test_domain(self):
        with pytest.raises(DomainError):
            verify_bounds([0], [1], [1])
        with pytest.raises(DomainError):
            verify_bounds([0], [1], [2], variant="extreme", kind="star")
        with pytest.raises(DomainError):
            verify_bounds([0], [1], [2], variant="star", kind="extreme")
        with pytest.raises(DomainError):
            verify_bounds([0], [1], [2], kind="box")


class TestBernstein:
    def test_example(self):
        assert bernstein_bound(20, 1, 25) == pytest.approx(2 * math.exp(-400 / (50 + 40 / 3)), rel=1e-15)
        assert bernstein_bound(20, 1, 25) == pytest.approx(0.003615076, abs=1e-9)

    def test_limit_and_monotone(self):
        assert bernstein_bound(1e-9, 1, 5) == pytest.approx(2.0)
        vals = [bernstein_bound(t, 1, 10) for t in (0.5, 1, 2, 4, 8, 16)]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_domain(self):
        for args in ((0, 1, 1), (1, 0, 1), (1, 1, -1)):
            with pytest.raises(DomainError):
                bernstein_bound(*args)
        with pytest.raises(DomainError):
            bernstein_empirical_check(0, 10, 1.0)

    def test_empirical_examples(self):
        chk = bernstein_empirical_check(100, 10_000, 30.0, 0)
        assert chk.holds and chk.empirical == 0.0
        assert bernstein_empirical_check(20, 500, 10.0, 1).empirical == 0.0
        one = bernstein_empirical_check(50, 1, 1.0, 2)
        assert one.empirical in (0.0, 1.0)

    def test_light_tail_nonzero(self):
        chk = bernstein_empirical_check(100, 20_000, 5.0, 3)
        assert 0.0 < chk.empirical <= chk.bound + 3 * chk.standard_error
        assert chk.standard_error == pytest.approx(math.sqrt(chk.empirical * (1 - chk.empirical) / 20_000))


class TestFigures:
    def test_figure1(self):
        fig = emit_figure(1)
        assert fig.columns == ["N", "cStarOurs", "cExtremeOurs", "cAwConst", "cAwDep", "cFiniteSet"]
        assert [r[0] for r in fig.rows] == [2**e for e in range(1, 21)]
        for name in fig.columns[1:5]:
            k = fig.columns.index(name)
            col = [r[k] for r in fig.rows]
            assert all(b >= a for a, b in zip(col, col[1:]))
        for r in fig.rows:
            assert r[1] < r[3] and r[1] < r[4] and r[5] == FINITE_SET_C

    def test_figure2(self):
        fig = emit_figure(2)
        assert fig.columns == ["s", "A_star", "A_extreme", "A_awDep", "A_awConst"]
        assert len(fig.rows) == 200
        first = fig.rows[0]
        assert abs(first[1] - first[3]) <= 2e-6
        assert all(r[4] == 1165.0 for r in fig.rows)
        assert all(r[2] > r[1] for r in fig.rows)

    def test_figure3(self):
        fig = emit_figure(3)
        assert fig.columns == ["s", "A_extreme"]
        vals = [r[1] for r in fig.rows]
        assert len(vals) == 400
        assert min(range(400), key=vals.__getitem__) + 1 == 101
        assert all(b < a for a, b in zip(vals[:101], vals[1:101]))
        assert all(b > a for a, b in zip(vals[101:], vals[102:]))

    def test_bad_id(self):
        with pytest.raises(DomainError):
            emit_figure(4)

    def test_write_csv(self, tmp_path):
        buf = io.StringIO()
        write_csv(buf, ["a", "b", "c", "d"], [[1, 0.1, True, "x"]])
        assert buf.getvalue() == "a,b,c,d\n1,0.1,1,x\n"
        write_csv(tmp_path / "f.csv", ["a"], [[2.5]])
        assert (tmp_path / "f.csv").read_text() == "a\n2.5\n"
