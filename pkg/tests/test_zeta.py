import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discbound.errors import DomainError
from discbound.zeta import zeta, zeta_inv, zeta_with_error

mp = pytest.importorskip("mpmath")
special = pytest.importorskip("scipy.special")


def test_closed_forms():
    assert zeta(2) == pytest.approx(math.pi**2 / 6, abs=1e-12)
    assert zeta(4) == pytest.approx(math.pi**4 / 90, abs=1e-12)


def test_near_parameter_choice():
    assert 1.99 < zeta(1.73) < 2.01


@pytest.mark.parametrize("x", [1.1, 1.3, 1.5, 1.73, 2.0, 2.5, 3.0, 5.5, 10.0, 30.0, 60.0])
def test_against_mpmath(x):
    assert zeta(x) == pytest.approx(float(mp.zeta(x)), abs=1e-12)
    assert zeta(x) == pytest.approx(float(special.zeta(x)), abs=1e-11)


def test_error_estimate_is_tiny():
    for x in (1.2, 1.73, 4.0):
        _, err = zeta_with_error(x)
        assert 0.0 <= err <= 1e-12


def test_near_one_still_close():
    # cancellation in 1/(x-1) limits accuracy very close to 1
    for x in (1.0001, 1.001, 1.01):
        assert zeta(x) == pytest.approx(float(mp.zeta(x)), rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.floats(1.01, 40.0), st.floats(1.01, 40.0))
def test_strictly_decreasing(x1, x2):
    if x1 == x2:
        return
    lo, hi = min(x1, x2), max(x1, x2)
    if hi - lo < 1e-9:
        return
    assert zeta(lo) > zeta(hi)


def test_inverse():
    assert 1.72 < zeta_inv(2.0) < 1.74
    assert zeta_inv(2.0) == pytest.approx(float(mp.findroot(lambda x: mp.zeta(x) - 2, 1.7)), abs=1e-9)
    assert zeta_inv(zeta(3.0)) == pytest.approx(3.0, abs=1e-9)
    assert zeta_inv(math.pi**2 / 6) == pytest.approx(2.0, abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.floats(1.05, 20.0))
def test_inverse_round_trip(x):
    assert zeta_inv(zeta(x)) == pytest.approx(x, abs=1e-8)


@pytest.mark.parametrize("x", [1.0, 0.5, -2.0])
def test_domain(x):
    with pytest.raises(DomainError):
        zeta(x)
    with pytest.raises(DomainError):
        zeta_inv(x)
