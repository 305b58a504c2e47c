from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from meroform.ideals import EISENSTEIN, GAUSSIAN
from meroform.numerics import (InsufficientOrderError, PrecisionError, e2hat_at, eval_at,
                               eval_derivative_at, eval_form, order_for, special_value)
from meroform.qseries import LaurentSeries, delta_and_j, eisenstein


def test_delta_at_i_against_product():
    v = eval_at(delta_and_j(40)[0], GAUSSIAN, 128)
    with mpmath.workprec(160):
        q = mpmath.exp(-2 * mpmath.pi)
        prod = q * mpmath.nprod(lambda n: (1 - q ** n) ** 24, [1, mpmath.inf])
        assert abs(v.value - prod) < mpmath.mpf(10) ** -35
    assert v.value.real > 0 and abs(v.value.imag) < 1e-40
    assert mpmath.nstr(v.value.real, 5) == "0.0017854"
    assert v.tail_bound < 1e-30


def test_zero_series_is_zero():
    e4 = eisenstein(4, 30)
    assert eval_at(e4 - e4, mpmath.mpc(0.1, 1.3), 128).value == 0


def test_j_at_2i():
    v = eval_form("j", (0, 2), 128)
    assert int(mpmath.nint(v.real)) == 287496
    assert abs(v - 287496) < 1e-25


def test_e2_derivative_identity():
    tau = (0, Fraction(3, 2))
    with mpmath.workprec(160):
        lhs = eval_form("E2", tau, 128, 1) / (2j * mpmath.pi)
        e2, e4 = eval_form("E2", tau, 128), eval_form("E4", tau, 128)
        assert abs(lhs - (e2 ** 2 - e4) / 12) < mpmath.mpf(10) ** -30


def test_derivative_of_constant_and_r0():
    one = LaurentSeries.constant(1, 10)
    assert eval_derivative_at(one, 1, (0, 1), 64) == 0
    e6 = eisenstein(6, 40)
    assert eval_derivative_at(e6, 0, (0, 1), 64) == eval_at(e6, (0, 1), 64).value


def test_derivative_order_limited():
    with pytest.raises(ValueError):
        eval_derivative_at(eisenstein(4, 10), 3, (0, 1), 64)


def test_special_values_match_series():
    with mpmath.workprec(232):
        e4 = special_value("E4_at_i", 200)
        assert abs(e4 - eval_form("E4", GAUSSIAN, 200)) < mpmath.mpf(10) ** -40
        e6 = special_value("E6_at_rho", 200)
        assert e6 > 0
        assert abs(e6 - eval_form("E6", EISENSTEIN, 200)) < mpmath.mpf(10) ** -40


def test_special_value_precision_cap():
    with pytest.raises(PrecisionError):
        special_value("E4_at_i", 1000)
    with pytest.raises(ValueError):
        special_value("E8_at_i", 64)


def test_e2hat_vanishes_at_elliptic_points():
    assert abs(e2hat_at(GAUSSIAN, 160)) < 1e-40
    assert abs(e2hat_at(EISENSTEIN, 160)) < 1e-40
    assert abs(e2hat_at((0, 2), 128)) > 1e-3


def test_insufficient_order_reported():
    short = eisenstein(4, 3)
    with pytest.raises(InsufficientOrderError):
        eval_at(short, (0, 1), 128)
    # the non-strict path returns a value with an honest (large) tail bound
    v = eval_at(short, (0, 1), 128, strict=False)
    assert v.tail_bound > mpmath.mpf(2) ** -128


def test_lower_half_plane_rejected():
    with pytest.raises(ValueError):
        eval_at(eisenstein(4, 10), (0, -1), 64)
    with pytest.raises(ValueError):
        order_for((0, 0), 64)


def test_precision_monotone():
    tau = mpmath.mpc("0.2", "1.1")
    lo = eval_at(eisenstein(6, order_for(tau, 64) + 8), tau, 64)
    hi = eval_at(eisenstein(6, order_for(tau, 192) + 8), tau, 192)
    assert abs(hi.value - lo.value) < max(lo.tail_bound, mpmath.mpf(2) ** -60) * 10


@given(st.floats(-0.5, 0.5), st.floats(0.0, 1.5))
def test_e4_modularity(x, dy):
    with mpmath.workprec(140):
        y = mpmath.sqrt(1 - mpmath.mpf(x) ** 2) + mpmath.mpf(dy) + mpmath.mpf("0.01")
        tau = mpmath.mpc(x, y)
        lhs = eval_form("E4", -1 / tau, 100)
        rhs = tau ** 4 * eval_form("E4", tau, 100)
        assert abs(lhs - rhs) < mpmath.mpf(10) ** -20 * max(1, abs(rhs))
