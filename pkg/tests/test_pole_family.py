from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from meroform.numerics import eval_form
from meroform.pole_family import (EllipticPointError, B_value, check_not_elliptic,
                                  coprime_pairs, parse_tau, pole_family_coefficient,
                                  pole_family_oracle, principal_part, reduce_point)


@pytest.fixture(scope="module")
def oracle_2i():
    return pole_family_oracle("2i", 6)


def test_oracle_leading_terms(oracle_2i):
    assert abs(oracle_2i[0]) < 1e-60
    assert abs(oracle_2i[1] - 1) < 1e-60
    assert abs(oracle_2i[2] - 573768) < 1e-50


def test_coefficients_match_oracle_at_2i(oracle_2i):
    for n in range(6):
        v = pole_family_coefficient("2i", n, cutoff=500)
        o = oracle_2i[n]
        err = abs(v.value - o) / (abs(o) if o != 0 else 1)
        assert err < 1e-10
        assert abs(v.value - o) <= v.tail_estimate


def test_lambda_minus_two_real_at_2i():
    pp = principal_part(parse_tau("2i"))
    assert abs(pp.lambda_m2.imag) < 1e-20 * abs(pp.lambda_m2)
    assert abs(pp.j0 - 287496) < 1e-25


def test_B_trivial_pair():
    p = parse_tau("2i")
    with mpmath.workprec(128):
        for n in range(4):
            for m in (10, 12):
                assert abs(B_value(p, m, 0, 1, n, (1, 0)) - mpmath.exp(4 * mpmath.pi * n)) < 1e-20


@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(-4, 4), st.integers(0, 6))
def test_B_bezout_invariance(c, d, t, n):
    from math import gcd
    if gcd(c, d) != 1:
        return
    from meroform.ideals import bezout_pair
    p = parse_tau("1/3,7/4")
    a, b = bezout_pair(c, d)
    with mpmath.workprec(128):
        x = B_value(p, 12, c, d, n, (a, b))
        y = B_value(p, 12, c, d, n, (a + t * c, b + t * d))
        assert abs(x - y) <= 1e-30 * abs(x)


@pytest.mark.parametrize("tau", ["i", "rho", "ρ", "0,1", "1,1", "-1/2,3/4", "1/2,1/2"])
def test_refusal_near_elliptic_points(tau):
    # 0+1i and 1+1i are i and i+1; (-1/2)+(3/4)i... is checked via its reduction
    p = parse_tau(tau)
    r = reduce_point(p)
    with mpmath.workprec(64):
        tau_r = r.value()
        rho = mpmath.expjpi(mpmath.mpf(1) / 3)
        near = min(abs(tau_r - e) for e in (1j, rho, rho - 1))
    if near < 1e-6:
        with pytest.raises(EllipticPointError):
            pole_family_coefficient(tau, 1, cutoff=50)
        with pytest.raises(EllipticPointError):
            pole_family_oracle(tau, 3)
    else:
        check_not_elliptic(p)


def test_elliptic_refusals_explicit():
    for tau in ("i", "rho", "0,1", "1/2,1/2"):     # (1+i)/2 = S-image of i - 1 ... up to T
        with pytest.raises(EllipticPointError):
            check_not_elliptic(parse_tau(tau))


def test_generic_point_finite():
    v = pole_family_coefficient("1/2,3", 0)
    assert mpmath.isfinite(v.value.real) and mpmath.isfinite(v.value.imag)


def test_equivalent_points_give_equal_coefficients():
    a = pole_family_coefficient("2i", 2, cutoff=300)
    b = pole_family_coefficient("0,1/2", 2, cutoff=300)         # -1/(2i) = i/2
    c = pole_family_coefficient("3,2", 2, cutoff=300)           # 2i + 3
    assert a.value == b.value == c.value


def test_reduce_point_lands_in_fundamental_domain():
    for text in ("1/7,1/9", "5/3,1/50", "-11/4,2/3", "3/5,3/4"):
        r = reduce_point(parse_tau(text))
        assert abs(r.x) <= Fraction(1, 2) and r.x ** 2 + r.y2 >= 1


def test_reduce_point_preserves_j():
    # q-series for j is only usable away from the real axis, so keep Im tau moderate
    for text in ("-11/4,2/3", "3/5,3/4"):
        r = reduce_point(parse_tau(text))
        with mpmath.workprec(160):
            j1 = eval_form("j", parse_tau(text).value(), 128)
            j2 = eval_form("j", r.value(), 128)
            assert abs(j1 - j2) < 1e-20 * abs(j1)


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_tau("1,-2")
    with pytest.raises(ValueError):
        parse_tau("banana")
    with pytest.raises(ValueError):
        pole_family_coefficient("2i", -1)


def test_coprime_pairs_sorted():
    pairs = coprime_pairs(parse_tau("2i"), 200)
    assert pairs == sorted(pairs)
    assert (Fraction(1), 0, 1) in pairs and (Fraction(1), 0, -1) in pairs
