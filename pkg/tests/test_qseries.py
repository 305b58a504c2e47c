from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from meroform.qseries import (TARGETS, LaurentSeries, canonical_target, delta_and_j, derive,
                              eisenstein, invert, mul, oracle_coefficients, power)


def coeffs(s, upto=None):
    upto = s.truncation_order if upto is None else upto
    return [s[e] for e in range(s.min_exponent, upto + 1)]


def test_eisenstein_examples():
    assert coeffs(eisenstein(4, 3)) == [1, 240, 2160, 6720]
    assert coeffs(eisenstein(2, 1)) == [1, -24]
    assert coeffs(eisenstein(6, 0)) == [1]


def test_eisenstein_rejects_bad_weight():
    with pytest.raises(ValueError):
        eisenstein(8, 4)
    with pytest.raises(ValueError):
        eisenstein(4, -1)


def test_delta_and_j_examples():
    delta, _ = delta_and_j(3)
    assert delta.min_exponent == 1
    assert coeffs(delta) == [1, -24, 252]
    _, j = delta_and_j(1)
    assert j.min_exponent == -1
    assert coeffs(j) == [1, 744, 196884]


def test_delta_times_j_is_e4_cubed():
    delta, j = delta_and_j(10)
    lhs = mul(delta, j)
    e4c = power(eisenstein(4, 12), 3)
    for e in range(0, lhs.truncation_order + 1):
        assert lhs[e] == e4c[e]


def test_delta_matches_product_formula():
    # q prod (1 - q^n)^24, expanded independently with integer polynomials
    N = 20
    poly = [1] + [0] * N
    for n in range(1, N + 1):
        for _ in range(24):
            poly = [poly[i] - (poly[i - n] if i >= n else 0) for i in range(N + 1)]
    delta, _ = delta_and_j(N)
    assert [delta[e] for e in range(1, N + 1)] == poly[:N]


def test_inverse_examples():
    assert coeffs(invert(eisenstein(4, 2))) == [1, -240, 55440]
    e6 = eisenstein(6, 20)
    assert coeffs(invert(invert(e6))) == coeffs(e6)


def test_derive_j_leading_term():
    _, j = delta_and_j(4)
    dj = derive(j)
    assert dj.min_exponent == -1 and dj[-1] == -1
    assert dj[0] == 0


def test_invert_zero_leading_raises():
    with pytest.raises(ZeroDivisionError):
        invert(LaurentSeries.from_coefficients([0, 0, 0]))


def test_truncation_is_never_extended():
    f = eisenstein(4, 10)
    g = eisenstein(6, 5)
    assert mul(f, g).truncation_order == 5
    assert (f + g).truncation_order == 5
    with pytest.raises(IndexError):
        (f * g)[6]
    with pytest.raises(ValueError):
        f.truncate(11)


def test_length_invariant_checked():
    with pytest.raises(ValueError):
        LaurentSeries(0, (1, 2), 5)


def test_oracle_examples():
    assert coeffs(oracle_coefficients("1/E₄", 2)) == [1, -240, 55440]
    assert coeffs(oracle_coefficients("E₄²/E₆²", 0)) == [1]
    assert coeffs(oracle_coefficients("E₂²/E₆", 1)) == [1, 456]


def test_oracle_unknown_target():
    with pytest.raises(KeyError):
        oracle_coefficients("E8/E4", 3)


@pytest.mark.parametrize("spelling", ["1/E4", "1/E₄", " 1 / e4 ", "1/E4"])
def test_canonical_target_spellings(spelling):
    assert canonical_target(spelling) == "1/E4"


def test_canonical_target_product_spelling():
    assert canonical_target("E₂E₄²/E₆²") == "E2E4^2/E6^2"
    assert canonical_target("e2*e4**2/e6^2") == "E2E4^2/E6^2"


@pytest.mark.parametrize("target", TARGETS)
def test_oracle_integrality(target):
    s = oracle_coefficients(target, 50)
    assert s.min_exponent == 0 and s.truncation_order == 50
    assert all(c.denominator == 1 for c in s.coefficients)


def test_ramanujan_identities_exact():
    N = 50
    E2, E4, E6 = (eisenstein(w, N) for w in (2, 4, 6))
    assert coeffs(derive(E2)) == coeffs((mul(E2, E2) - E4) * Fraction(1, 12))
    assert coeffs(derive(E4)) == coeffs((mul(E2, E4) - E6) * Fraction(1, 3))
    assert coeffs(derive(E6)) == coeffs((mul(E2, E6) - mul(E4, E4)) * Fraction(1, 2))
    delta, _ = delta_and_j(N)
    lhs = power(E4, 3) - mul(E6, E6)
    assert [lhs[e] for e in range(N + 1)] == [1728 * delta[e] for e in range(N + 1)]


# --- ring axioms on random rational series ---------------------------------------------

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=20)


@st.composite
def series(draw, nonzero_lead=False):
    n = draw(st.integers(min_value=1, max_value=8))
    cs = draw(st.lists(fractions, min_size=n, max_size=n))
    if nonzero_lead and cs[0] == 0:
        cs[0] = Fraction(1)
    lo = draw(st.integers(min_value=-2, max_value=2))
    return LaurentSeries.from_coefficients(cs, lo)


def same(f, g):
    top = min(f.truncation_order, g.truncation_order)
    lo = min(f.min_exponent, g.min_exponent)
    return all(f[e] == g[e] for e in range(lo, top + 1))


@given(series(), series())
def test_mul_commutes(f, g):
    assert same(mul(f, g), mul(g, f))


@given(series(), series(), series())
def test_mul_associates(f, g, h):
    assert same(mul(mul(f, g), h), mul(f, mul(g, h)))


@given(series(), series(), series())
def test_distributive(f, g, h):
    assert same(mul(f, g + h), mul(f, g) + mul(f, h))


@given(series(nonzero_lead=True))
def test_inverse_is_inverse(f):
    one = mul(f, invert(f))
    assert one.truncation_order >= 0 or one.is_zero()
    for e in range(min(0, one.min_exponent), one.truncation_order + 1):
        assert one[e] == (1 if e == 0 else 0)


@given(series(nonzero_lead=True), st.integers(min_value=1, max_value=4))
def test_power_matches_repeated_product(f, k):
    expect = f
    for _ in range(k - 1):
        expect = mul(expect, f)
    assert same(power(f, k), expect)
    assert same(power(f, -k), invert(expect))


@given(series(nonzero_lead=True))
def test_power_zero_is_one(f):
    one = power(f, 0)
    assert one[0] == 1 and all(one[e] == 0 for e in range(1, one.truncation_order + 1))
