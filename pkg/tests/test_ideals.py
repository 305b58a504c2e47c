from math import gcd

import pytest
from hypothesis import given, strategies as st

from meroform.ideals import (EISENSTEIN, GAUSSIAN, bezout_pair, canonical_rep, conjugate_ideal,
                             enumerate_primitive_ideals, field_from_name)


def test_field_constants():
    assert GAUSSIAN.omega == 2 and EISENSTEIN.omega == 3
    assert GAUSSIAN.norm(2, 3) == 13
    assert EISENSTEIN.norm(1, 2) == 1 + 2 + 4
    assert field_from_name("ρ") is EISENSTEIN
    with pytest.raises(ValueError):
        field_from_name("sqrt(-5)")


def test_gaussian_small_list():
    ideals = enumerate_primitive_ideals(GAUSSIAN, 5)
    assert [I.norm for I in ideals] == [1, 2, 5, 5]


def test_eisenstein_norm_one():
    ideals = enumerate_primitive_ideals(EISENSTEIN, 1)
    assert len(ideals) == 1 and (ideals[0].c, ideals[0].d) == (0, 1)


def test_eisenstein_norms_to_50():
    norms = sorted({I.norm for I in enumerate_primitive_ideals(EISENSTEIN, 50)})
    assert norms == [1, 3, 7, 13, 19, 21, 31, 37, 39, 43, 49]


def test_enumeration_rejects_bad_bound():
    with pytest.raises(ValueError):
        enumerate_primitive_ideals(GAUSSIAN, 0)


def test_enumeration_sorted_and_valid():
    for fld in (GAUSSIAN, EISENSTEIN):
        ideals = enumerate_primitive_ideals(fld, 2000)
        assert ideals == sorted(ideals)
        for I in ideals:
            a, b = I.bezout
            assert gcd(I.c, I.d) == 1 and a * I.d - b * I.c == 1
            assert I.c >= 0 and I.d > 0 and fld.norm(I.c, I.d) == I.norm


def test_gaussian_counts_match_brute_force():
    counts = {}
    for I in enumerate_primitive_ideals(GAUSSIAN, 500):
        counts[I.norm] = counts.get(I.norm, 0) + 1
    for N in range(1, 501):
        sols = sum(1 for c in range(-23, 24) for d in range(-23, 24)
                   if c * c + d * d == N and gcd(c, d) == 1)
        assert sols % 4 == 0
        assert counts.get(N, 0) == sols // 4


def _is_prime(p):
    return p > 1 and all(p % q for q in range(2, int(p ** 0.5) + 1))


def test_eisenstein_norm_characterization():
    # primitive norms are 3^a * prod p^e with a in {0, 1} and p = 1 mod 6
    for N in sorted({I.norm for I in enumerate_primitive_ideals(EISENSTEIN, 10_000)}):
        m = N
        if m % 3 == 0:
            m //= 3
            assert m % 3
        p = 2
        while m > 1:
            if m % p == 0:
                assert _is_prime(p) and p % 6 == 1, (N, p)
                m //= p
            else:
                p += 1


def test_ideal_counts_at_ten_thousand():
    assert len(enumerate_primitive_ideals(GAUSSIAN, 10_000)) == 4772
    assert len(enumerate_primitive_ideals(EISENSTEIN, 10_000)) == 3688


def test_canonical_rep_examples():
    I = canonical_rep(GAUSSIAN, 0, -1)
    assert (I.c, I.d) == (0, 1)
    assert canonical_rep(GAUSSIAN, 1, 2) == canonical_rep(GAUSSIAN, -1, -2)
    assert canonical_rep(EISENSTEIN, 1, 1).norm == 3
    with pytest.raises(ValueError):
        canonical_rep(GAUSSIAN, 2, 4)


def test_conjugate_examples():
    I = canonical_rep(GAUSSIAN, 1, 2)            # i + 2
    J = conjugate_ideal(I)                       # 2 - i ~ 1 + 2i
    assert J.norm == 5 and (J.c, J.d) == (2, 1)
    one = canonical_rep(EISENSTEIN, 0, 1)
    assert conjugate_ideal(one) == one


def test_conjugation_is_involution():
    for fld in (GAUSSIAN, EISENSTEIN):
        for I in enumerate_primitive_ideals(fld, 100):
            J = conjugate_ideal(I)
            assert J.norm == I.norm
            assert conjugate_ideal(J) == I


coprime = st.tuples(st.integers(-200, 200), st.integers(-200, 200)).filter(
    lambda p: gcd(*p) == 1)


@given(coprime)
def test_bezout_pair_valid_and_reduced(p):
    c, d = p
    a, b = bezout_pair(c, d)
    assert a * d - b * c == 1
    if c:
        assert 0 <= a < abs(c)


def test_bezout_rejects_noncoprime():
    with pytest.raises(ValueError):
        bezout_pair(4, 6)


@given(coprime, st.sampled_from([GAUSSIAN, EISENSTEIN]))
def test_canonical_constant_on_unit_orbit(p, fld):
    c, d = p
    base = canonical_rep(fld, c, d)
    assert canonical_rep(fld, base.c, base.d) == base       # idempotent
    for _ in range(fld.units):
        c, d = fld.unit_multiply(c, d)
        assert canonical_rep(fld, c, d) == base
