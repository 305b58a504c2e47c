"""Ideal-sum coefficient formulas.

The workhorse is the inner sum of the master series

    F_{k,l,r}(n) = sum_b C_k(b, n) n^r e^{2 pi n z2 / N(b)} / N(b)^{k/2 - l}

over primitive ideals b of Z[i] or Z[rho] with N(b) <= cutoff.  Each named
target is a short linear combination of these sums (an ExpansionRecipe).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import mpmath
import numpy as np

from .ideals import (EISENSTEIN, GAUSSIAN, FieldTag, PrimitiveIdeal, bezout_pair,
                     enumerate_primitive_ideals, field_from_name)
from .numerics import GUARD_BITS, MAX_SPECIAL_PRECISION, PrecisionError, special_value, to_mpf
from .qseries import canonical_target

DEFAULT_CUTOFF = 10_000
DEFAULT_PRECISION = 256
# Ideals up to HEAD_LIMIT are summed in full precision; beyond it a float64
# bulk tier takes over (its total is bounded by the tail beyond HEAD_LIMIT, so
# double rounding there costs ~1e-16 of an already tiny quantity).
HEAD_LIMIT = 10_000
FLOAT_ALLOWANCE = 2.0 ** -40


@dataclass(frozen=True)
class CoefficientValue:
    n: int
    value: object
    norm_cutoff: int
    tail_estimate: object
    precision_bits: int


@dataclass(frozen=True)
class ExpansionRecipe:
    """``sum scalar * F_{k,l,r}`` over ``terms`` = ((k, l, r, scalar), ...)."""

    name: str
    field: FieldTag
    terms: tuple

    def weights(self):
        return sorted({t[0] for t in self.terms})


def _check_weight(fld: FieldTag, k: int):
    if k % (2 * fld.omega):
        raise ValueError(f"weight {k} is not a multiple of {2 * fld.omega} as required at {fld}")


def _phase_numerator(fld: FieldTag, a: int, b: int, c: int, d: int) -> int:
    """2*(ac|z|^2 + bd + z1(ad + bc)), an integer for both base points."""
    p = a * c * fld.abs_squared + b * d + fld.real_part * (a * d + b * c)
    p2 = 2 * p
    assert p2.denominator == 1
    return int(p2)


def A_value(fld: FieldTag, c: int, d: int, bezout, n: int, m: int, prec: int = DEFAULT_PRECISION):
    """e(-(n/N)(ac|z|^2 + bd + z1(ad+bc)) - (m/2pi) arg(cz+d)).

    The rational part of the phase is reduced mod 1 exactly, so the result is
    independent of the Bezout pair down to the last bit.
    """
    a, b = bezout
    if a * d - b * c != 1:
        raise ValueError(f"({a}, {b}) is not a Bezout pair for ({c}, {d})")
    if m % 2:
        raise ValueError("m must be even")
    if gcd(c, d) != 1:
        raise ValueError(f"({c}, {d}) is not a coprime pair")
    N = fld.norm(c, d)
    num = (-n * _phase_numerator(fld, a, b, c, d)) % (2 * N)
    with mpmath.workprec(prec + GUARD_BITS):
        theta = mpmath.pi * num / N - m * fld.generator_arg(c, d)
        return +mpmath.expj(theta)


def C_value(fld: FieldTag, ideal: PrimitiveIdeal, n: int, k: int, prec: int = DEFAULT_PRECISION):
    """Real part of A_k on the canonical generator; needs k divisible by 2*omega."""
    _check_weight(fld, k)
    return A_value(fld, ideal.c, ideal.d, ideal.bezout, n, k, prec).real


def cosine_formula(fld: FieldTag, c: int, d: int, n: int, k: int, prec: int = DEFAULT_PRECISION):
    """Single-argument arctan form of C_k, for cross-checking only.

    For rho the closed form is written for generators c*rho' + d' with
    rho' = rho - 1, hence d' = d + c.  Returns None where the arctan
    argument is undefined.
    """
    _check_weight(fld, k)
    with mpmath.workprec(prec + GUARD_BITS):
        if fld is GAUSSIAN or fld.name == "i":
            if d == 0:
                return None
            a, b = bezout_pair(c, d)
            N = c * c + d * d
            return +mpmath.cos(2 * mpmath.pi * n * (a * c + b * d) / N
                               + k * mpmath.atan(mpmath.mpf(c) / d))
        cp, dp = c, d + c
        if 2 * dp == cp:
            return None
        a, b = bezout_pair(cp, dp)
        N = cp * cp - cp * dp + dp * dp
        ang = (mpmath.pi * n * (a * dp + b * cp - 2 * a * cp - 2 * b * dp) / N + mpmath.pi * n
               - k * mpmath.atan(cp * mpmath.sqrt(3) / (2 * dp - cp)))
        return (-1) ** n * mpmath.cos(ang)


# --- the master sum ------------------------------------------------------------------

def working_precision(fld: FieldTag, n: int, prec: int) -> int:
    """prec + guard bits + room for the e^{2 pi n z2} growth of the n-th coefficient."""
    z2 = math.sqrt(float(fld.imag_part_squared))
    return prec + GUARD_BITS + math.ceil(2 * math.pi * z2 * max(n, 0) / math.log(2))


@lru_cache(maxsize=32)
def _ideal_table(name: str, cutoff: int, wp: int, bezout_seed):
    """Per-ideal data independent of n: (N, phase numerator, arg, e^{2 pi z2/N}, 1/N)."""
    fld = field_from_name(name)
    rng = random.Random(bezout_seed) if bezout_seed is not None else None
    rows = []
    with mpmath.workprec(wp):
        z2 = fld.imag_part()
        twopi_z2 = 2 * mpmath.pi * z2
        for ideal in enumerate_primitive_ideals(fld, cutoff):
            a, b = ideal.bezout
            if rng is not None:
                t = rng.randint(-50, 50)
                a, b = a + t * ideal.c, b + t * ideal.d
            N = ideal.norm
            rows.append((N, _phase_numerator(fld, a, b, ideal.c, ideal.d),
                         fld.generator_arg(ideal.c, ideal.d),
                         mpmath.exp(twopi_z2 / N), 1 / mpmath.mpf(N)))
    return tuple(rows)


def _bezout_arrays(c: int, d):
    """Vectorized extended Euclid: (a, b) with a*d - b*c = 1 for coprime (c, d[i])."""
    r0, r1 = d.copy(), np.full_like(d, c)
    s0, s1 = np.ones_like(d), np.zeros_like(d)
    t0, t1 = np.zeros_like(d), np.ones_like(d)
    while np.any(r1):
        nz = r1 != 0
        q = np.where(nz, r0 // np.where(nz, r1, 1), 0)
        r0, r1 = np.where(nz, r1, r0), np.where(nz, r0 - q * r1, r1)
        s0, s1 = np.where(nz, s1, s0), np.where(nz, s0 - q * s1, s1)
        t0, t1 = np.where(nz, t1, t0), np.where(nz, t0 - q * t1, t1)
    # r0 is +-1 here
    return s0 * r0, -t0 * r0


def _bulk_rows(fld: FieldTag, lo: int, hi: int):
    """Canonical ideals with lo < N <= hi, one array batch per value of c."""
    tr = fld.trace
    z1 = float(fld.real_part)
    z2 = math.sqrt(float(fld.imag_part_squared))
    cmax = math.isqrt(math.floor(hi / fld.imag_part_squared)) + 1
    for c in range(0, cmax + 1):
        disc = tr * tr * c * c - 4 * (c * c - hi)
        if disc < 0:
            continue
        dmax = (-tr * c + math.isqrt(disc)) // 2 + 1
        d = np.arange(1, dmax + 1, dtype=np.int64)
        N = c * c + tr * c * d + d * d
        keep = (N > lo) & (N <= hi) & (np.gcd(c, d) == 1)
        if not keep.any():
            continue
        d, N = d[keep], N[keep]
        a, b = _bezout_arrays(c, d)
        p2 = 2 * (a * c + b * d) + tr * (a * d + b * c)
        yield N, np.mod(p2, 2 * N), np.arctan2(c * z2, d + c * z1)


_BULK_CACHE: dict = {}


def _bulk_sums(fld: FieldTag, k: int, lo: int, hi: int, ns):
    """float64 sums over lo < N <= hi for several n at once; {n: {l: value}}."""
    cache = _BULK_CACHE.setdefault((fld.name, k, lo, hi), {})
    missing = sorted({n for n in ns if n not in cache})
    if missing:
        z2 = math.sqrt(float(fld.imag_part_squared))
        ells = [l for l in range(3) if k >= 4 + 2 * l]
        nn = np.array(missing, dtype=np.int64)[:, None]
        parts = {(n, l): [] for n in missing for l in ells}
        for N, p2, arg in _bulk_rows(fld, lo, hi):
            Nf = N.astype(np.float64)
            num = np.mod(-nn * p2, 2 * N)
            w = np.cos(np.pi * num / Nf - k * arg) * np.exp(2 * np.pi * z2 * nn / Nf)
            for l in ells:
                row = (w * Nf ** (l - k / 2)).sum(axis=1)
                for i, n in enumerate(missing):
                    parts[(n, l)].append(float(row[i]))
        for n in missing:
            cache[n] = {l: math.fsum(parts[(n, l)]) for l in ells}
    return {n: cache[n] for n in ns}


def _master_sums(fld: FieldTag, k: int, ells, n: int, cutoff: int, wp: int, bezout_seed=None):
    """{l: sum C_k e^{2 pi n z2/N} N^{l-k/2}} over primitive ideals with N <= cutoff."""
    table = _ideal_table(fld.name, min(cutoff, HEAD_LIMIT), -(-wp // 64) * 64, bezout_seed)
    half = k // 2
    ells = sorted(set(ells))
    acc = {l: mpmath.mpf(0) for l in ells}
    with mpmath.workprec(wp):
        pi = mpmath.pi
        for N, p2, arg, base, invN in table:
            num = (-n * p2) % (2 * N)
            w = mpmath.cos(pi * num / N - k * arg)
            if n:
                w *= base ** n
            for l in ells:
                acc[l] += w * invN ** (half - l)
        if cutoff > HEAD_LIMIT:
            bulk = _bulk_sums(fld, k, HEAD_LIMIT, cutoff, [n])[n]
            for l in ells:
                acc[l] += bulk[l]
    return acc


def _term_tail(fld: FieldTag, k: int, l: int, n: int, r: int, cutoff: int):
    tail = tail_estimate(fld, k, l, n, cutoff, r)
    if cutoff > HEAD_LIMIT:
        tail += FLOAT_ALLOWANCE * tail_estimate(fld, k, l, n, HEAD_LIMIT, r)
    return tail


def tail_estimate(fld: FieldTag, k: int, l: int, n: int, cutoff: int, r: int = 0,
                  prec: int = 64):
    """Upper estimate for the part of F_{k,l,r}(n) dropped above the norm cutoff.

    Uses |C| <= 1, e^{2 pi n z2/N} <= e^{2 pi n z2/cutoff} and the ideal-count
    envelope R(X) <= K (sqrt(X) + delta)^2, with K = pi / (2 omega z2) the
    area factor per unit orbit and delta = sqrt(kappa_max/2) the half-diagonal
    of a unit cell measured in the norm.  Partial summation then gives a
    closed form in the cutoff.
    """
    s = l - Fraction(k, 2)
    if s > -2:
        raise ValueError(f"tail estimate needs k/2 - l >= 2, got k={k}, l={l}")
    if cutoff < 1:
        raise ValueError("cutoff must be positive")
    with mpmath.workprec(prec):
        z2 = fld.imag_part()
        K = mpmath.pi / (2 * fld.omega * z2)
        x1 = to_mpf(fld.real_part)
        z_abs2 = to_mpf(fld.abs_squared)
        kappa_max = (1 + z_abs2) / 2 + mpmath.sqrt(((z_abs2 - 1) / 2) ** 2 + x1 * x1)
        delta = mpmath.sqrt(kappa_max / 2)
        L = mpmath.mpf(cutoff)
        sf = to_mpf(s)
        body = (L ** (sf + 1) / (-sf - 1) + 2 * delta * L ** (sf + mpmath.mpf(1) / 2) / (-sf - mpmath.mpf(1) / 2)
                + delta ** 2 * L ** sf / (-sf))
        growth = mpmath.exp(2 * mpmath.pi * n * z2 / L) * mpmath.mpf(n) ** r if (n or not r) else 0
        return +(growth * (-sf) * K * body)


def F_coefficient(fld: FieldTag, k: int, l: int, r: int, n: int, cutoff: int = DEFAULT_CUTOFF,
                  prec: int = DEFAULT_PRECISION, bezout_seed=None) -> CoefficientValue:
    """Inner sum of F_{k,l,r} at q^n, truncated at N(b) <= cutoff."""
    _check_weight(fld, k)
    if k < 4 + 2 * l:
        raise ValueError(f"F_{{{k},{l},{r}}} needs k >= 4 + 2l")
    if n < 0 or r < 0:
        raise ValueError("n and r must be nonnegative")
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    wp = working_precision(fld, n, prec)
    tail = _term_tail(fld, k, l, n, r, cutoff)
    if r and n == 0:
        return CoefficientValue(n, mpmath.mpc(0), cutoff, tail, prec)
    inner = _master_sums(fld, k, [l], n, cutoff, wp, bezout_seed)[l]
    with mpmath.workprec(wp):
        return CoefficientValue(n, mpmath.mpc(inner * n ** r), cutoff, tail, prec)


# --- recipes ----------------------------------------------------------------------------

class _Constants:
    def __init__(self, prec):
        p = min(prec, MAX_SPECIAL_PRECISION)
        self.pi = mpmath.pi
        self.s3 = mpmath.sqrt(3)
        self.E4i = special_value("E4_at_i", p)
        self.E6r = special_value("E6_at_rho", p)


# (field, [(k, l, r, scalar(K)), ...])
_RECIPES = {
    "1/E4": ("rho", [(6, 0, 0, lambda K: 3 / K.E6r)]),
    "1/E6": ("i", [(8, 0, 0, lambda K: 2 / K.E4i ** 2)]),
    "E4/E6": ("i", [(4, 0, 0, lambda K: 2 / K.E4i)]),
    "E2/E6": ("i", [(8, 1, 0, lambda K: 6 / (K.pi * K.E4i ** 2))]),
    "E2/E4": ("rho", [(6, 1, 0, lambda K: 6 * K.s3 / (K.pi * K.E6r))]),
    "E2^2/E6": ("i", [(8, 2, 0, lambda K: 18 / (K.pi ** 2 * K.E4i ** 2))]),
    "E4^2/E6^2": ("i", [(8, 1, 0, lambda K: 6 / (K.pi * K.E4i ** 2)),
                        (8, 0, 1, lambda K: 4 / K.E4i ** 2)]),
    "1/E6^2": ("i", [(16, 1, 0, lambda K: 14 / (K.pi * K.E4i ** 4)),
                     (16, 0, 1, lambda K: 4 / K.E4i ** 4)]),
    "E4/E6^2": ("i", [(12, 1, 0, lambda K: 10 / (K.pi * K.E4i ** 3)),
                      (12, 0, 1, lambda K: 4 / K.E4i ** 3)]),
    "1/E4^2": ("rho", [(12, 1, 0, lambda K: 15 * K.s3 / (K.pi * K.E6r ** 2)),
                       (12, 0, 1, lambda K: 9 / K.E6r ** 2)]),
    # weight 6, not 12: 1/E4^2 needs weight 12 only because the numerator is 1
    "E6/E4^2": ("rho", [(6, 1, 0, lambda K: 6 * K.s3 / (K.pi * K.E6r)),
                        (6, 0, 1, lambda K: 9 / K.E6r)]),
    "1/E4^3": ("rho", [(18, 2, 0, lambda K: 945 / (4 * K.pi ** 2 * K.E6r ** 3)),
                       (18, 1, 1, lambda K: 135 * K.s3 / (2 * K.pi * K.E6r ** 3)),
                       (18, 0, 2, lambda K: 27 / (2 * K.E6r ** 3))]),
    "E6/E4^3": ("rho", [(12, 2, 0, lambda K: 81 / (K.pi ** 2 * K.E6r ** 2)),
                        (12, 1, 1, lambda K: 81 * K.s3 / (2 * K.pi * K.E6r ** 2)),
                        (12, 0, 2, lambda K: 27 / (2 * K.E6r ** 2))]),
    "E2E4^2/E6^2": ("i", [(8, 2, 0, lambda K: 15 / (K.pi ** 2 * K.E4i ** 2)),
                          (8, 1, 1, lambda K: 12 / (K.pi * K.E4i ** 2)),
                          (4, 0, 0, lambda K: 1 / (3 * K.E4i))]),
}


def recipe_for(target: str, prec: int = DEFAULT_PRECISION) -> ExpansionRecipe:
    """Linear combination of master series reproducing the named target."""
    name = canonical_target(target)
    if prec > MAX_SPECIAL_PRECISION:
        raise PrecisionError(f"recipes support at most {MAX_SPECIAL_PRECISION} bits")
    field_name, spec = _RECIPES[name]
    with mpmath.workprec(prec + GUARD_BITS):
        K = _Constants(prec + GUARD_BITS)
        terms = tuple((k, l, r, +f(K)) for k, l, r, f in spec)
    return ExpansionRecipe(name, field_from_name(field_name), terms)


def evaluate_recipe(recipe: ExpansionRecipe, n: int, cutoff: int = DEFAULT_CUTOFF,
                    prec: int = DEFAULT_PRECISION, bezout_seed=None) -> CoefficientValue:
    fld = recipe.field
    wp = working_precision(fld, n, prec)
    total = mpmath.mpf(0)
    tail = mpmath.mpf(0)
    for k in recipe.weights():
        terms = [t for t in recipe.terms if t[0] == k]
        sums = _master_sums(fld, k, [t[1] for t in terms], n, cutoff, wp, bezout_seed)
        with mpmath.workprec(wp):
            for _, l, r, scalar in terms:
                if r and n == 0:
                    continue
                total += scalar * sums[l] * n ** r
        for _, l, r, scalar in terms:
            tail += abs(scalar) * _term_tail(fld, k, l, n, r, cutoff)
    with mpmath.workprec(wp):
        return CoefficientValue(n, mpmath.mpc(total), cutoff, tail, prec)


def formula_coefficient(target: str, n: int, cutoff: int = DEFAULT_CUTOFF,
                        prec: int = DEFAULT_PRECISION, route: str = "recipe",
                        bezout_seed=None) -> CoefficientValue:
    """n-th Fourier coefficient of a named target from its ideal-sum expansion.

    ``route="bn2"`` evaluates 1/E4 through the folded sum over 12-element
    solution classes of c^2 - cd + d^2 = lambda instead of the ideal sum.
    """
    return formula_coefficients(target, [n], cutoff, prec, route, bezout_seed)[0]


def formula_coefficients(target: str, ns, cutoff: int = DEFAULT_CUTOFF,
                         prec: int = DEFAULT_PRECISION, route: str = "recipe",
                         bezout_seed=None) -> list:
    """Batch form of :func:`formula_coefficient`; shares the bulk-tier pass across n."""
    ns = list(ns)
    if any(n < 0 for n in ns):
        raise ValueError("n must be nonnegative")
    if route == "bn2":
        if canonical_target(target) != "1/E4":
            raise ValueError("the bn2 route exists only for 1/E4")
        return [beta_bn2(n, cutoff, prec) for n in ns]
    if route != "recipe":
        raise ValueError(f"unknown route {route!r}")
    recipe = recipe_for(target, prec)
    if cutoff > HEAD_LIMIT:
        for k in recipe.weights():
            _bulk_sums(recipe.field, k, HEAD_LIMIT, cutoff, ns)
    return [evaluate_recipe(recipe, n, cutoff, prec, bezout_seed) for n in ns]


# --- the folded 1/E4 sum ---------------------------------------------------------------

def _orbit12(c, d):
    return {(c, d), (-c, -d), (d, c), (-d, -c), (c - d, c), (d - c, -c), (c, c - d),
            (-c, d - c), (d, d - c), (-d, c - d), (c - d, -d), (d - c, d)}


@lru_cache(maxsize=8)
def solution_classes(cutoff: int):
    """Representatives of coprime solutions of c^2 - cd + d^2 = lam <= cutoff, one per 12-orbit.

    Returns (lam, c, d, class_size) sorted by lam, with a representative that
    keeps the arctan argument finite (2d != c).
    """
    box = math.isqrt(2 * cutoff) + 2
    sols = {}
    for c in range(-box, box + 1):
        for d in range(-box, box + 1):
            lam = c * c - c * d + d * d
            if 0 < lam <= cutoff and gcd(c, d) == 1:
                sols.setdefault(lam, set()).add((c, d))
    out = []
    for lam in sorted(sols):
        rem = set(sols[lam])
        while rem:
            orbit = _orbit12(*min(rem)) & sols[lam]
            rem -= orbit
            c, d = min((p for p in orbit if 2 * p[1] != p[0]), key=lambda p: (p[1] <= 0, p))
            out.append((lam, c, d, len(orbit)))
    return tuple(out)


def h_folded(c: int, d: int, n: int, lam: int, class_size: int = 12):
    """Class weight h_{(c,d)}(n) of the folded 1/E4 sum.

    A 12-element class pairs an ideal with its conjugate, hence 2 cos(...).
    The self-conjugate classes (lam = 1 and lam = 3) have 6 elements and
    get half of that; for lam = 3 this evaluates to -1 for every n.
    """
    if 2 * d == c:
        raise ValueError("representative with 2d = c has no finite arctan argument")
    a, b = bezout_pair(c, d)
    ang = ((a * d + b * c - 2 * a * c - 2 * b * d + lam) * mpmath.pi * n / lam
           - 6 * mpmath.atan(c * mpmath.sqrt(3) / (2 * d - c)))
    return mpmath.mpf(class_size) / 6 * mpmath.cos(ang)


def beta_bn2(n: int, cutoff: int = DEFAULT_CUTOFF, prec: int = DEFAULT_PRECISION) -> CoefficientValue:
    wp = working_precision(EISENSTEIN, n, prec)
    with mpmath.workprec(wp):
        root3pi = mpmath.pi * mpmath.sqrt(3)
        total = mpmath.mpf(0)
        for lam, c, d, size in solution_classes(cutoff):
            total += h_folded(c, d, n, lam, size) / mpmath.mpf(lam) ** 3 * mpmath.exp(root3pi * n / lam)
        e6 = special_value("E6_at_rho", min(wp, MAX_SPECIAL_PRECISION))
        value = (-1) ** n * 3 / e6 * total
        tail = 3 / e6 * tail_estimate(EISENSTEIN, 6, 0, n, cutoff)
        return CoefficientValue(n, mpmath.mpc(value), cutoff, tail, prec)


def main_term(n: int, prec: int = DEFAULT_PRECISION):
    """Leading asymptotic (-1)^n 3/E6(rho) e^{pi n sqrt 3}, i.e. the cutoff-1 sum."""
    wp = working_precision(EISENSTEIN, n, prec)
    with mpmath.workprec(wp):
        e6 = special_value("E6_at_rho", min(wp, MAX_SPECIAL_PRECISION))
        return +((-1) ** n * 3 / e6 * mpmath.exp(mpmath.pi * mpmath.sqrt(3) * n))
