"""Coefficients of F_{tau0} = E4 / (Delta (j - j(tau0))^2) for a generic pole tau0.

The form depends on tau0 only through j(tau0), so tau0 is first moved into
the standard fundamental domain; the lattice sum then runs over coprime
pairs (c, d) with |c tau0 + d|^2 <= cutoff.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath

from .expansions import DEFAULT_PRECISION, CoefficientValue
from .ideals import bezout_pair
from .numerics import GUARD_BITS, eval_form, to_mpf
from .qseries import delta_and_j, eisenstein

DEFAULT_POLE_CUTOFF = 2000
ELLIPTIC_DISTANCE = 1e-6


class EllipticPointError(ValueError):
    """tau0 is (numerically) equivalent to i or rho, where j' vanishes."""


@dataclass(frozen=True)
class PolePoint:
    """tau0 = x + i*y with x and y^2 rational (covers i, rho and rational points)."""

    x: Fraction
    y2: Fraction
    label: str

    def abs2(self):
        return self.x * self.x + self.y2

    def value(self):
        y = mpmath.sqrt(to_mpf(self.y2))
        return mpmath.mpc(to_mpf(self.x), y)


def parse_tau(text) -> PolePoint:
    """'i', 'rho', or 're,im' with rational (or decimal) entries such as '1/2,3'."""
    if isinstance(text, PolePoint):
        return text
    if isinstance(text, tuple):
        re, im = (Fraction(t) for t in text)
        return _from_pair(re, im, f"{re}+{im}i")
    s = str(text).strip().lower().replace(" ", "")
    if s == "i":
        return PolePoint(Fraction(0), Fraction(1), "i")
    if s in ("rho", "ρ"):
        return PolePoint(Fraction(1, 2), Fraction(3, 4), "rho")
    if s.endswith("i") and "," not in s:
        # pure imaginary like '2i' or '3/2i'
        return _from_pair(Fraction(0), Fraction(s[:-1] or "1"), s)
    try:
        re, im = s.split(",")
        return _from_pair(Fraction(re), Fraction(im), s)
    except ValueError:
        raise ValueError(f"cannot parse tau0 {text!r}; expected 're,im' with rational parts") from None


def _from_pair(re: Fraction, im: Fraction, label: str) -> PolePoint:
    if im <= 0:
        raise ValueError("tau0 must lie in the upper half-plane")
    return PolePoint(re, im * im, label)


def reduce_point(p: PolePoint) -> PolePoint:
    """SL2(Z)-equivalent point with |x| <= 1/2 and |tau| >= 1, computed exactly."""
    x, y2 = p.x, p.y2
    for _ in range(10_000):
        t = math.floor(x + Fraction(1, 2))
        x = x - t
        a2 = x * x + y2
        if a2 >= 1:
            return PolePoint(x, y2, p.label)
        # -1/tau = (-x + i y) / |tau|^2
        x, y2 = -x / a2, y2 / (a2 * a2)
    raise ValueError("reduction did not terminate")


def check_not_elliptic(p: PolePoint, prec: int = 64):
    r = reduce_point(p)
    with mpmath.workprec(prec + GUARD_BITS):
        tau = r.value()
        rho = mpmath.expjpi(mpmath.mpf(1) / 3)
        for name, e in (("i", mpmath.mpc(0, 1)), ("rho", rho), ("rho", rho - 1)):
            dist = abs(tau - e)
            if dist < ELLIPTIC_DISTANCE:
                raise EllipticPointError(
                    f"tau0 = {p.label} is equivalent to {name} (distance {mpmath.nstr(dist, 3)}); "
                    f"j'(tau0) vanishes there and F_tau0 has a pole of higher order")
    return r


@dataclass(frozen=True)
class PrincipalPart:
    tau: object
    j0: object
    lambda_m2: object
    lambda_m1: object


def principal_part(p: PolePoint, prec: int = DEFAULT_PRECISION) -> PrincipalPart:
    """Laurent coefficients lambda_{-2}, lambda_{-1} of F_tau0 at z = tau0."""
    r = check_not_elliptic(p)
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp):
        tau = r.value()
        e4, e4p = eval_form("E4", tau, wp), eval_form("E4", tau, wp, 1)
        dl, dlp = eval_form("Delta", tau, wp), eval_form("Delta", tau, wp, 1)
        j0, j1, j2 = (eval_form("j", tau, wp, k) for k in (0, 1, 2))
        lm2 = e4 / (dl * j1 ** 2)
        lm1 = -e4 / dl * j2 / j1 ** 3 + (dl * e4p - e4 * dlp) / (dl ** 2 * j1 ** 2)
        return PrincipalPart(tau, +j0, +lm2, +lm1)


def coprime_pairs(p: PolePoint, cutoff: int):
    """Coprime (c, d) with |c tau + d|^2 <= cutoff, ordered by (|c tau + d|^2, c, d)."""
    out = []
    x, y2 = p.x, p.y2
    cmax = math.isqrt(math.floor(cutoff / y2)) + 1
    for c in range(-cmax, cmax + 1):
        rest = cutoff - c * c * y2
        if rest < 0:
            continue
        centre = -c * x
        span = math.isqrt(math.floor(rest)) + 2
        for d in range(math.floor(centre) - span, math.ceil(centre) + span + 1):
            lam = (c * x + d) ** 2 + c * c * y2
            if lam <= cutoff and gcd(c, d) == 1:
                out.append((lam, c, d))
    out.sort()
    return out


def B_value(p: PolePoint, m: int, c: int, d: int, n: int, bezout=None):
    """(c tau + d)^{-m} e^{2 pi n v/lam} e(-(n/lam)(ac|tau|^2 + bd + x(ad+bc))) at ambient precision."""
    a, b = bezout if bezout is not None else bezout_pair(c, d)
    if a * d - b * c != 1:
        raise ValueError("invalid Bezout pair")
    tau = p.value()
    g = c * tau + d
    lam = (c * p.x + d) ** 2 + c * c * p.y2
    P = a * c * p.abs2() + b * d + p.x * (a * d + b * c)
    # the rational phase is reduced mod 1 exactly before it meets floating point
    phase = 2 * mpmath.pi * to_mpf((-n * P / lam) % 1)
    lam = to_mpf(lam)
    return g ** (-m) * mpmath.exp(2 * mpmath.pi * n * tau.imag / lam) * mpmath.expj(phase)


def pole_family_coefficient(tau0, n: int, cutoff: int = DEFAULT_POLE_CUTOFF,
                            prec: int = DEFAULT_PRECISION) -> CoefficientValue:
    """n-th coefficient of F_tau0 from the lattice-sum expansion around the double pole."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    p = reduce_point(parse_tau(tau0))
    pp = principal_part(p, prec)
    v = p.value().imag
    wp = prec + GUARD_BITS + math.ceil(2 * math.pi * float(v) * n / math.log(2))
    with mpmath.workprec(wp):
        v = p.value().imag
        k12 = 1j * pp.lambda_m2 / 2
        k10 = 5 * pp.lambda_m2 / (2j * v) - pp.lambda_m1 / 2
        total = mpmath.mpc(0)
        for lam, c, d in coprime_pairs(p, cutoff):
            lam_f = to_mpf(lam)
            b12 = B_value(p, 12, c, d, n)
            b10 = B_value(p, 10, c, d, n)
            total += k12 * (5 * lam_f / v + 2 * mpmath.pi * n) * b12 + k10 * b10
        value = 2j * mpmath.pi * total
        tail = _lattice_tail(pp, v, n, cutoff)
        return CoefficientValue(n, +value, cutoff, tail, prec)


def _lattice_tail(pp: PrincipalPart, v, n: int, cutoff: int):
    # count of coprime pairs with |c tau + d|^2 <= X is at most pi (sqrt X + 1)^2 / v;
    # the B_10 terms decay like lam^-5 and the lam * B_12 terms like lam^-5 as well
    L = mpmath.mpf(cutoff)
    amp = 2 * mpmath.pi * (abs(pp.lambda_m2) / 2 * (5 / v + 2 * mpmath.pi * n / L)
                           + abs(5 * pp.lambda_m2 / (2 * v)) + abs(pp.lambda_m1) / 2)
    growth = mpmath.exp(2 * mpmath.pi * n * v / L)
    K = mpmath.pi / v
    s = mpmath.mpf(-5)
    body = L ** (s + 1) / (-s - 1) + 2 * L ** (s + 0.5) / (-s - 0.5) + L ** s / (-s)
    return +(amp * growth * (-s) * K * body)


# --- oracle ----------------------------------------------------------------------------

def _smul(a, b, order):
    return [mpmath.fsum(a[i] * b[k - i] for i in range(k + 1)) for k in range(order + 1)]


def _sinv(a, order):
    b = [1 / a[0]]
    for k in range(1, order + 1):
        b.append(-mpmath.fsum(a[i] * b[k - i] for i in range(1, k + 1)) / a[0])
    return b


def pole_family_oracle(tau0, order: int, prec: int = DEFAULT_PRECISION):
    """Coefficients of q^0..q^order of E4/(Delta (j - j0)^2) with j0 = j(tau0) numeric.

    Built as q * E4 / (Dq * (u - j0 q)^2) with Dq = Delta/q and u = j q, so all
    series involved are ordinary power series with exact rational coefficients
    apart from j0.
    """
    p = reduce_point(parse_tau(tau0))
    pp = principal_part(p, prec)
    N = order + 2
    delta, j = delta_and_j(N + 2)
    e4 = eisenstein(4, N)
    dq = delta.shift(-1).truncate(N)
    u = j.shift(1).truncate(N)
    with mpmath.workprec(prec + GUARD_BITS + 16 * order):
        e4c = [to_mpf(c) for c in e4.coefficients]
        dqc = [to_mpf(dq[k]) for k in range(N + 1)]
        w = [mpmath.mpc(to_mpf(u[k])) for k in range(N + 1)]
        w[1] -= pp.j0
        w2 = _smul(w, w, N)
        g = _smul(e4c, _sinv(_smul(dqc, w2, N), N), N)
        return [mpmath.mpc(0)] + [+g[k] for k in range(order)]
