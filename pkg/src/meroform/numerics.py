"""Arbitrary-precision point evaluation of q-series and special constants.

mpmath keeps its working precision in a process-wide context.  Every public
function here takes the precision in bits as an argument and scopes it with
``mpmath.workprec`` for the duration of the call, so callers never have to
touch ``mpmath.mp.prec`` themselves.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .ideals import FieldTag
from .qseries import LaurentSeries, delta_and_j, eisenstein

GUARD_BITS = 32

# 120 significant digits each; checked against the q-series route in the tests.
GAMMA_1_4 = ("3.62560990822190831193068515586767200299516768288006546743337799956991924353872912"
             "161836013672338430036147175139242071997")
GAMMA_1_3 = ("2.67893853470774763365569294097467764412868937795730110095042832759041761016774381"
             "954098288904118878941915904920007226334")
GAMMA_2_3 = ("1.35411793942640041694528802815451378551932726605679369839402246796378296540174254"
             "167583414795297291110643482361003305885")
PI = ("3.14159265358979323846264338327950288419716939937510582097494459230781640628620899"
      "862803482534211706798214808651328230665")
STORED_DIGITS = 120
# 120 digits carry ~398 bits; keep a margin for the handful of operations in the closed forms.
MAX_SPECIAL_PRECISION = 384


class InsufficientOrderError(ValueError):
    """The series is truncated too early for the requested precision at this point."""


class PrecisionError(ValueError):
    """Requested precision exceeds what the stored constants support."""


@dataclass(frozen=True)
class PointEvaluation:
    tau: object
    form: str
    value: object
    tail_bound: object
    precision_bits: int


def to_mpf(x):
    """Exact-as-possible conversion of ints/Fractions at the ambient precision."""
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def as_complex(tau):
    """Accept mpc/complex/number, a FieldTag, or a pair of rationals (re, im)."""
    if isinstance(tau, FieldTag):
        return tau.point()
    if isinstance(tau, tuple):
        re, im = tau
        return mpmath.mpc(to_mpf(Fraction(re)), to_mpf(Fraction(im)))
    return mpmath.mpc(tau)


def guard_bits(n: int = 0, imag_part: float = 1.0) -> int:
    """Extra bits to absorb the growth e^{2 pi n Im} of an n-th coefficient."""
    return GUARD_BITS + math.ceil(2 * math.pi * imag_part * max(n, 0) / math.log(2))


def order_for(tau, prec: int) -> int:
    """Smallest truncation order T with |q|^T < 2^(-prec-16)."""
    with mpmath.workprec(64):
        y = float(as_complex(tau).imag)
    if y <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    return max(1, math.ceil((prec + 16) * math.log(2) / (2 * math.pi * y)))


def _weighted_coeffs(series: LaurentSeries, r: int):
    twopii = 2j * mpmath.pi
    out = []
    for e, c in series.items():
        a = to_mpf(c)
        if r:
            a = a * (twopii * e) ** r
        out.append(a)
    return out


def _growth(series: LaurentSeries, coeffs) -> mpmath.mpf:
    # envelope |a_n| <= g^n fitted on the upper half of the known coefficients
    T = series.truncation_order
    g = mpmath.mpf(1)
    for i, a in enumerate(coeffs):
        e = series.min_exponent + i
        if e >= max(1, T // 2) and a != 0:
            g = max(g, abs(a) ** (mpmath.mpf(1) / e))
    return g


def _evaluate(series: LaurentSeries, tau, prec: int, r: int, strict: bool):
    if r not in (0, 1, 2):
        raise ValueError("derivative order must be 0, 1 or 2")
    with mpmath.workprec(prec + GUARD_BITS):
        t = as_complex(tau)
        if t.imag <= 0:
            raise ValueError("tau must lie in the upper half-plane")
        q = mpmath.expjpi(2 * t)
        coeffs = _weighted_coeffs(series, r)
        acc = mpmath.mpc(0)
        for a in reversed(coeffs):
            acc = acc * q + a
        value = acc * q ** series.min_exponent if series.min_exponent else acc
        absq = abs(q)
        ratio = _growth(series, coeffs) * absq
        if ratio >= 1:
            raise InsufficientOrderError(
                f"coefficient growth outruns |q| = {mpmath.nstr(absq, 5)}; truncation order "
                f"{series.truncation_order} is too small")
        tail = ratio ** (series.truncation_order + 1) / (1 - ratio)
        if strict and tail > mpmath.ldexp(max(abs(value), 1), -prec):
            raise InsufficientOrderError(
                f"tail bound {mpmath.nstr(tail, 5)} exceeds 2^-{prec}; need truncation order "
                f"beyond {series.truncation_order}")
        return +value, +tail


def eval_at(series: LaurentSeries, tau, prec: int = 128, form: str = "series",
            strict: bool = True) -> PointEvaluation:
    """Horner evaluation of ``sum a_n q^n`` at q = e^{2 pi i tau}.

    The tail bound assumes |a_n| <= g^n beyond the truncation order, with g
    fitted on the upper half of the known coefficients.  It is an engineering
    estimate, not a proof.
    """
    value, tail = _evaluate(series, tau, prec, 0, strict)
    return PointEvaluation(tau, form, value, tail, prec)


def eval_derivative_at(series: LaurentSeries, r: int, tau, prec: int = 128,
                       strict: bool = True):
    """r-th z-derivative, i.e. ``sum (2 pi i n)^r a_n q^n`` (principal part included)."""
    value, _ = _evaluate(series, tau, prec, r, strict)
    return value


# --- named generators at a point -------------------------------------------------

def _named_series(name: str, order: int) -> LaurentSeries:
    if name in ("E2", "E4", "E6"):
        return eisenstein(int(name[1]), order)
    if name == "Delta":
        return delta_and_j(order)[0]
    if name == "j":
        return delta_and_j(order)[1]
    raise ValueError(f"unknown form {name!r}")


def eval_form(name: str, tau, prec: int = 128, r: int = 0):
    """Evaluate E2/E4/E6/Delta/j (or a z-derivative) choosing the truncation order automatically."""
    order = order_for(tau, prec) + 8
    for _ in range(8):
        try:
            return _evaluate(_named_series(name, order), tau, prec, r, True)[0]
        except InsufficientOrderError:
            order *= 2
    raise InsufficientOrderError(f"could not reach {prec} bits for {name} at {tau}")


def e2hat_at(tau, prec: int = 128):
    """Non-holomorphic completion E2(tau) - 3/(pi Im tau)."""
    e2 = eval_form("E2", tau, prec)
    with mpmath.workprec(prec + GUARD_BITS):
        t = as_complex(tau)
        return +(e2 - 3 / (mpmath.pi * t.imag))


# --- closed forms ------------------------------------------------------------------

SPECIAL_VALUES = ("E4_at_i", "E6_at_rho")


def special_value(name: str, prec: int = 256):
    """E4(i) = 3 Gamma(1/4)^8 / (2 pi)^6 and E6(rho) = 24 sqrt(3) Omega^6."""
    if name not in SPECIAL_VALUES:
        raise ValueError(f"unknown special value {name!r}; expected one of {SPECIAL_VALUES}")
    if prec > MAX_SPECIAL_PRECISION:
        raise PrecisionError(
            f"stored constants carry {STORED_DIGITS} digits; {prec} bits requested, "
            f"at most {MAX_SPECIAL_PRECISION} supported")
    with mpmath.workprec(prec + 16):
        pi = mpmath.mpf(PI)
        if name == "E4_at_i":
            v = 3 * mpmath.mpf(GAMMA_1_4) ** 8 / (2 * pi) ** 6
        else:
            omega = (mpmath.mpf(GAMMA_1_3) / mpmath.mpf(GAMMA_2_3)) ** 1.5 / mpmath.sqrt(6 * pi)
            v = 24 * mpmath.sqrt(3) * omega ** 6
        return +v
