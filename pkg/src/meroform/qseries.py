"""Exact q-series arithmetic over the rationals.

Every form handled by the package is a quotient of the generators
E2, E4, E6, Delta and j.  This module builds their q-expansions with
exact :class:`fractions.Fraction` coefficients, so the values it returns
serve as ground truth for the numerical coefficient formulas.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]

DEFAULT_ORDER = 64

_EISENSTEIN_FACTOR = {2: -24, 4: 240, 6: -504}


@dataclass(frozen=True)
class LaurentSeries:
    """Truncated Laurent series ``sum a_i q^(min_exponent + i)``.

    ``truncation_order`` is the largest exponent whose coefficient is
    known; everything above it is unknown, not zero.
    """

    min_exponent: int
    coefficients: tuple
    truncation_order: int

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if len(coeffs) != self.truncation_order - self.min_exponent + 1:
            raise ValueError(
                "coefficient list length must equal truncation_order - min_exponent + 1"
            )

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[Rational], min_exponent: int = 0,
                          truncation_order: int | None = None) -> "LaurentSeries":
        coeffs = list(coeffs)
        if truncation_order is None:
            truncation_order = min_exponent + len(coeffs) - 1
        width = truncation_order - min_exponent + 1
        if width < 0:
            raise ValueError("truncation_order below min_exponent")
        coeffs = coeffs[:width] + [0] * max(0, width - len(coeffs))
        return cls(min_exponent, tuple(coeffs), truncation_order)

    @classmethod
    def constant(cls, value: Rational, order: int) -> "LaurentSeries":
        return cls.from_coefficients([value], 0, order)

    def __getitem__(self, exponent: int) -> Fraction:
        """Coefficient of ``q^exponent``."""
        if exponent > self.truncation_order:
            raise IndexError(f"q^{exponent} lies beyond truncation order {self.truncation_order}")
        if exponent < self.min_exponent:
            return Fraction(0)
        return self.coefficients[exponent - self.min_exponent]

    def coefficient(self, exponent: int) -> Fraction:
        return self[exponent]

    def items(self) -> Iterable[tuple[int, Fraction]]:
        for i, c in enumerate(self.coefficients):
            yield self.min_exponent + i, c

    @property
    def valuation(self) -> int | None:
        """Exponent of the first nonzero coefficient (None for the zero series)."""
        for e, c in self.items():
            if c:
                return e
        return None

    def is_zero(self) -> bool:
        return self.valuation is None

    def normalized(self) -> "LaurentSeries":
        """Drop leading zero coefficients."""
        v = self.valuation
        if v is None or v == self.min_exponent:
            return self
        return LaurentSeries(v, self.coefficients[v - self.min_exponent:], self.truncation_order)

    def truncate(self, order: int) -> "LaurentSeries":
        if order > self.truncation_order:
            raise ValueError("cannot extend a truncated series")
        if order < self.min_exponent:
            return LaurentSeries(order + 1, (), order)
        return LaurentSeries(self.min_exponent,
                             self.coefficients[:order - self.min_exponent + 1], order)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by ``q^k``."""
        return LaurentSeries(self.min_exponent + k, self.coefficients, self.truncation_order + k)

    def __neg__(self):
        return LaurentSeries(self.min_exponent, tuple(-c for c in self.coefficients),
                             self.truncation_order)

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.constant(other, self.truncation_order)
        lo = min(self.min_exponent, other.min_exponent)
        hi = min(self.truncation_order, other.truncation_order)
        return LaurentSeries.from_coefficients(
            [self[e] + other[e] for e in range(lo, hi + 1)], lo, hi)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return mul(self, other)
        other = Fraction(other)
        return LaurentSeries(self.min_exponent, tuple(c * other for c in self.coefficients),
                             self.truncation_order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, LaurentSeries):
            return mul(self, invert(other))
        return self * (1 / Fraction(other))

    def __rtruediv__(self, other):
        return invert(self) * other

    def __pow__(self, k: int):
        return power(self, k)

    def __repr__(self):
        head = ", ".join(f"{c}" for c in self.coefficients[:6])
        more = ", ..." if len(self.coefficients) > 6 else ""
        return (f"LaurentSeries(q^{self.min_exponent}: [{head}{more}], "
                f"O(q^{self.truncation_order + 1}))")


def mul(f: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    """Schoolbook product.  The result is valid exactly as far as both factors allow."""
    f, g = f.normalized(), g.normalized()
    order = min(f.truncation_order + g.min_exponent, g.truncation_order + f.min_exponent)
    lo = f.min_exponent + g.min_exponent
    n = order - lo + 1
    if n <= 0:
        return LaurentSeries(order + 1, (), order)
    a, b = f.coefficients, g.coefficients
    out = []
    for k in range(n):
        s = 0
        for i in range(max(0, k - len(b) + 1), min(k, len(a) - 1) + 1):
            ai = a[i]
            if ai:
                s += ai * b[k - i]
        out.append(s)
    return LaurentSeries.from_coefficients(out, lo, order)


def invert(f: LaurentSeries) -> LaurentSeries:
    """Multiplicative inverse via the recursion a0*b_n = -sum_{k>=1} a_k b_{n-k}."""
    f = f.normalized()
    if f.is_zero() or not f.coefficients:
        raise ZeroDivisionError("series has no nonzero leading coefficient")
    v = f.min_exponent
    a = f.coefficients
    order = f.truncation_order - 2 * v
    n = order + v + 1
    inv0 = 1 / a[0]
    b = [inv0]
    for k in range(1, n):
        s = 0
        for i in range(1, min(k, len(a) - 1) + 1):
            ai = a[i]
            if ai:
                s += ai * b[k - i]
        b.append(-s * inv0)
    return LaurentSeries.from_coefficients(b, -v, order)


def power(f: LaurentSeries, k: int) -> LaurentSeries:
    if k < 0:
        return power(invert(f), -k)
    if k == 0:
        # 1 is exact; keep the relative precision a product of copies of f would have
        g = f.normalized()
        return LaurentSeries.constant(1, max(0, g.truncation_order - g.min_exponent))
    result = None
    base = f
    while k:
        if k & 1:
            result = base if result is None else mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def derive(f: LaurentSeries) -> LaurentSeries:
    """The operator q d/dq; multiply by 2*pi*i to get d/dz."""
    return LaurentSeries(f.min_exponent,
                         tuple(e * c for e, c in f.items()), f.truncation_order)


def _sigma(n: int, k: int) -> int:
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d ** k
            e = n // d
            if e != d:
                total += e ** k
        d += 1
    return total


@lru_cache(maxsize=None)
def eisenstein(weight: int, order: int = DEFAULT_ORDER) -> LaurentSeries:
    """E_weight = 1 + c_weight * sum sigma_{weight-1}(n) q^n, truncated at ``order``."""
    if weight not in _EISENSTEIN_FACTOR:
        raise ValueError(f"unsupported Eisenstein weight {weight}; expected 2, 4 or 6")
    if order < 0:
        raise ValueError("order must be nonnegative")
    c = _EISENSTEIN_FACTOR[weight]
    coeffs = [1] + [c * _sigma(n, weight - 1) for n in range(1, order + 1)]
    return LaurentSeries.from_coefficients(coeffs, 0, order)


@lru_cache(maxsize=None)
def delta_and_j(order: int = DEFAULT_ORDER) -> tuple[LaurentSeries, LaurentSeries]:
    """Discriminant (E4^3 - E6^2)/1728 and j = E4^3/Delta, both through q^order."""
    if order < 1:
        raise ValueError("order must be at least 1")
    e4 = eisenstein(4, order + 2)
    e6 = eisenstein(6, order + 2)
    e4cubed = power(e4, 3)
    delta = ((e4cubed - mul(e6, e6)) * Fraction(1, 1728)).normalized()
    j = mul(e4cubed, invert(delta))
    return delta.truncate(order), j.truncate(order)


# Canonical ASCII names of every form with an exact oracle.
TARGETS = (
    "1/E4", "1/E6", "E4/E6",
    "E2/E6", "E2/E4", "E2^2/E6",
    "E4^2/E6^2",
    "1/E6^2", "E4/E6^2", "1/E4^2", "E6/E4^2",
    "1/E4^3", "E6/E4^3",
    "E2E4^2/E6^2",
)

# numerator exponents (E2, E4, E6) and denominator exponents (E4, E6)
_TARGET_SHAPES = {
    "1/E4": ((0, 0, 0), (1, 0)),
    "1/E6": ((0, 0, 0), (0, 1)),
    "E4/E6": ((0, 1, 0), (0, 1)),
    "E2/E6": ((1, 0, 0), (0, 1)),
    "E2/E4": ((1, 0, 0), (1, 0)),
    "E2^2/E6": ((2, 0, 0), (0, 1)),
    "E4^2/E6^2": ((0, 2, 0), (0, 2)),
    "1/E6^2": ((0, 0, 0), (0, 2)),
    "E4/E6^2": ((0, 1, 0), (0, 2)),
    "1/E4^2": ((0, 0, 0), (2, 0)),
    "E6/E4^2": ((0, 0, 1), (2, 0)),
    "1/E4^3": ((0, 0, 0), (3, 0)),
    "E6/E4^3": ((0, 0, 1), (3, 0)),
    "E2E4^2/E6^2": ((1, 2, 0), (0, 2)),
}

_SUBSCRIPTS = str.maketrans("₀₁₂₃₄₅₆₇₈₉", "0123456789")
_SUPERSCRIPTS = {"²": "^2", "³": "^3", "⁴": "^4"}


def canonical_target(name: str) -> str:
    """Map user spellings (``1/E₄``, ``E₄²/E₆²``, ``e2*e4^2/e6^2``) onto a canonical name."""
    s = name.strip().translate(_SUBSCRIPTS)
    for sup, rep in _SUPERSCRIPTS.items():
        s = s.replace(sup, rep)
    s = re.sub(r"[\s*·]", "", s.replace("**", "^")).upper()
    for t in TARGETS:
        if s == t.upper():
            return t
    raise KeyError(f"unknown target {name!r}; known targets: {', '.join(TARGETS)}")


def oracle_coefficients(target: str, order: int = DEFAULT_ORDER) -> LaurentSeries:
    """Exact q-expansion of a named quotient of Eisenstein series through ``q^order``."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    return _oracle(canonical_target(target), order)


@lru_cache(maxsize=None)
def _oracle(target: str, order: int) -> LaurentSeries:
    (p2, p4, p6), (d4, d6) = _TARGET_SHAPES[target]
    result = LaurentSeries.constant(1, order)
    for weight, k in ((2, p2), (4, p4), (6, p6)):
        if k:
            result = mul(result, power(eisenstein(weight, order), k))
    for weight, k in ((4, d4), (6, d6)):
        if k:
            result = mul(result, power(invert(eisenstein(weight, order)), k))
    return result.truncate(order)
