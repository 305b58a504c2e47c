"""Primitive ideals of Z[i] and Z[rho], rho = exp(i*pi/3).

A primitive ideal is generated by ``c*z + d`` with ``gcd(c, d) = 1``, where
``z`` is the base point i or rho.  Generators differing by a unit give the
same ideal; we store the unique generator whose argument lies in
``[0, pi/omega)``, which for both fields is the one with ``c >= 0, d > 0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import mpmath


@dataclass(frozen=True)
class FieldTag:
    """Base point i or rho together with its exact real/imaginary data.

    The imaginary part is irrational for rho, so only its square is stored.
    """

    name: str
    real_part: Fraction
    imag_part_squared: Fraction
    omega: int

    @property
    def abs_squared(self) -> Fraction:
        return self.real_part ** 2 + self.imag_part_squared

    @property
    def trace(self) -> int:
        return int(2 * self.real_part)

    @property
    def units(self) -> int:
        return 2 * self.omega

    def norm(self, c: int, d: int) -> int:
        """|c z + d|^2 as an exact integer."""
        return int(c * c * self.abs_squared + c * d * self.trace + d * d)

    def imag_part(self):
        """Imaginary part at the ambient mpmath precision."""
        return mpmath.sqrt(mpmath.mpf(self.imag_part_squared.numerator)
                           / self.imag_part_squared.denominator)

    def point(self):
        return mpmath.mpc(mpmath.mpf(self.real_part.numerator) / self.real_part.denominator,
                          self.imag_part())

    def generator_arg(self, c: int, d: int):
        """arg(c z + d) via two-argument arctangent."""
        x = mpmath.mpf(d) + mpmath.mpf(c) * self.real_part.numerator / self.real_part.denominator
        return mpmath.atan2(c * self.imag_part(), x)

    def unit_multiply(self, c: int, d: int) -> tuple[int, int]:
        """Coordinates of the generator times the unit of argument pi/omega."""
        if self.name == "i":
            return d, -c          # i*(c i + d) = d i - c
        return c + d, -c          # rho*(c rho + d) = (c + d) rho - c

    def __str__(self):
        return self.name


GAUSSIAN = FieldTag("i", Fraction(0), Fraction(1), 2)
EISENSTEIN = FieldTag("rho", Fraction(1, 2), Fraction(3, 4), 3)

_FIELDS = {"i": GAUSSIAN, "rho": EISENSTEIN, "ρ": EISENSTEIN}


def field_from_name(name: str) -> FieldTag:
    try:
        return _FIELDS[name]
    except KeyError:
        raise ValueError(f"unknown base point {name!r}; expected 'i' or 'rho'") from None


def bezout_pair(c: int, d: int) -> tuple[int, int]:
    """Integers (a, b) with a*d - b*c = 1, normalized so that 0 <= a < |c| when c != 0."""
    if gcd(c, d) != 1:
        raise ValueError(f"({c}, {d}) is not a coprime pair")
    if c == 0:
        return d, 0
    # extended Euclid on (d, c): s*d + t*c = 1
    old_r, r = d, c
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    a, b = old_s, -old_t
    # (a, b) -> (a - t*c, b - t*d) keeps a*d - b*c; pick t so 0 <= a < |c|
    t = a // c if c > 0 else -(a // -c)
    return a - t * c, b - t * d


@dataclass(frozen=True, order=True)
class PrimitiveIdeal:
    norm: int
    c: int
    d: int
    field: FieldTag = dc_field(compare=False)
    bezout: tuple = dc_field(compare=False)

    def generator(self):
        return self.c * self.field.point() + self.d

    def __repr__(self):
        return f"PrimitiveIdeal({self.field.name}: {self.c}z+{self.d}, N={self.norm})"


def _is_canonical(c: int, d: int) -> bool:
    return c >= 0 and d > 0


def canonical_rep(fld: FieldTag, c: int, d: int) -> PrimitiveIdeal:
    """Unit-orbit representative of (c z + d) with argument in [0, pi/omega)."""
    if gcd(c, d) != 1:
        raise ValueError(f"({c}, {d}) is not a coprime pair")
    for _ in range(fld.units):
        if _is_canonical(c, d):
            return PrimitiveIdeal(fld.norm(c, d), c, d, fld, bezout_pair(c, d))
        c, d = fld.unit_multiply(c, d)
    raise AssertionError("unit orbit without canonical member")


def conjugate_ideal(ideal: PrimitiveIdeal) -> PrimitiveIdeal:
    """Canonical generator of the complex-conjugate ideal."""
    fld = ideal.field
    # conj(z) = trace - z
    return canonical_rep(fld, -ideal.c, ideal.d + ideal.c * fld.trace)


def enumerate_primitive_ideals(fld: FieldTag, norm_bound: int) -> list[PrimitiveIdeal]:
    """All primitive ideals of norm at most ``norm_bound``, sorted by (norm, c, d)."""
    if norm_bound < 1:
        raise ValueError("norm_bound must be at least 1")
    return list(_enumerate(fld.name, norm_bound))


@lru_cache(maxsize=16)
def _enumerate(name: str, norm_bound: int) -> tuple[PrimitiveIdeal, ...]:
    fld = field_from_name(name)
    box = isqrt(norm_bound) + 1
    out = []
    for c in range(0, box + 1):
        for d in range(1, box + 1):
            n = fld.norm(c, d)
            if n <= norm_bound and gcd(c, d) == 1:
                out.append(PrimitiveIdeal(n, c, d, fld, bezout_pair(c, d)))
    out.sort()
    return tuple(out)
