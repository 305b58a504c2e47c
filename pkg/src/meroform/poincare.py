"""Two-variable Poincare series H_{m,l}^{(r)}(Z, z) evaluated as lattice sums.

Each coset of Gamma_infty in SL2(Z) is a coprime pair (c, d); (c, d) and
(-c, -d) are different cosets and both are summed.  The sum runs over the
square box max(|c|, |d|) <= box_bound, accumulated shell by shell so the
size of the outermost shell is available as a convergence diagnostic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath

from .ideals import bezout_pair
from .numerics import GUARD_BITS, as_complex, e2hat_at, eval_form


class NearPoleError(ValueError):
    """Some lattice term sits on (or numerically next to) a pole."""


@dataclass(frozen=True)
class LatticeSumConfig:
    box_bound: int = 60
    prec: int = 192
    convergence_threshold: float = 1e-20

    def __post_init__(self):
        if self.box_bound < 2:
            raise ValueError("box_bound must be at least 2")
        if not self.convergence_threshold > 0:
            raise ValueError("convergence_threshold must be positive")
        if self.prec < 16:
            raise ValueError("prec must be at least 16 bits")


@dataclass(frozen=True)
class LatticeValue:
    value: object
    last_shell: object        # |contribution of the outermost shell|
    box_bound: int
    prec: int

    @property
    def converged_hint(self):
        return self.last_shell


def _check_spec(m: int, l: int, r: int):
    if m % 2 or m < 4 + 2 * l or l < 0:
        raise ValueError(f"need even m >= 4 + 2l; got m={m}, l={l}")
    if r not in (0, 1, 2):
        raise ValueError("r must be 0, 1 or 2")


def shell_pairs(s: int):
    """Coprime (c, d) with max(|c|, |d|) == s, in a fixed order."""
    if s == 0:
        return []
    out = []
    for c in range(-s, s + 1):
        if abs(c) == s:
            ds = range(-s, s + 1)
        else:
            ds = (-s, s)
        for d in ds:
            if gcd(c, d) == 1:
                out.append((c, d))
    return out


def _translate(Z):
    # H is 1-periodic in Z; centring Re Z keeps the square box symmetric about the
    # smallest |cZ + d| and makes the truncation independent of the translate
    return Z - mpmath.nint(Z.real)


def lattice_sums(specs, Z, z, cfg: LatticeSumConfig) -> dict:
    """Evaluate several H_{m,l}^{(r)}(Z, z) in one pass over the lattice.

    ``specs`` is an iterable of (m, l, r); the result maps each spec to a
    :class:`LatticeValue`.
    """
    specs = sorted(set(tuple(s) for s in specs))
    for s in specs:
        _check_spec(*s)
    wp = cfg.prec + GUARD_BITS
    with mpmath.workprec(wp):
        Z, z = _translate(as_complex(Z)), as_complex(z)
        if Z.imag <= 0 or z.imag <= 0:
            raise ValueError("both points must lie in the upper half-plane")
        twopii = 2j * mpmath.pi
        guard = mpmath.ldexp(1, -cfg.prec // 2)
        Z2 = Z.imag
        ms = sorted({m for m, _, _ in specs})
        ls = sorted({l for _, l, _ in specs})
        totals = {s: mpmath.mpc(0) for s in specs}
        last = {s: mpmath.mpf(0) for s in specs}
        for shell in range(1, cfg.box_bound + 1):
            part = {s: mpmath.mpc(0) for s in specs}
            for c, d in shell_pairs(shell):
                a, b = bezout_pair(c, d)
                g = c * Z + d
                MZ = (a * Z + b) / g
                e = mpmath.exp(twopii * (z - MZ))
                den = 1 - e
                if abs(den) < guard:
                    raise NearPoleError(
                        f"term (c, d) = ({c}, {d}) has |1 - e^(2 pi i (z - MZ))| = "
                        f"{mpmath.nstr(abs(den), 3)} below 2^-{cfg.prec // 2}; z is (nearly) "
                        f"SL2(Z)-equivalent to Z")
                D0 = 1 / den
                kern = {0: D0}
                if any(r >= 1 for _, _, r in specs):
                    kern[1] = twopii * e * D0 * D0
                    kern[2] = twopii ** 2 * e * (1 + e) * D0 ** 3
                ginv2 = 1 / (g * g)
                gpow = {m: ginv2 ** (m // 2) for m in ms}
                lam = (g * g.conjugate()).real / Z2   # 1/Im(MZ)
                lpow = {l: lam ** l for l in ls}
                for s in specs:
                    m, l, r = s
                    part[s] += lpow[l] * gpow[m] * kern[r]
            for s in specs:
                totals[s] += part[s]
                last[s] = abs(part[s])
        return {s: LatticeValue(+(twopii * totals[s]), +(2 * mpmath.pi * last[s]),
                                cfg.box_bound, cfg.prec) for s in specs}


def H_direct(m: int, l: int, r: int, Z, z, cfg: LatticeSumConfig | None = None):
    """H_{m,l}^{(r)}(Z, z) by direct lattice summation."""
    cfg = cfg or LatticeSumConfig()
    return lattice_sums([(m, l, r)], Z, z, cfg)[(m, l, r)].value


def F_script_direct(m: int, l: int, r: int, Z, z, cfg: LatticeSumConfig | None = None):
    """sum_j binom(l, j) (3/pi)^(l-j) E2hat(Z)^j H_{m-2j, l-j}^{(r)}(Z, z)."""
    cfg = cfg or LatticeSumConfig()
    _check_spec(m, l, r)
    specs = [(m - 2 * j, l - j, r) for j in range(l + 1)]
    sums = lattice_sums(specs, Z, z, cfg)
    e2h = e2hat_at(Z, cfg.prec) if l else 0
    with mpmath.workprec(cfg.prec + GUARD_BITS):
        c3 = 3 / mpmath.pi
        total = mpmath.mpc(0)
        for j in range(l + 1):
            total += math.comb(l, j) * c3 ** (l - j) * e2h ** j * sums[specs[j]].value
        return +total


def fourier_H(m: int, l: int, r: int, Z, z, box_bound: int, prec: int = 192,
              n_max: int | None = None):
    """Truncated Fourier side 2 pi i sum_n sum_{(c,d)} (lam/Z2)^l (2 pi i n)^r B_{m,c,d}(Z, n) q^n.

    The (c, d) range matches the direct sum with the same box, so the two
    agree up to the n-truncation, which is chosen from max Im(MZ) < y.
    """
    _check_spec(m, l, r)
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp):
        Z, z = _translate(as_complex(Z)), as_complex(z)
        y, Z2 = z.imag, Z.imag
        twopi = 2 * mpmath.pi
        Z1, absZ2 = Z.real, abs(Z) ** 2
        pairs = [p for s in range(1, box_bound + 1) for p in shell_pairs(s)]
        # the largest Im(MZ) over all cosets is reached by the lattice point nearest 0
        top = max(Z2 / abs(c * Z + d) ** 2 for c, d in pairs)
        if top >= y:
            raise ValueError("Fourier expansion needs y > Im(MZ) for every M")
        if n_max is None:
            n_max = math.ceil((wp + 8 * r + 16) * math.log(2) / (2 * math.pi * float(y - top))) + 4
        weights = []
        bases = []
        for c, d in pairs:
            a, b = bezout_pair(c, d)
            g = c * Z + d
            lam = abs(g) ** 2
            P = a * c * absZ2 + b * d + Z1 * (a * d + b * c)
            weights.append((lam / Z2) ** l / g ** m)
            # e^{2 pi n Z2/lam} e(-n P/lam) = u^n
            bases.append(mpmath.exp(twopi * Z2 / lam) * mpmath.expj(-twopi * P / lam))
        q = mpmath.expj(twopi * z)
        total = mpmath.mpc(0)
        powers = [mpmath.mpc(1)] * len(pairs)
        qn = mpmath.mpc(1)
        for n in range(n_max + 1):
            coeff = mpmath.fsum(w * p for w, p in zip(weights, powers))
            if r == 0 or n:
                total += (2j * mpmath.pi * n) ** r * coeff * qn
            powers = [p * u for p, u in zip(powers, bases)]
            qn *= q
        return +(2j * mpmath.pi * total)


# --- identity catalog ----------------------------------------------------------------

def _cor1(m):
    def check(Z, z, cfg):
        s = lattice_sums([(m, 1, 0), (m, 0, 0), (m - 2, 0, 0)], Z, z, cfg)
        e2z = eval_form("E2", z, cfg.prec)
        e2h = e2hat_at(Z, cfg.prec)
        with mpmath.workprec(cfg.prec + GUARD_BITS):
            k = mpmath.pi / 3
            lhs = s[(m, 1, 0)].value
            rhs = k * e2z * s[(m, 0, 0)].value - k * e2h * s[(m - 2, 0, 0)].value
            return +abs(lhs - rhs)
    return check


def _cor1b(m):
    def check(Z, z, cfg):
        s = lattice_sums([(m, 2, 0), (m, 0, 0), (m - 2, 1, 0), (m - 4, 0, 0)], Z, z, cfg)
        e2z = eval_form("E2", z, cfg.prec)
        e2h = e2hat_at(Z, cfg.prec)
        with mpmath.workprec(cfg.prec + GUARD_BITS):
            k = mpmath.pi / 3
            lhs = s[(m, 2, 0)].value
            rhs = (k ** 2 * e2z ** 2 * s[(m, 0, 0)].value
                   - 2 * k * e2h * s[(m - 2, 1, 0)].value
                   - k ** 2 * e2h ** 2 * s[(m - 4, 0, 0)].value)
            return +abs(lhs - rhs)
    return check


def _cor2(m):
    def check(Z, z, cfg):
        s = lattice_sums([(m, 0, 1), (m, 1, 1), (m - 2, 0, 1), (m, 0, 0)], Z, z, cfg)
        e2z, e4z = eval_form("E2", z, cfg.prec), eval_form("E4", z, cfg.prec)
        e2h = e2hat_at(Z, cfg.prec)
        with mpmath.workprec(cfg.prec + GUARD_BITS):
            pi = mpmath.pi
            lhs = e2z * s[(m, 0, 1)].value
            rhs = (3 / pi * s[(m, 1, 1)].value + e2h * s[(m - 2, 0, 1)].value
                   - 1j * pi / 6 * (e2z ** 2 - e4z) * s[(m, 0, 0)].value)
            return +abs(lhs - rhs)
    return check


RESIDUE_STEP = mpmath.mpf("1e-14")


def _residue(which, m, expected):
    # (Z - z) H_m(Z, z) near Z = z, or (z - Z) H_m(Z, z) near z = Z
    def check(Z, z, cfg):
        with mpmath.workprec(cfg.prec + GUARD_BITS):
            h = RESIDUE_STEP * mpmath.expjpi(mpmath.mpf(1) / 7)
            base = as_complex(z if which == "Z" else Z)
            a, b = (base + h, base) if which == "Z" else (base, base + h)
        v = lattice_sums([(m, 0, 0)], a, b, cfg)[(m, 0, 0)].value
        with mpmath.workprec(cfg.prec + GUARD_BITS):
            return +abs(h * v - expected)
    return check


IDENTITIES = {}
for _m in (6, 8, 10, 14):
    IDENTITIES[f"cor_htildegen_1_m{_m}"] = _cor1(_m)
    IDENTITIES[f"cor_htildegen_2_m{_m}"] = _cor2(_m)
for _m in (8, 10, 14):
    IDENTITIES[f"cor_htildegen_1b_m{_m}"] = _cor1b(_m)
IDENTITIES["residue_H6"] = _residue("Z", 6, 2)
IDENTITIES["zresidue_H6"] = _residue("z", 6, -2)

# generic (Z, z) pairs: not elliptic, not SL2-related, y above the orbit of Z
SAMPLE_POINTS = (
    ("1/5,6/5", "1/7,2"),
    ("-1/3,11/10", "2/5,3/2"),
    ("2/7,7/5", "-1/4,9/5"),
)


def parse_point(text):
    """'x,y' (rational or decimal parts), 'i', 'rho', or a complex number."""
    if isinstance(text, str):
        s = text.strip().lower().replace(" ", "")
        if s == "i":
            return mpmath.mpc(0, 1)
        if s in ("rho", "ρ"):
            return mpmath.expjpi(mpmath.mpf(1) / 3)
        re, im = s.split(",")
        return as_complex((Fraction(re), Fraction(im)))
    return as_complex(text)


def identity_residual(name: str, sample_points=SAMPLE_POINTS,
                      cfg: LatticeSumConfig | None = None) -> list:
    """|LHS - RHS| of a catalog identity at each (Z, z) sample pair."""
    if name not in IDENTITIES:
        raise KeyError(f"unknown identity {name!r}; catalog: {', '.join(sorted(IDENTITIES))}")
    sample_points = list(sample_points)
    if not sample_points:
        raise ValueError("no sample points given")
    cfg = cfg or LatticeSumConfig()
    out = []
    for Z, z in sample_points:
        with mpmath.workprec(cfg.prec + GUARD_BITS):
            Zc, zc = parse_point(Z), parse_point(z)
        out.append(IDENTITIES[name](Zc, zc, cfg))
    return out
