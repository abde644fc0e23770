"""Two-variable zeta function as an exact rational function of (u, y).

Coordinates: u = q^(-s), y = q^t.  In them

    zeta_C(s, t) = u^(1-g) sum_{n=0}^{2g-2} u^n sum_{D in Pic(n)}
                       (y^l(D) - y^max(0, n+1-g)) / (y - 1)
                   + h u / ((1 - u)(1 - y u)),

and s -> t - s becomes u -> 1/(y u).  The Picard data enter through a
:class:`PicProfile`; for genus >= 2 it has to be supplied by the caller.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import sympy as sp

from .errors import InvalidProfile, SpecializationMismatch, UnsupportedGenus
from .zeta import LPoly, ZetaRat

u, y = sp.symbols("u y")


@dataclass(frozen=True)
class PicProfile:
    """Row n (0 <= n <= 2g-2) lists l(D) for the h classes D of degree n."""

    g: int
    h: int
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(tuple(sorted(r, reverse=True)) for r in self.table))
        validate_profile(self)


def validate_profile(P: PicProfile) -> None:
    g, h = P.g, P.h
    if g < 0 or h < 1:
        raise InvalidProfile("need g >= 0 and h >= 1")
    rows = max(0, 2 * g - 1)
    if len(P.table) != rows:
        raise InvalidProfile(f"expected {rows} rows for genus {g}, got {len(P.table)}")
    for n, row in enumerate(P.table):
        if len(row) != h:
            raise InvalidProfile(f"row {n} has {len(row)} entries, expected h = {h}")
        lo = max(0, n + 1 - g)
        if any(not lo <= l <= n + 1 for l in row):
            raise InvalidProfile(f"row {n} has l outside [{lo}, {n + 1}]")
    # Riemann-Roch: D -> K - D is a bijection Pic(n) -> Pic(2g-2-n) with
    # l(D) - l(K-D) = n + 1 - g
    for n, row in enumerate(P.table):
        mirrored = tuple(sorted((l - (n + 1 - g) for l in row), reverse=True))
        if mirrored != P.table[2 * g - 2 - n]:
            raise InvalidProfile(f"rows {n} and {2 * g - 2 - n} violate Riemann-Roch pairing")
    if g >= 1:
        if P.table[0].count(1) != 1 or any(l not in (0, 1) for l in P.table[0]):
            raise InvalidProfile("degree 0 needs exactly one class with l = 1 (the trivial class)")


def pic_profile(g: int, h: int, table: Sequence[Sequence[int]] | None = None) -> PicProfile:
    if table is not None:
        return PicProfile(g, h, tuple(tuple(r) for r in table))
    if g == 0:
        if h != 1:
            raise InvalidProfile("genus 0 has class number 1")
        return PicProfile(0, 1, ())
    if g == 1:
        return PicProfile(1, h, ((1,) + (0,) * (h - 1),))
    raise UnsupportedGenus("profiles for genus >= 2 must be supplied")


class BivarRat:
    """u^shift * num(u, y) / den(u, y), integer coefficients, reduced.

    Normalization: neither num nor den is divisible by u, gcd(num, den) = 1,
    and the leading coefficient of den (lex order, u > y) is positive.
    """

    __slots__ = ("num", "den", "shift")

    def __init__(self, expr):
        expr = sp.together(sp.sympify(expr))
        n, d = sp.fraction(sp.cancel(expr))
        num = sp.Poly(n, u, y, domain="ZZ")
        den = sp.Poly(d, u, y, domain="ZZ")
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        shift = 0
        for P, sign in ((num, 1), (den, -1)):
            if P.is_zero:
                continue
            k = min(m[0] for m in P.monoms())
            shift += sign * k
        num = sp.Poly(sp.expand(num.as_expr() / u ** _umin(num)), u, y, domain="ZZ") if not num.is_zero else num
        den = sp.Poly(sp.expand(den.as_expr() / u ** _umin(den)), u, y, domain="ZZ")
        g = sp.gcd(num, den)
        if not g.is_one:
            num, den = sp.div(num, g)[0], sp.div(den, g)[0]
        if den.LC() < 0:
            num, den = -num, -den
        if num.is_zero:
            shift = 0
        self.num, self.den, self.shift = num, den, shift

    def as_expr(self):
        return u**self.shift * self.num.as_expr() / self.den.as_expr()

    def __eq__(self, other):
        if not isinstance(other, BivarRat):
            return NotImplemented
        return (self.shift, self.num, self.den) == (other.shift, other.num, other.den)

    def __hash__(self):
        return hash((self.shift, self.num.as_expr(), self.den.as_expr()))

    def __repr__(self):
        return f"BivarRat({sp.sstr(self.as_expr())})"

    def subs(self, mapping) -> "BivarRat":
        return BivarRat(self.as_expr().subs(mapping, simultaneous=True))


def _umin(P: sp.Poly) -> int:
    return min(m[0] for m in P.monoms())


def zeta_p1_twovar() -> BivarRat:
    return BivarRat(u / ((1 - u) * (1 - y * u)))


def twovar_zeta(P: PicProfile) -> BivarRat:
    g, h = P.g, P.h
    total = h * u / ((1 - u) * (1 - y * u))
    for n, row in enumerate(P.table):
        base = max(0, n + 1 - g)
        row_sum = sum(sp.cancel((y**l - y**base) / (y - 1)) for l in row)
        total += u ** (n + 1 - g) * row_sum
    return BivarRat(total)


def twovar_functional_check(Z: BivarRat) -> bool:
    """zeta(s, t) = zeta(t - s, t), i.e. invariance under u -> 1/(y u)."""
    return Z.subs({u: 1 / (y * u)}) == Z


def specialize_t1(Z: BivarRat, q: int) -> BivarRat:
    """Substitute y = q (t = 1); a rational function of u alone."""
    return Z.subs({y: q})


def zeta_rat_expr(Zr: ZetaRat):
    L = Zr.L
    Lu = sum(c * u**i for i, c in enumerate(L.coeffs))
    return u ** (1 - L.g) * Lu / ((1 - u) * (1 - L.q * u))


def specialization_check(P: PicProfile, L: LPoly) -> bool:
    """Raise unless zeta(s, 1) from the profile equals zeta_C(s) from L."""
    lhs = specialize_t1(twovar_zeta(P), L.q)
    rhs = BivarRat(zeta_rat_expr(ZetaRat(L)))
    if lhs != rhs:
        raise SpecializationMismatch(f"{lhs} != {rhs}")
    return True


def profile_g2(h: int, n1: int) -> PicProfile:
    """Genus-2 profile forced by Riemann-Roch from h and N(1).

    Degree-1 classes with l = 1 are exactly the rational points (distinct
    points are inequivalent when g >= 1).
    """
    if not 0 <= n1 <= h:
        raise InvalidProfile("need 0 <= N(1) <= h")
    return PicProfile(2, h, ((1,) + (0,) * (h - 1), (1,) * n1 + (0,) * (h - n1), (2,) + (1,) * (h - 1)))
