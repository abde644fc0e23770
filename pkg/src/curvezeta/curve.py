"""Curve models over F_q, point counts, Frobenius orbits and place tables.

Three model kinds plus the projective line are supported:

* ``line``: P^1, counted as q^n + 1;
* ``elliptic``: y^2 = x^3 + a x + b (char != 2, 3), one point at infinity;
* ``hyperelliptic``: y^2 = f(x) with f squarefree of odd degree 2g+1
  (char != 2), one point at infinity;
* ``plane``: a homogeneous F(X, Y, Z) of degree d defining a smooth curve
  in P^2 of genus (d-1)(d-2)/2.

Field elements are integer codes; counting over F_{q^n} works in
:func:`curvezeta.ff.extension` with the coefficients embedded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import EnumerationTooLarge, InconsistentCounts, SingularCurve, UnsupportedModel
from .ff import GF, extension
from .polyarith import MultiPoly, UniPoly, mobius, poly_gcd, roots

#: refuse to enumerate F_{q^n} beyond this many elements unless overridden
DEFAULT_GUARD = 2**26

KINDS = ("line", "elliptic", "hyperelliptic", "plane")


@dataclass(frozen=True, eq=False)
class CurveModel:
    """An (unchecked) curve model; use the constructors below to validate.

    ``data`` depends on ``kind``: ``()`` for the line, ``(a, b)`` codes for
    elliptic curves, the ascending code tuple of ``f`` for hyperelliptic
    curves and a 3-variable homogeneous :class:`MultiPoly` for plane curves.
    """

    kind: str
    base: GF
    genus: int
    data: object = ()
    name: str = ""

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def poly(self) -> tuple[int, ...]:
        """Right-hand side f(x) of a y^2 = f(x) model, ascending codes."""
        if self.kind == "elliptic":
            a, b = self.data
            return (b, a, 0, 1)
        if self.kind == "hyperelliptic":
            return tuple(self.data)
        raise UnsupportedModel(f"{self.kind} curves have no y^2 = f(x) form")

    def describe(self) -> str:
        F = self.base
        if self.kind == "line":
            return f"P^1 over {F}"
        if self.kind in ("elliptic", "hyperelliptic"):
            return f"y^2 = {UniPoly(F, self.poly)!r} over {F}".replace("T", "x")
        terms = []
        for e, c in sorted(self.data.terms.items(), reverse=True):
            mono = "*".join(f"{v}^{k}" if k > 1 else v for v, k in zip("XYZ", e) if k)
            terms.append((f"{c}*" if c != 1 else "") + (mono or "1"))
        return " + ".join(terms) + f" = 0 over {F}"


# -- constructors --------------------------------------------------------------

def projective_line(F: GF, name: str = "") -> CurveModel:
    return CurveModel("line", F, 0, (), name or f"P1_F{F.q}")


def elliptic_curve(F: GF, a: int, b: int, name: str = "", check: bool = True) -> CurveModel:
    if F.p in (2, 3):
        raise UnsupportedModel("short Weierstrass form needs characteristic > 3")
    C = CurveModel("elliptic", F, 1, (a, b), name)
    if check and not smoothness_check(C):
        raise SingularCurve("4a^3 + 27b^2 = 0")
    return C


def hyperelliptic_curve(F: GF, f: Sequence[int], name: str = "", check: bool = True) -> CurveModel:
    f = tuple(UniPoly(F, f).coeffs)
    if F.p == 2:
        raise UnsupportedModel("y^2 = f(x) models need odd characteristic")
    d = len(f) - 1
    if d < 3 or d % 2 == 0:
        raise UnsupportedModel("deg f must be odd and at least 3")
    C = CurveModel("hyperelliptic", F, (d - 1) // 2, f, name)
    if check and not smoothness_check(C):
        raise SingularCurve("f is not squarefree")
    return C


def plane_curve(F: GF, poly: MultiPoly, name: str = "", check: bool = True) -> CurveModel:
    if poly.nvars != 3 or not poly.is_homogeneous() or poly.total_degree < 1:
        raise UnsupportedModel("plane curves need a nonzero homogeneous F(X, Y, Z)")
    d = poly.total_degree
    C = CurveModel("plane", F, (d - 1) * (d - 2) // 2, poly, name)
    if check and not smoothness_check(C):
        raise SingularCurve("F and its partials have a common zero over the algebraic closure")
    return C


# -- smoothness ---------------------------------------------------------------

def smoothness_check(C: CurveModel) -> bool:
    F = C.base
    if C.kind == "line":
        return True
    if C.kind == "elliptic":
        a, b = C.data
        disc = F.add(F.mul(4 % F.p, F.pow(a, 3)), F.mul(27 % F.p, F.pow(b, 2)))
        return disc != 0
    if C.kind == "hyperelliptic":
        f = UniPoly(F, C.data)
        return poly_gcd(f, f.derivative()).is_one()
    if C.kind == "plane":
        return _plane_smooth(C.data)
    raise UnsupportedModel(C.kind)


def _plane_smooth(P: MultiPoly) -> bool:
    """No common zero of F, F_X, F_Y, F_Z in any affine chart over F-bar.

    Each chart's ideal is tested with a Groebner basis over Z/p; extension
    field coefficients are written in a generator theta whose minimal
    polynomial joins the ideal.
    """
    import sympy as sp

    F = P.field
    X, Y, Z, th = sp.symbols("X Y Z theta")
    gens = (X, Y, Z)

    def coeff_expr(c: int):
        return sum(int(d) * th**i for i, d in enumerate(F.digits(c)))

    def to_expr(M: MultiPoly):
        return sum(coeff_expr(c) * X**e[0] * Y**e[1] * Z**e[2] for e, c in M.terms.items())

    polys = [to_expr(P)] + [to_expr(P.partial(i)) for i in range(3)]
    extra = []
    if F.f > 1:
        extra = [sum(int(c) * th**i for i, c in enumerate(F.modulus))]
    for k in range(3):
        chart = [sp.expand(sp.sympify(e).subs(gens[k], 1)) for e in polys]
        chart = [e for e in chart if e != 0] + extra
        vars_ = [g for g in gens if g != gens[k]] + ([th] if F.f > 1 else [])
        if any(e.is_number and e % F.p != 0 for e in chart):
            continue
        G = sp.groebner(chart, *vars_, modulus=F.p, order="grevlex")
        if list(G.exprs) != [1]:
            return False
    return True


# -- point enumeration ----------------------------------------------------------

def _field_over(C: CurveModel, n: int) -> GF:
    return C.base if n == 1 else extension(C.base, n)


def _guard(C: CurveModel, n: int, guard: int | None):
    limit = DEFAULT_GUARD if guard is None else guard
    if C.q**n > limit:
        raise EnumerationTooLarge(f"q^n = {C.q}^{n} exceeds the enumeration guard {limit}")


def _embedded(C: CurveModel, E: GF, codes: Iterable[int]) -> list[int]:
    return [E.embed(c) for c in codes] if E is not C.base else list(codes)


def _plane_fiber_coeffs(C: CurveModel, E: GF, xs: np.ndarray, chart: str):
    """Arrays c_j(x) with F|chart = sum_j c_j(x) y^j, evaluated at every x."""
    P: MultiPoly = C.data
    deg = P.total_degree
    coeffs = [np.zeros_like(xs) for _ in range(deg + 1)]
    for (i, j, k), c in P.terms.items():
        if chart == "Z" :  # (x : y : 1)
            xe, ye = i, j
        else:  # (x : 1 : 0), only Z-free terms survive
            if k:
                continue
            xe, ye = i, 0
        term = E.vmul(E.vpow(xs, xe), np.full_like(xs, E.embed(c)))
        coeffs[ye] = E.vadd(coeffs[ye], term)
    return coeffs


def _plane_affine_points(C: CurveModel, E: GF) -> list[tuple[int, int]]:
    xs = E.elements()
    coeffs = _plane_fiber_coeffs(C, E, xs, "Z")
    pts = []
    if E.q <= 4096:
        for y in range(E.q):
            acc = np.zeros_like(xs)
            ypow = 1
            for cj in coeffs:
                acc = E.vadd(acc, E.vmul(cj, np.full_like(xs, ypow)))
                ypow = E.mul(ypow, y)
            for x in np.nonzero(acc == 0)[0]:
                pts.append((int(x), y))
    else:
        rows = np.stack(coeffs, axis=1)
        for x in range(E.q):
            g = UniPoly(E, rows[x].tolist())
            if g.is_zero():
                pts.extend((x, y) for y in range(E.q))
            else:
                pts.extend((x, y) for y in roots(g))
    pts.sort()
    return pts


def _plane_infinite_points(C: CurveModel, E: GF) -> list[tuple[int, int, int]]:
    P: MultiPoly = C.data
    pts = []
    for x in range(E.q):
        val = 0
        for (i, j, k), c in P.terms.items():
            if k == 0:
                val = E.add(val, E.mul(E.embed(c), E.pow(x, i)))
        if val == 0:
            pts.append((x, 1, 0))
    if P.terms.get((P.total_degree, 0, 0), 0) == 0:
        pts.append((1, 0, 0))
    return pts


def points(C: CurveModel, n: int = 1, guard: int | None = None) -> list[tuple]:
    """All points of C(F_{q^n}); affine ones as coordinate tuples, ``("inf",)`` marks
    the unique point at infinity of y^2 = f(x) models and P^1."""
    _guard(C, n, guard)
    E = _field_over(C, n)
    if C.kind == "line":
        return [(x,) for x in range(E.q)] + [("inf",)]
    if C.kind in ("elliptic", "hyperelliptic"):
        xs = E.elements()
        fx = E.veval(_embedded(C, E, C.poly), xs)
        chi = E.vquadratic_character(fx)
        ys = E.vsqrt(fx)
        out = []
        for x in np.nonzero(chi >= 0)[0]:
            y = int(ys[x])
            out.append((int(x), y))
            if chi[x] == 1:
                out.append((int(x), E.neg(y)))
        out.sort()
        return out + [("inf",)]
    if C.kind == "plane":
        aff = [(x, y, 1) for x, y in _plane_affine_points(C, E)]
        return aff + _plane_infinite_points(C, E)
    raise UnsupportedModel(C.kind)


def count_points(C: CurveModel, n: int = 1, guard: int | None = None) -> int:
    """N_C(n) = #C(F_{q^n}) by enumeration of the affine coordinate."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if C.kind == "line":
        return C.q**n + 1
    if C.kind == "plane":
        return len(points(C, n, guard))
    _guard(C, n, guard)
    E = _field_over(C, n)
    fx = E.veval(_embedded(C, E, C.poly), E.elements())
    return E.q + int(E.vquadratic_character(fx).sum()) + 1


def count_series(C: CurveModel, nmax: int, guard: int | None = None) -> list[int]:
    return [count_points(C, n, guard) for n in range(1, nmax + 1)]


# -- Frobenius ----------------------------------------------------------------

def frobenius(C: CurveModel, pt: tuple, n: int) -> tuple:
    """phi_q applied coordinatewise to a point of C(F_{q^n})."""
    if pt == ("inf",):
        return pt
    E = _field_over(C, n)
    return tuple(E.pow(c, C.q) for c in pt)


def on_curve(C: CurveModel, pt: tuple, n: int) -> bool:
    E = _field_over(C, n)
    if pt == ("inf",):
        return C.kind != "plane"
    if C.kind == "line":
        return len(pt) == 1
    if C.kind == "plane":
        P: MultiPoly = C.data
        val = 0
        for e, c in P.terms.items():
            t = E.embed(c)
            for v, k in zip(pt, e):
                t = E.mul(t, E.pow(v, k))
            val = E.add(val, t)
        return val == 0 and any(pt)
    x, y = pt
    fx = UniPoly(E, _embedded(C, E, C.poly))(x)
    return E.mul(y, y) == fx


def frobenius_orbits(C: CurveModel, n: int, guard: int | None = None) -> list[list[tuple]]:
    """Partition of C(F_{q^n}) into phi_q-orbits, each listed from its least point."""
    pts = points(C, n, guard)
    seen: set[tuple] = set()
    orbits = []
    for pt in pts:
        if pt in seen:
            continue
        orbit = [pt]
        seen.add(pt)
        nxt = frobenius(C, pt, n)
        while nxt != pt:
            orbit.append(nxt)
            seen.add(nxt)
            nxt = frobenius(C, nxt, n)
        orbits.append(orbit)
    return orbits


def orbit_histogram(orbits: Sequence[Sequence[tuple]]) -> dict[int, int]:
    hist: dict[int, int] = {}
    for o in orbits:
        hist[len(o)] = hist.get(len(o), 0) + 1
    return dict(sorted(hist.items()))


# -- places ---------------------------------------------------------------------

@dataclass(frozen=True)
class PlaceTable:
    """Number ``a[d]`` of places of degree d, for 1 <= d <= B."""

    B: int
    a: dict[int, int] = dc_field(default_factory=dict)

    def count(self, n: int) -> int:
        """N(n) = sum over d | n of d * a_d."""
        if not 1 <= n <= self.B:
            raise ValueError(f"n must lie in 1..{self.B}")
        return sum(d * self.a[d] for d in range(1, n + 1) if n % d == 0)

    def counts(self) -> list[int]:
        return [self.count(n) for n in range(1, self.B + 1)]


def place_table_from_counts(counts: Sequence[int]) -> PlaceTable:
    """Moebius inversion a_d = (1/d) sum_{e|d} mu(d/e) N(e)."""
    a = {}
    for d in range(1, len(counts) + 1):
        s = sum(mobius(d // e) * counts[e - 1] for e in range(1, d + 1) if d % e == 0)
        if s % d or s < 0:
            raise InconsistentCounts(f"a_{d} = {s}/{d} is not a nonnegative integer")
        a[d] = s // d
    return PlaceTable(len(counts), a)


def place_table(C: CurveModel, B: int, counts: Sequence[int] | None = None,
                guard: int | None = None) -> PlaceTable:
    if counts is None:
        counts = count_series(C, B, guard)
    if len(counts) < B:
        raise ValueError(f"need N(1..{B}), got {len(counts)} counts")
    return place_table_from_counts(list(counts)[:B])


def place_splitting(deg_v: int, n: int) -> tuple[int, int]:
    """A place of degree deg_v splits over F_{q^n} into d places of degree deg_v/d."""
    if deg_v < 1 or n < 1:
        raise ValueError("degrees must be positive")
    d = math.gcd(n, deg_v)
    return d, deg_v // d


def base_change_places(T: PlaceTable, n: int) -> PlaceTable:
    """Place table over F_{q^n} obtained by splitting every place of T."""
    B = T.B // n
    a = {e: 0 for e in range(1, B + 1)}
    for d, ad in T.a.items():
        count, deg_w = place_splitting(d, n)
        if deg_w <= B:
            a[deg_w] += count * ad
    return PlaceTable(B, a)


def degree_one_exists(T: PlaceTable) -> bool:
    if not T.a:
        raise ValueError("empty place table")
    g = 0
    for d, ad in T.a.items():
        if ad > 0:
            g = math.gcd(g, d)
    return g == 1


def hasse_weil_ok(C: CurveModel, n: int, N: int) -> bool:
    """|N - q^n - 1| <= 2g q^(n/2), compared exactly by squaring."""
    dev = abs(N - C.q**n - 1)
    return dev * dev <= 4 * C.genus**2 * C.q**n
