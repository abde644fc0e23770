"""Stepanov's auxiliary function in Bombieri's form, on y^2 = f(x) curves and P^1.

Functions regular away from the point at infinity live in the coordinate
ring F_q[x, y]/(y^2 - f(x)) as u(x) + v(x) y; on P^1 they are polynomials in
x.  With p^mu = sqrt(q), n = sqrt(q) - 1 and m = sqrt(q) + 2g we look for

    f(X, Y) = sum_i b_i(X)^(p^mu) s_i(Y),   b_i in L_n, s_i a basis of L_m,

vanishing on the diagonal.  Its restriction to the graph of Frobenius is a
nonzero p^mu-th power with a zero at every rational affine point, which
bounds N(1) by its pole order.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .curve import CurveModel, count_points, points
from .errors import (
    EmptyKernel,
    PreconditionFailed,
    UnsupportedModel,
    ZeroCheckFailed,
    ZeroElement,
)
from .ff import GF
from .polyarith import UniPoly


class CoordRing:
    """Functions on C with poles only at infinity."""

    def __init__(self, C: CurveModel):
        if C.kind == "line":
            self.f = None
            self.g = 0
            self.wx, self.wy = 1, None
        elif C.kind in ("elliptic", "hyperelliptic"):
            self.f = UniPoly(C.base, C.poly)
            self.g = C.genus
            self.wx, self.wy = 2, 2 * C.genus + 1
        else:
            raise UnsupportedModel("only P^1 and odd-degree y^2 = f(x) models are supported")
        self.C = C
        self.F: GF = C.base
        self._fpow: dict[int, UniPoly] = {}

    def __eq__(self, other):
        return isinstance(other, CoordRing) and self.C is other.C

    def __hash__(self):
        return id(self.C)

    def elem(self, u: UniPoly | Sequence[int] = (), v: UniPoly | Sequence[int] = ()) -> "FFElem":
        if not isinstance(u, UniPoly):
            u = UniPoly(self.F, u)
        if not isinstance(v, UniPoly):
            v = UniPoly(self.F, v)
        if self.f is None and not v.is_zero():
            raise UnsupportedModel("P^1 has no y coordinate")
        return FFElem(self, u, v)

    def x(self) -> "FFElem":
        return self.elem((0, 1))

    def y(self) -> "FFElem":
        return self.elem((), (1,))

    def const(self, c: int) -> "FFElem":
        return self.elem((c,))

    def f_power(self, e: int) -> UniPoly:
        if e not in self._fpow:
            self._fpow[e] = self.f**e
        return self._fpow[e]

    # Riemann-Roch spaces L(M * inf)
    def monomials(self, M: int) -> list[tuple[int, int]]:
        """(j, e): x^j y^e with pole order <= M, sorted by pole order."""
        out = [(j, 0) for j in range(M // self.wx + 1)]
        if self.wy is not None and M >= self.wy:
            out += [(j, 1) for j in range((M - self.wy) // 2 + 1)]
        return sorted(out, key=lambda t: self.wx * t[0] + (self.wy or 0) * t[1])

    def dim(self, M: int) -> int:
        return len(self.monomials(M)) if M >= 0 else 0

    def coords(self, a: "FFElem", M: int) -> list[int]:
        """F_q coordinates of a in the monomial basis of L(M inf)."""
        if a.pole_order_or_neg() > M:
            raise ValueError(f"element has pole order {a.pole_order()} > {M}")
        return [(a.u if e == 0 else a.v)[j] for j, e in self.monomials(M)]


class FFElem:
    """u(x) + v(x) y in the coordinate ring."""

    __slots__ = ("ring", "u", "v")

    def __init__(self, ring: CoordRing, u: UniPoly, v: UniPoly):
        self.ring, self.u, self.v = ring, u, v

    def is_zero(self) -> bool:
        return self.u.is_zero() and self.v.is_zero()

    def __eq__(self, other):
        return isinstance(other, FFElem) and self.u == other.u and self.v == other.v

    def __hash__(self):
        return hash((self.u, self.v))

    def __repr__(self):
        if self.v.is_zero():
            return f"({self.u!r})".replace("T", "x")
        return f"({self.u!r}) + ({self.v!r})*y".replace("T", "x")

    def __add__(self, o: "FFElem") -> "FFElem":
        return FFElem(self.ring, self.u + o.u, self.v + o.v)

    def __sub__(self, o: "FFElem") -> "FFElem":
        return FFElem(self.ring, self.u - o.u, self.v - o.v)

    def __neg__(self):
        return FFElem(self.ring, -self.u, -self.v)

    def __mul__(self, o) -> "FFElem":
        if isinstance(o, int):
            return FFElem(self.ring, self.u.scale(o), self.v.scale(o))
        R = self.ring
        if R.f is None:
            return FFElem(R, self.u * o.u, self.v)
        u = self.u * o.u
        if not self.v.is_zero() and not o.v.is_zero():
            u = u + self.v * o.v * R.f
        v = self.u * o.v + self.v * o.u
        return FFElem(R, u, v)

    def __pow__(self, e: int) -> "FFElem":
        result = self.ring.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def pole_order_or_neg(self) -> int:
        R = self.ring
        a = R.wx * self.u.degree if not self.u.is_zero() else -1
        b = R.wy + 2 * self.v.degree if not self.v.is_zero() else -1
        return max(a, b)

    def pole_order(self) -> int:
        if self.is_zero():
            raise ZeroElement("the zero function has no pole order")
        return self.pole_order_or_neg()

    def frobenius(self, k: int) -> "FFElem":
        """self^(p^k): coefficients to the p^k, x -> x^(p^k), y -> y f^((p^k - 1)/2)."""
        R = self.ring
        F = R.F
        e = R.F.p**k

        def spread(a: UniPoly) -> UniPoly:
            out = [0] * (e * a.degree + 1) if not a.is_zero() else []
            for i, c in enumerate(a.coeffs):
                if c:
                    out[i * e] = F.pow(c, e)
            return UniPoly(F, out)

        u = spread(self.u)
        if self.v.is_zero():
            return FFElem(R, u, UniPoly(F))
        return FFElem(R, u, spread(self.v) * R.f_power((e - 1) // 2))

    def power_q(self, k: int = 1) -> "FFElem":
        """self^(q^k) through the p-power Frobenius."""
        return self.frobenius(self.ring.F.f * k)


def ff_arith(a: FFElem, b: FFElem, op: str) -> FFElem:
    if op in ("+", "add"):
        return a + b
    if op in ("-", "sub"):
        return a - b
    if op in ("*", "mul"):
        return a * b
    raise ValueError(f"unknown op {op!r}")


def pole_order_at_infty(a: FFElem) -> int:
    return a.pole_order()


# -- Riemann-Roch ----------------------------------------------------------------------

@dataclass(frozen=True)
class PoleBasis:
    m: int
    elements: tuple

    @property
    def dim(self) -> int:
        return len(self.elements)

    def pole_orders(self) -> list[int]:
        return [e.pole_order() for e in self.elements]


def rr_basis(C: CurveModel | CoordRing, m: int) -> PoleBasis:
    R = C if isinstance(C, CoordRing) else CoordRing(C)
    if m < 0:
        return PoleBasis(m, ())
    F = R.F
    els = []
    for j, e in R.monomials(m):
        mono = UniPoly.monomial(F, j)
        els.append(R.elem(mono, ()) if e == 0 else R.elem((), mono))
    B = PoleBasis(m, tuple(els))
    g = R.g
    if not m + 1 - g <= B.dim <= m + 1:
        raise AssertionError(f"l_{m} = {B.dim} outside [m+1-g, m+1]")  # pragma: no cover
    if m > 2 * g - 2 and B.dim != m + 1 - g:
        raise AssertionError(f"l_{m} = {B.dim} != m+1-g")  # pragma: no cover
    return B


def rr_symmetry_check(C: CurveModel | CoordRing, m: int) -> bool:
    """l(m inf) - l((2g-2-m) inf) = m + 1 - g, with l = 0 in negative degree."""
    R = C if isinstance(C, CoordRing) else CoordRing(C)
    g = R.g
    return rr_basis(R, m).dim - rr_basis(R, 2 * g - 2 - m).dim == m + 1 - g


# -- parameters ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Params:
    pmu: int
    n: int
    m: int

    @property
    def mu_exp(self) -> int:
        return round(math.log(self.pmu) / math.log(_smallest_prime_factor(self.pmu)))

    @property
    def k(self) -> int:
        return self.pmu * self.n

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.pmu, self.n, self.m)


def _smallest_prime_factor(n: int) -> int:
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1
    return n


def choose_parameters(q: int, g: int) -> Params:
    r = math.isqrt(q)
    if r * r != q:
        raise PreconditionFailed(f"q = {q} is not a square")
    if not q > (g + 1) ** 4:
        raise PreconditionFailed(f"q > (g+1)^4 fails: {q} <= {(g + 1) ** 4}")
    P = Params(r, r - 1, r + 2 * g)
    if not (P.m + 1 - g - P.pmu) * (P.n - g) > P.pmu * g:
        raise PreconditionFailed("kernel condition (m+1-g-p^mu)(n-g) > p^mu g fails")  # pragma: no cover
    if not P.k < q:
        raise PreconditionFailed("p^mu n < q fails")  # pragma: no cover
    return P


# -- linear algebra over F_p -------------------------------------------------------------------

def _rref_mod_p(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    A = A.copy() % p
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        others = np.nonzero(A[:, c])[0]
        others = others[others != r]
        if others.size:
            A[others] = (A[others] - np.outer(A[others, c], A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def rank_mod_p(A: np.ndarray, p: int) -> int:
    return len(_rref_mod_p(A, p)[1])


def nullspace_mod_p(A: np.ndarray, p: int) -> list[np.ndarray]:
    R, pivots = _rref_mod_p(A, p)
    cols = A.shape[1]
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = np.zeros(cols, dtype=np.int64)
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-R[i, fc]) % p
        basis.append(v)
    return basis


def _flatten(F: GF, codes: Sequence[int]) -> list[int]:
    out = []
    for c in codes:
        out.extend(F.digits(c))
    return out


# -- the construction -------------------------------------------------------------------------

@dataclass
class StepanovFunction:
    ring: CoordRing
    params: Params
    s: tuple          # basis s_1..s_{l_m} of L_m
    b: tuple          # coefficients b_1..b_{l_m} in L_n

    @property
    def a(self) -> list[FFElem]:
        return [bi.frobenius(self.params.mu_exp) for bi in self.b]

    def restrict_diagonal(self) -> FFElem:
        total = self.ring.const(0)
        for ai, si in zip(self.a, self.s):
            total = total + ai * si
        return total


def _columns(R: CoordRing, P: Params):
    """Index (i, j, t) and the element e_t^(p^mu) t_j^(p^mu) for every F_p unknown."""
    F = R.F
    tn = rr_basis(R, P.n).elements
    sm = rr_basis(R, P.m).elements
    mu = P.mu_exp
    e_pows = [F.pow(F.p**t, P.pmu) for t in range(F.f)]  # (power-basis element)^(p^mu)
    t_pows = [tj.frobenius(mu) for tj in tn]
    return tn, sm, e_pows, t_pows


def stepanov_search(C: CurveModel, params: Params | None = None) -> StepanovFunction:
    R = CoordRing(C)
    F = R.F
    P = params or choose_parameters(F.q, R.g)
    tn, sm, e_pows, t_pows = _columns(R, P)
    M = P.k + P.m
    cols, index = [], []
    for i, si in enumerate(sm):
        for j, tp in enumerate(t_pows):
            prod = tp * si
            for t, ep in enumerate(e_pows):
                cols.append(_flatten(F, R.coords(prod * ep, M)))
                index.append((i, j, t))
    A = np.array(cols, dtype=np.int64).T
    kernel = nullspace_mod_p(A, F.p)
    if not kernel:
        raise EmptyKernel("no nonzero f with f|diagonal = 0")
    vec = kernel[0]
    b = _vector_to_coeffs(R, P, tn, len(sm), index, vec)
    S = StepanovFunction(R, P, tuple(sm), tuple(b))
    if not S.restrict_diagonal().is_zero():
        raise ZeroCheckFailed("kernel vector does not vanish on the diagonal")  # pragma: no cover
    return S


def _vector_to_coeffs(R, P, tn, lm, index, vec) -> list[FFElem]:
    F = R.F
    beta = [[0] * len(tn) for _ in range(lm)]
    for (i, j, t), c in zip(index, vec):
        if c:
            beta[i][j] = F.add(beta[i][j], F.mul(int(c) % F.p, F.p**t))
    out = []
    for i in range(lm):
        acc = R.const(0)
        for j, tj in enumerate(tn):
            if beta[i][j]:
                acc = acc + tj * beta[i][j]
        out.append(acc)
    return out


def restrict_frobenius(S: StepanovFunction, check: bool = True) -> FFElem:
    """f|phi = sum a_i s_i^q, cross-checked against (sum b_i s_i^(q/p^mu))^(p^mu)."""
    R = S.ring
    F = R.F
    mu = S.params.mu_exp
    total = R.const(0)
    for ai, si in zip(S.a, S.s):
        total = total + ai * si.power_q()
    if check:
        inner = R.const(0)
        for bi, si in zip(S.b, S.s):
            inner = inner + bi * si.frobenius(F.f - mu)
        if inner.frobenius(mu) != total:
            raise ZeroCheckFailed("the two forms of f|phi disagree")
    return total


def _phi_columns(R: CoordRing, P: Params):
    tn, sm, e_pows, t_pows = _columns(R, P)
    sq = [si.power_q() for si in sm]
    M = P.k + R.F.q * P.m
    cols = []
    for i, si in enumerate(sq):
        for tp in t_pows:
            prod = tp * si
            for ep in e_pows:
                cols.append(_flatten(R.F, R.coords(prod * ep, M)))
    return np.array(cols, dtype=np.int64).T


def injectivity_check(C: CurveModel, params: Params, trials: int = 5, seed: int = 0) -> bool:
    """f -> f|phi has full column rank over F_p and kills no random nonzero vector."""
    R = CoordRing(C)
    F = R.F
    A = _phi_columns(R, params)
    if rank_mod_p(A, F.p) != A.shape[1]:
        return False
    rng = random.Random(seed)
    for _ in range(trials):
        v = np.array([rng.randrange(F.p) for _ in range(A.shape[1])], dtype=np.int64)
        if not v.any():
            v[0] = 1
        if not ((A @ v) % F.p).any():
            return False
    return True


# -- local expansions at rational points ------------------------------------------------------

def _taylor_many(F: GF, u: UniPoly, xs: np.ndarray, K: int) -> np.ndarray:
    """First K Taylor coefficients of u at every x0 (rows), by repeated synthetic division."""
    out = np.zeros((len(xs), K), dtype=np.int64)
    rem = [np.full(len(xs), c, dtype=np.int64) for c in u.coeffs]
    for k in range(K):
        if not rem:
            break
        # divide rem(x) by (x - x0): Horner gives quotient and remainder u(x0)
        acc = np.zeros(len(xs), dtype=np.int64)
        quot = []
        for c in reversed(rem):
            acc = F.vadd(F.vmul(acc, xs), c)
            quot.append(acc)
        out[:, k] = quot[-1]
        rem = list(reversed(quot[:-1]))
    return out


def _series_mul(F: GF, a: Sequence[int], b: Sequence[int], K: int) -> list[int]:
    out = [0] * K
    for i, x in enumerate(a[:K]):
        if x:
            for j, y in enumerate(b[: K - i]):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return out


def _sqrt_series(F: GF, c: Sequence[int], y0: int, K: int) -> list[int]:
    """Y with Y^2 = sum c_k t^k and Y(0) = y0 != 0."""
    Y = [y0] + [0] * (K - 1)
    inv2y0 = F.inv(F.add(y0, y0))
    for k in range(1, K):
        acc = c[k] if k < len(c) else 0
        for i in range(1, k):
            acc = F.sub(acc, F.mul(Y[i], Y[k - i]))
        Y[k] = F.mul(acc, inv2y0)
    return Y


def _valuation(series: Sequence[int], K: int) -> int:
    for i, c in enumerate(series[:K]):
        if c:
            return i
    return K


def zero_multiplicities(a: FFElem, pts: Sequence[tuple[int, int]], K: int) -> dict:
    """Order of vanishing of a at each affine rational point, capped at K."""
    R = a.ring
    F = R.F
    result = {}
    if R.f is None:
        xs = np.array([p[0] for p in pts], dtype=np.int64)
        T = _taylor_many(F, a.u, xs, K)
        for pt, row in zip(pts, T):
            result[pt] = _valuation(row.tolist(), K)
        return result
    regular = [p for p in pts if p[1] != 0]
    branch = [p for p in pts if p[1] == 0]
    if regular:
        xs = np.array([p[0] for p in regular], dtype=np.int64)
        Tu = _taylor_many(F, a.u, xs, K)
        Tv = _taylor_many(F, a.v, xs, K)
        Tf = _taylor_many(F, R.f, xs, K)
        for idx, pt in enumerate(regular):
            Y = _sqrt_series(F, Tf[idx].tolist(), pt[1], K)
            vy = _series_mul(F, Tv[idx].tolist(), Y, K)
            total = [F.add(int(x), y) for x, y in zip(Tu[idx], vy)]
            result[pt] = _valuation(total, K)
    for pt in branch:
        result[pt] = _branch_valuation(a, pt[0], K)
    return result


def _branch_valuation(a: FFElem, x0: int, K: int) -> int:
    """Uniformizer t = y at a Weierstrass point: x = x0 + e(t) with f(x0 + e) = t^2."""
    R = a.ring
    F = R.F
    xs = np.array([x0], dtype=np.int64)
    Tf = _taylor_many(F, R.f, xs, R.f.degree + 1)[0].tolist()  # f(x0 + s) in s
    d1 = Tf[1]
    if d1 == 0:
        raise ZeroCheckFailed("f has a repeated root")  # pragma: no cover
    inv_d1 = F.inv(d1)

    def compose(taylor: Sequence[int], e: Sequence[int]) -> list[int]:
        out = [0] * K
        power = [1] + [0] * (K - 1)
        for c in taylor:
            if c:
                out = [F.add(o, F.mul(c, pw)) for o, pw in zip(out, power)]
            power = _series_mul(F, power, e, K)
            if not any(power):
                break
        return out

    e = [0] * K
    for k in range(2, K):
        # coefficient k of f(x0 + e) with e_k still 0, then solve d1 e_k + rest = [k == 2]
        rest = compose(Tf, e)[k]
        target = 1 if k == 2 else 0
        e[k] = F.mul(F.sub(target, rest), inv_d1)
    Tu = _taylor_many(F, a.u, xs, K)[0].tolist()
    Tv = _taylor_many(F, a.v, xs, K)[0].tolist()
    U = compose(Tu, e)
    V = compose(Tv, e)
    t = [0, 1] + [0] * (K - 2)
    total = [F.add(x, y) for x, y in zip(U, _series_mul(F, V, t, K))]
    return _valuation(total, K)


# -- bound ---------------------------------------------------------------------------------------

@dataclass
class BoundReport:
    params: tuple[int, int, int]
    n1: int
    bound: int
    pole_order: int
    pole_bound: int
    min_multiplicity: int | None
    zeros_counted: int
    diagonal_zero: bool
    phi_nonzero: bool


def derive_bound(C: CurveModel, S: StepanovFunction | None = None) -> BoundReport:
    F = C.base
    n1 = count_points(C, 1)
    P = S.params if S is not None else choose_parameters(F.q, C.genus)
    bound = (F.q // P.pmu) * (P.m + 1)
    pole_bound = P.k + F.q * P.m
    if n1 == 0:
        return BoundReport(P.as_tuple(), 0, bound, 0, pole_bound, None, 0, True, True)
    if S is None:
        S = stepanov_search(C, P)
    diag_zero = S.restrict_diagonal().is_zero()
    if not diag_zero:
        raise ZeroCheckFailed("f does not vanish on the diagonal")
    fphi = restrict_frobenius(S)
    if fphi.is_zero():
        raise ZeroCheckFailed("f|phi vanishes identically")
    pole = fphi.pole_order()
    if pole > pole_bound:
        raise ZeroCheckFailed(f"pole order {pole} exceeds {pole_bound}")
    affine = [pt for pt in points(C, 1) if pt != ("inf",)]
    if C.kind == "line":
        affine = [(pt[0], 0) for pt in affine]
    mult = zero_multiplicities(fphi, affine, P.pmu + 1)
    for pt, k in mult.items():
        if k < P.pmu:
            raise ZeroCheckFailed(f"f|phi vanishes to order {k} < {P.pmu} at {pt}")
    zeros = sum(mult.values())
    if P.pmu * (n1 - 1) > pole_bound:
        raise ZeroCheckFailed("more zeros than the pole order allows")
    if n1 > bound:
        raise ZeroCheckFailed(f"N(1) = {n1} exceeds the bound {bound}")
    return BoundReport(P.as_tuple(), n1, bound, pole, pole_bound,
                       min(mult.values()) if mult else None, zeros, diag_zero, True)


def p1_example_function(C: CurveModel, P: Params) -> StepanovFunction:
    """f(X, Y) = X^(p^mu) - Y^(p^mu) on P^1: b_1 = x, b at s = Y^(p^mu) is -1."""
    R = CoordRing(C)
    sm = rr_basis(R, P.m).elements
    b = [R.const(0) for _ in sm]
    b[0] = R.x()
    b[P.pmu] = R.const(R.F.neg(1))
    return StepanovFunction(R, P, tuple(sm), tuple(b))
