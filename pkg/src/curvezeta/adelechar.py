"""Additive characters of the completions of F_q(T).

Character values exp(2 pi i k / p) are carried as exponents k in Z/p.  At a
finite monic irreducible P the character reads off the coefficient x_{-1} of
the P-adic expansion; at infinity (uniformizer pi = 1/T) it reads off the
coefficient of T^(-1) with a minus sign.  Sums of p-th roots of unity are
compared exactly as integer vectors modulo the relation 1 + z + ... + z^(p-1) = 0.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence, Union

from .errors import DerivativeVanishes, QuotientTooLarge
from .ff import GF
from .polyarith import RationalFn, UniPoly, factor, poly_invmod
from .zeta import aberth_roots

INF = "inf"
Place = Union[UniPoly, str]

#: largest |G| * |O/pi^N| accepted by finite_quotient_fourier
QUOTIENT_LIMIT = 2**20


@dataclass(frozen=True)
class CharExponent:
    """exp(2 pi i k / p), stored as k mod p."""

    k: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % self.p)

    def __add__(self, other: "CharExponent") -> "CharExponent":
        return CharExponent(self.k + other.k, self.p)

    def is_trivial(self) -> bool:
        return self.k == 0


@dataclass(frozen=True)
class LocalExpansion:
    """f = sum_n terms[n] * pi^n with pi = P (finite) or 1/T (infinity).

    Finite places carry polynomial digits of degree < deg P, infinity carries
    field codes.  ``valuation`` is the first index, ``depth`` bounds the
    nonnegative indices kept (n < depth).
    """

    place: Place
    valuation: int | None
    depth: int
    terms: dict

    def coefficient(self, n: int):
        if n >= self.depth:
            raise ValueError(f"expansion only computed for n < {self.depth}")
        if self.place == INF:
            return self.terms.get(n, 0)
        return self.terms.get(n, UniPoly(self.place.field))

    def principal_part(self) -> dict:
        return {n: c for n, c in self.terms.items() if n < 0}


def _valuation(a: UniPoly, P: UniPoly) -> tuple[int, UniPoly]:
    v = 0
    while True:
        qt, r = divmod(a, P)
        if not r.is_zero():
            return v, a
        a, v = qt, v + 1


def local_expand(f: RationalFn, place: Place, depth: int = 1) -> LocalExpansion:
    if f.is_zero():
        return LocalExpansion(place, None, depth, {})
    if place == INF:
        return _expand_inf(f, depth)
    P = place.monic()
    vn, num = _valuation(f.num, P)
    vd, den = _valuation(f.den, P)
    v = vn - vd
    if v >= depth:
        return LocalExpansion(P, v, depth, {})
    # f = P^v * num/den with den a unit at P; need num/den mod P^(depth - v)
    k = depth - v
    Pk = P**k
    g = (num * poly_invmod(den, Pk)) % Pk
    terms = {}
    for n in range(v, depth):
        g, r = divmod(g, P)
        if not r.is_zero():
            terms[n] = r
    return LocalExpansion(P, v, depth, terms)


def _expand_inf(f: RationalFn, depth: int) -> LocalExpansion:
    """Substitute T = 1/pi: f = pi^(deg den - deg num) * rev(num)(pi) / rev(den)(pi)."""
    F = f.field
    v = f.den.degree - f.num.degree
    rn = list(reversed(f.num.coeffs))
    rd = list(reversed(f.den.coeffs))
    inv0 = F.inv(rd[0])
    count = max(0, depth - v)
    series = []
    rem = rn + [0] * count
    for i in range(count):
        c = F.mul(rem[i], inv0)
        series.append(c)
        if c:
            for j in range(1, len(rd)):
                if i + j < len(rem):
                    rem[i + j] = F.sub(rem[i + j], F.mul(c, rd[j]))
    terms = {v + i: c for i, c in enumerate(series) if c}
    return LocalExpansion(INF, v, depth, terms)


def relative_trace(a: UniPoly, P: UniPoly) -> int:
    """Tr from F_q[T]/(P) to F_q: sum of the d conjugates a^(q^i) mod P."""
    F = P.field
    a = a % P
    total = UniPoly(F)
    conj = a
    for _ in range(P.degree):
        total = total + conj
        conj = conj.powmod(F.q, P)
    if total.degree > 0:
        raise AssertionError("trace did not land in F_q")  # pragma: no cover
    return total[0]


def residue_at(f: RationalFn, place: Place) -> int:
    """res_P(f) = Tr(x_{-1}/P') at finite P, res_inf(f) = -(coefficient of T^-1)."""
    F = f.field
    if place == INF:
        return F.neg(local_expand(f, INF, 2).coefficient(1))
    P = place.monic()
    x = local_expand(f, P, 0).coefficient(-1)
    if x.is_zero():
        return 0
    dP = P.derivative() % P
    if dP.is_zero():
        raise DerivativeVanishes(f"P' = 0 mod P for P = {P}")
    return relative_trace(x * poly_invmod(dP, P), P)


def chi_local(f: RationalFn, place: Place) -> CharExponent:
    F = f.field
    if f.is_zero():
        return CharExponent(0, F.p)
    return CharExponent(F.trace(residue_at(f, place)), F.p)


def chi_global(f: RationalFn) -> CharExponent:
    """Product of all local characters; only infinity and poles contribute."""
    total = chi_local(f, INF)
    if f.den.degree > 0:
        for P, _ in factor(f.den):
            total = total + chi_local(f, P)
    return total


def random_rational(F: GF, rng: random.Random, max_deg: int = 4) -> RationalFn:
    """Nonzero num/den with uniformly random coefficients, den monic of degree 1..max_deg."""
    while True:
        num = UniPoly(F, [rng.randrange(F.q) for _ in range(rng.randint(1, max_deg + 1))])
        if num.is_zero():
            continue
        d = rng.randint(1, max_deg)
        den = UniPoly(F, [rng.randrange(F.q) for _ in range(d)] + [1])
        return RationalFn(num, den)


def chi_global_trials(F: GF, trials: int, seed: int = 0, max_deg: int = 4) -> list[RationalFn]:
    """Seeded random rational functions whose global character is nontrivial (should be none)."""
    rng = random.Random(seed)
    bad = []
    for _ in range(trials):
        f = random_rational(F, rng, max_deg)
        if not chi_global(f).is_trivial():
            bad.append(f)
    return bad


def trace_delta_check(P: UniPoly) -> bool:
    """Tr(T^k / P') is 0 for k <= d - 2 and 1 for k = d - 1."""
    F = P.field
    P = P.monic()
    d = P.degree
    dP = P.derivative() % P
    if dP.is_zero():
        raise DerivativeVanishes(f"P' = 0 mod P for P = {P}")
    inv = poly_invmod(dP, P)
    for k in range(d):
        t = relative_trace(UniPoly.monomial(F, k) * inv, P)
        if t != (1 if k == d - 1 else 0):
            return False
    return True


def residue_sum_complex_check(m: Sequence, k: int) -> float:
    """|sum a_i^k / m'(a_i) - delta_{k, d-1}| over the complex roots a_i of monic m."""
    coeffs = [complex(c) for c in m]
    d = len(coeffs) - 1
    if not 0 <= k <= d - 1:
        raise ValueError("need 0 <= k <= deg m - 1")
    dm = [i * coeffs[i] for i in range(1, d + 1)]
    total = 0j
    for a in aberth_roots(coeffs):
        total += a**k / sum(c * a**i for i, c in enumerate(dm))
    return abs(total - (1 if k == d - 1 else 0))


def local_zeta_factor(deg_v: int, n: int, nmax: int) -> list[int]:
    """u^(n deg_v) / (1 - u^deg_v) through u^nmax."""
    out = [0] * (nmax + 1)
    k = n * deg_v
    while k <= nmax:
        if k >= 0:
            out[k] = 1
        k += deg_v
    return out


# -- finite quotients of the completions ---------------------------------------------

def _cyclotomic_value(counts: Sequence[int]):
    """Integer c with sum counts[k] z^k = c, or None if the sum is not rational."""
    if len(set(counts[1:])) > 1:
        return None
    return counts[0] - counts[1]


class _Quotient:
    """pi^a O / pi^b O as tuples of digits (x_a, ..., x_{b-1}) with pairing exponents."""

    def __init__(self, F: GF, place: Place, a: int, b: int):
        self.F, self.place, self.a, self.b = F, place, a, b
        if place == INF:
            self.digits = list(range(F.q))
            self.qv = F.q
        else:
            self.P = place.monic()
            d = self.P.degree
            self.digits = [UniPoly(F, c) for c in itertools.product(range(F.q), repeat=d)]
            self.qv = F.q**d
            dP = self.P.derivative() % self.P
            if dP.is_zero():
                raise DerivativeVanishes(f"P' = 0 mod P for P = {self.P}")
            self.inv_dP = poly_invmod(dP, self.P)

    def elements(self, lo: int | None = None):
        lo = self.a if lo is None else lo
        zero = 0 if self.place == INF else UniPoly(self.F)
        pad = [zero] * (lo - self.a)
        for tail in itertools.product(self.digits, repeat=self.b - lo):
            yield tuple(pad) + tail

    def pairing(self, xi, eta) -> int:
        """Exponent of chi(xi * eta) in Z/p."""
        F = self.F
        a = self.a
        if self.place == INF:
            # coefficient of pi^1 = T^-1 in the product; res = -that
            c = 0
            for i, x in enumerate(xi):
                j = 1 - 2 * a - i
                if 0 <= j < len(eta) and x and eta[j]:
                    c = F.add(c, F.mul(x, eta[j]))
            return F.trace(F.neg(c))
        # finite: sum_{i+j = -1} x_i y_j with the product reduced through P-adic digits
        P = self.P
        A = UniPoly(F)
        B = UniPoly(F)
        Ppow = UniPoly.constant(F, 1)
        for x, y in zip(xi, eta):
            A = A + x * Ppow
            B = B + y * Ppow
            Ppow = Ppow * P
        # xi = A P^a, eta = B P^a, product = A B P^(2a); need digit at index -1 - 2a of A B
        idx = -1 - 2 * a
        if idx < 0:
            return 0
        AB = A * B
        for _ in range(idx):
            AB = AB // P
        x_m1 = AB % P
        if x_m1.is_zero():
            return 0
        return F.trace(relative_trace(x_m1 * self.inv_dP, P))


def quotient_bounds(place: Place, N: int) -> tuple[int, int, int]:
    """(a, b, lo): G = pi^a O / pi^b O, the test set is pi^lo O / pi^b O.

    Finite P: G = P^-N O / P^N O and the test set is O.  At infinity chi is
    trivial exactly on pi^2 O, so the self-dual window is pi^(1-N) O / pi^(N+1) O
    with the test set pi O.
    """
    if place == INF:
        return 1 - N, N + 1, 1
    return -N, N, 0


def finite_quotient_fourier(F: GF, place: Place, N: int) -> bool:
    """The Fourier transform of the indicator of O_P (resp. pi O_inf) on G is itself.

    Transform: (F f)(eta) = sum_{xi in test set} chi(eta xi) * mu(cell), with
    mu(O_v) = q_v^(-k_v/2), k_P = 0, k_inf = -2, so each cell pi^b O has
    measure q_v^(-N) in both cases.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    a, b, lo = quotient_bounds(place, N)
    Q = _Quotient(F, place, a, b)
    size_G = Q.qv ** (b - a)
    size_S = Q.qv ** (b - lo)
    if size_G * size_S > QUOTIENT_LIMIT:
        raise QuotientTooLarge(f"|G| * |S| = {size_G * size_S} exceeds {QUOTIENT_LIMIT}")
    test = list(Q.elements(lo))
    cell_inv = Q.qv**N  # 1 / measure of a cell
    zero = 0 if place == INF else UniPoly(F)
    for eta in Q.elements():
        counts = [0] * F.p
        for xi in test:
            counts[Q.pairing(xi, eta)] += 1
        value = _cyclotomic_value(counts)
        inside = all(c == zero for c in eta[: lo - a])
        target = cell_inv if inside else 0
        if value != target:
            return False
    return True


def pairing_nondegenerate(F: GF, place: Place, N: int) -> bool:
    """Every nonzero eta in G pairs nontrivially with some xi in G."""
    a, b, _ = quotient_bounds(place, N)
    Q = _Quotient(F, place, a, b)
    if Q.qv ** (2 * (b - a)) > QUOTIENT_LIMIT:
        raise QuotientTooLarge("quotient too large")
    elems = list(Q.elements())
    zero = 0 if place == INF else UniPoly(F)
    for eta in elems:
        if all(c == zero for c in eta):
            continue
        if all(Q.pairing(xi, eta) == 0 for xi in elems):
            return False
    return True


def canonical_degree_p1() -> int:
    """deg K for P^1 from k_P = 0 at finite places and k_inf = -2."""
    return -2


def genus_from_canonical(deg_k: int) -> int:
    return 1 + deg_k // 2
