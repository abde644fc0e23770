"""Polynomials and rational functions over F_q.

Coefficients are field codes (see :mod:`curvezeta.ff`), stored ascending in
a tuple with no trailing zeros.  Factorization follows the textbook pipeline:
squarefree decomposition, distinct-degree splitting through gcds with
``x^(q^i) - x``, then Cantor-Zassenhaus equal-degree splitting driven by a
seeded ``random.Random``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DivisionByZero, FieldMismatch
from .ff import GF

#: products with both factors longer than this go through numpy convolutions
_NUMPY_MUL_CUTOFF = 24


class UniPoly:
    """Univariate polynomial over a :class:`GF`, immutable."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: GF, coeffs: Iterable[int] = ()):
        c = [int(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.field = field
        self.coeffs = tuple(c)

    # constructors -----------------------------------------------------
    @classmethod
    def x(cls, field: GF) -> "UniPoly":
        return cls(field, (0, 1))

    @classmethod
    def constant(cls, field: GF, c: int) -> "UniPoly":
        return cls(field, (c,))

    @classmethod
    def monomial(cls, field: GF, k: int, c: int = 1) -> "UniPoly":
        return cls(field, (0,) * k + (c,))

    @classmethod
    def from_ints(cls, field: GF, ints: Sequence[int]) -> "UniPoly":
        """Coefficients given as integers reduced into the prime field."""
        return cls(field, (i % field.p for i in ints))

    # basic properties -------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            cs = "" if (c == 1 and k) else str(c)
            if self.field.f > 1 and c >= self.field.p:
                cs = f"<{c}>"
            mono = "" if k == 0 else ("T" if k == 1 else f"T^{k}")
            terms.append(cs + ("*" if cs and mono else "") + mono)
        return " + ".join(terms)

    def _check(self, other: "UniPoly"):
        if not isinstance(other, UniPoly):
            raise TypeError("polynomial expected")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    # ring operations --------------------------------------------------
    def __add__(self, other: "UniPoly") -> "UniPoly":
        self._check(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return UniPoly(F, out)

    def __neg__(self) -> "UniPoly":
        F = self.field
        return UniPoly(F, (F.neg(c) for c in self.coeffs))

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other) -> "UniPoly":
        F = self.field
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly(F)
        if len(a) > _NUMPY_MUL_CUTOFF and len(b) > _NUMPY_MUL_CUTOFF:
            return UniPoly(F, F.poly_mul(np.array(a), np.array(b)).tolist())
        out = [0] * (len(a) + len(b) - 1)
        add, mul = F.add, F.mul
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = add(out[i + j], mul(ai, bj))
        return UniPoly(F, out)

    def scale(self, c: int) -> "UniPoly":
        F = self.field
        return UniPoly(F, (F.mul(c, a) for a in self.coeffs))

    def shift(self, k: int) -> "UniPoly":
        """Multiply by ``T**k``."""
        return UniPoly(self.field, (0,) * k + self.coeffs) if self.coeffs else self

    def __pow__(self, e: int) -> "UniPoly":
        result = UniPoly.constant(self.field, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: "UniPoly"):
        self._check(other)
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        F = self.field
        r = list(self.coeffs)
        d = other.degree
        if len(r) - 1 < d:
            return UniPoly(F), self
        inv = F.inv(other.lc)
        b = other.coeffs
        quot = [0] * (len(r) - d)
        add, mul, neg = F.add, F.mul, F.neg
        for k in range(len(r) - 1, d - 1, -1):
            c = r[k]
            if not c:
                continue
            c = mul(c, inv)
            quot[k - d] = c
            nc = neg(c)
            for i in range(d):
                if b[i]:
                    r[k - d + i] = add(r[k - d + i], mul(nc, b[i]))
            r[k] = 0
        return UniPoly(F, quot), UniPoly(F, r[:d])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, a: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, a), c)
        return acc

    def monic(self) -> "UniPoly":
        if self.is_zero() or self.lc == 1:
            return self
        return self.scale(self.field.inv(self.lc))

    def derivative(self) -> "UniPoly":
        F = self.field
        p = F.p
        out = []
        for k in range(1, len(self.coeffs)):
            m = k % p
            out.append(F.mul(self.coeffs[k], m) if m else 0)
        return UniPoly(F, out)

    def powmod(self, e: int, m: "UniPoly") -> "UniPoly":
        result = UniPoly.constant(self.field, 1) % m
        base = self % m
        while e:
            if e & 1:
                result = (result * base) % m
            base = (base * base) % m
            e >>= 1
        return result

    def frobenius_coeffs(self, k: int) -> "UniPoly":
        """Apply ``c -> c**k`` to every coefficient."""
        F = self.field
        return UniPoly(F, (F.pow(c, k) for c in self.coeffs))


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd; raises on two zero inputs."""
    a._check(b)
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: UniPoly, b: UniPoly) -> tuple[UniPoly, UniPoly, UniPoly]:
    """``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    F = a.field
    r0, r1 = a, b
    s0, s1 = UniPoly.constant(F, 1), UniPoly(F)
    t0, t1 = UniPoly(F), UniPoly.constant(F, 1)
    while not r1.is_zero():
        qt, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - qt * s1
        t0, t1 = t1, t0 - qt * t1
    inv = F.inv(r0.lc)
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def poly_invmod(a: UniPoly, m: UniPoly) -> UniPoly:
    g, s, _ = poly_xgcd(a % m, m)
    if not g.is_one():
        raise DivisionByZero("not invertible modulo m")
    return s % m


def formal_derivative(a: UniPoly) -> UniPoly:
    return a.derivative()


# -- factorization ------------------------------------------------------------

def _pth_root(a: UniPoly) -> UniPoly:
    F = a.field
    p = F.p
    e = F.q // p  # c -> c**(q/p) inverts c -> c**p
    return UniPoly(F, (F.pow(a.coeffs[k], e) for k in range(0, len(a.coeffs), p)))


def squarefree_decomposition(a: UniPoly) -> list[tuple[UniPoly, int]]:
    """Pairs ``(g, m)`` with ``a = lc * prod g**m``, each ``g`` monic squarefree."""
    a = a.monic()
    if a.degree < 1:
        return []
    out: list[tuple[UniPoly, int]] = []
    d = a.derivative()
    if d.is_zero():
        return [(g, m * a.field.p) for g, m in squarefree_decomposition(_pth_root(a))]
    c = poly_gcd(a, d)
    w = a // c
    i = 1
    while not w.is_one():
        y = poly_gcd(w, c)
        z = w // y
        if z.degree > 0:
            out.append((z.monic(), i))
        i += 1
        w = y
        c = c // y
    if not c.is_one():
        out.extend((g, m * a.field.p) for g, m in squarefree_decomposition(_pth_root(c)))
    merged: dict[UniPoly, int] = {}
    for g, m in out:
        merged[g] = merged.get(g, 0) + m
    return list(merged.items())


def distinct_degree_factorization(a: UniPoly) -> list[tuple[UniPoly, int]]:
    """For monic squarefree ``a``: pairs (product of all degree-d factors, d)."""
    F = a.field
    x = UniPoly.x(F)
    out = []
    rest = a
    h = x % rest if rest.degree > 0 else x
    d = 1
    while rest.degree >= 2 * d:
        h = h.powmod(F.q, rest)
        g = poly_gcd(rest, h - x)
        if not g.is_one():
            out.append((g, d))
            rest = rest // g
            h = h % rest
        d += 1
    if rest.degree > 0:
        out.append((rest.monic(), rest.degree))
    return out


def _random_poly(F: GF, n: int, rng: random.Random) -> UniPoly:
    return UniPoly(F, [rng.randrange(F.q) for _ in range(n)])


def equal_degree_factorization(a: UniPoly, d: int, rng: random.Random) -> list[UniPoly]:
    """Split monic squarefree ``a`` whose irreducible factors all have degree d."""
    F = a.field
    n = a.degree
    if n == d:
        return [a]
    if n == 0:
        return []
    while True:
        r = _random_poly(F, n, rng)
        if r.degree < 1:
            continue
        if F.p == 2:
            # absolute trace map down to F_2
            t = r % a
            acc = t
            for _ in range(F.f * d - 1):
                t = (t * t) % a
                acc = acc + t
            b = acc
        else:
            b = r.powmod((F.q**d - 1) // 2, a) - UniPoly.constant(F, 1)
        g = poly_gcd(a, b) if not b.is_zero() else a
        if 0 < g.degree < n:
            return equal_degree_factorization(g, d, rng) + equal_degree_factorization(a // g, d, rng)


def factor(a: UniPoly, seed: int = 0) -> list[tuple[UniPoly, int]]:
    """Irreducible monic factors with multiplicities, sorted deterministically."""
    if a.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    rng = random.Random(seed)
    out = []
    for g, m in squarefree_decomposition(a):
        for block, d in distinct_degree_factorization(g):
            for h in equal_degree_factorization(block, d, rng):
                out.append((h, m))
    out.sort(key=lambda t: (t[0].degree, t[0].coeffs[::-1], t[1]))
    return out


def expand_factors(lc: int, factors: Sequence[tuple[UniPoly, int]], F: GF) -> UniPoly:
    out = UniPoly.constant(F, lc)
    for g, m in factors:
        out = out * g**m
    return out


def irreducible_test(a: UniPoly) -> bool:
    if a.degree < 1:
        raise ValueError("degree must be >= 1")
    F = a.field
    a = a.monic()
    x = UniPoly.x(F)
    h = x % a
    n = a.degree
    for i in range(1, n + 1):
        h = h.powmod(F.q, a)
        if i <= n // 2 and not poly_gcd(a, h - x).is_one():
            return False
    return (h - x) % a == UniPoly(F)


def roots(a: UniPoly, seed: int = 0) -> list[int]:
    """Distinct roots in the coefficient field, sorted by code."""
    F = a.field
    if a.degree < 1:
        return []
    a = a.monic()
    if a.degree == 1:
        return [F.neg(a[0])]
    x = UniPoly.x(F)
    g = poly_gcd(a, x.powmod(F.q, a) - x)
    if g.degree < 1:
        return []
    lin = equal_degree_factorization(g, 1, random.Random(seed))
    return sorted(F.neg(h[0]) for h in lin)


def monic_polynomials(F: GF, d: int) -> Iterator[UniPoly]:
    for code in range(F.q**d):
        low = [(code // F.q**i) % F.q for i in range(d)]
        yield UniPoly(F, low + [1])


def monic_irreducibles(F: GF, d: int) -> Iterator[UniPoly]:
    for P in monic_polynomials(F, d):
        if irreducible_test(P):
            yield P


def necklace_count(q: int, d: int) -> int:
    """Number of monic irreducibles of degree d over F_q, by Moebius inversion."""
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += mobius(d // e) * q**e
    assert total % d == 0
    return total // d


def mobius(n: int) -> int:
    result = 1
    k = 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            result = -result
        k += 1
    return -result if n > 1 else result


# -- sparse multivariate polynomials -----------------------------------------

class MultiPoly:
    """Sparse polynomial in ``nvars`` variables: {exponent tuple: code}.

    Used for plane curve equations m(T, X) and their homogenizations.
    """

    __slots__ = ("field", "terms", "nvars")

    def __init__(self, field: GF, terms: dict[tuple[int, ...], int], nvars: int | None = None):
        self.field = field
        self.terms = {tuple(e): c for e, c in terms.items() if c}
        self.nvars = nvars if nvars is not None else len(next(iter(terms))) if terms else 0

    def __repr__(self):
        return f"MultiPoly({self.terms})"

    def __eq__(self, other):
        return isinstance(other, MultiPoly) and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash((self.field, tuple(sorted(self.terms.items()))))

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def partial(self, var: int) -> "MultiPoly":
        F = self.field
        out: dict[tuple[int, ...], int] = {}
        for e, c in self.terms.items():
            k = e[var]
            if k % F.p == 0:
                continue
            ne = list(e)
            ne[var] -= 1
            out[tuple(ne)] = F.mul(c, k % F.p)
        return MultiPoly(F, out, self.nvars)

    def __call__(self, *point: int) -> int:
        F = self.field
        acc = 0
        for e, c in self.terms.items():
            t = c
            for v, k in zip(point, e):
                if k:
                    t = F.mul(t, F.pow(v, k))
            acc = F.add(acc, t)
        return acc

    def map_coeffs(self, fn, field: GF) -> "MultiPoly":
        return MultiPoly(field, {e: fn(c) for e, c in self.terms.items()}, self.nvars)


BiPoly = MultiPoly


# -- rational functions -------------------------------------------------------

class RationalFn:
    """``num/den`` over F_q with coprime parts and monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: UniPoly, den: UniPoly | None = None, *, reduce: bool = True):
        F = num.field
        if den is None:
            den = UniPoly.constant(F, 1)
        num._check(den)
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if reduce:
            if num.is_zero():
                den = UniPoly.constant(F, 1)
            else:
                g = poly_gcd(num, den)
                if not g.is_one():
                    num, den = num // g, den // g
            inv = F.inv(den.lc)
            num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @property
    def field(self) -> GF:
        return self.num.field

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __eq__(self, other):
        return isinstance(other, RationalFn) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"({self.num}) / ({self.den})"

    def __add__(self, other: "RationalFn") -> "RationalFn":
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self):
        return RationalFn(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "RationalFn") -> "RationalFn":
        return RationalFn(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalFn") -> "RationalFn":
        if other.is_zero():
            raise DivisionByZero("division by the zero rational function")
        return RationalFn(self.num * other.den, self.den * other.num)


@dataclass
class PartialFractions:
    """``f = poly_part + sum(numerator / P**n for P, n, numerator in terms)``."""

    poly_part: UniPoly
    terms: list[tuple[UniPoly, int, UniPoly]] = dc_field(default_factory=list)

    def reassemble(self) -> RationalFn:
        F = self.poly_part.field
        total = RationalFn(self.poly_part)
        for P, n, c in self.terms:
            total = total + RationalFn(c, P**n)
        return total


def partial_fractions(f: RationalFn, seed: int = 0) -> PartialFractions:
    """Peel off ``f_{P,n} / P**n`` for the highest remaining power of each P.

    ``f_{P,n}`` is the class of ``P**n * f`` modulo ``P``, exactly as in the
    hand computation; what is left after all denominators are gone is the
    polynomial part.
    """
    F = f.field
    terms = []
    rest = f
    for P, e in factor(f.den, seed=seed):
        for n in range(e, 0, -1):
            cofactor = rest.den
            for _ in range(n):
                cofactor = cofactor // P
            # P**n * rest = rest.num / cofactor, with cofactor a unit mod P
            if rest.den.degree < P.degree * n or not (rest.den % P**n).is_zero():
                continue
            c = (rest.num * poly_invmod(cofactor, P)) % P
            if c.is_zero():
                continue
            terms.append((P, n, c))
            rest = rest - RationalFn(c, P**n)
    if not rest.is_polynomial():
        raise AssertionError("partial fraction peeling left a denominator")  # pragma: no cover
    terms.sort(key=lambda t: (t[0].degree, t[0].coeffs[::-1], -t[1]))
    return PartialFractions(rest.num.scale(F.inv(rest.den.lc)), terms)
