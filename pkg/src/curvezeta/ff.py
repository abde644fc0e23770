"""Finite fields F_{p^f} and extension towers F_{q^n}.

Field elements are plain integers.  The code ``sum(c[i] * p**i)`` stands for
the residue class ``sum(c[i] * x**i)`` modulo the field's defining polynomial,
so the base-p digits of a code are its coordinates in the power basis.  The
prime subfield therefore occupies codes ``0 .. p-1``.

Arithmetic goes through discrete log / antilog tables with Zech logarithms for
addition.  The same tables back numpy-vectorized variants (``vadd``,
``vmul`` ...) used by the point-counting kernels.

:class:`FqElem` wraps a code together with its field for callers that want
operator syntax; the heavy machinery in the rest of the package works on raw
codes.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import DivisionByZero, FieldMismatch, NonPrime

#: above this order the scalar tables stay numpy arrays instead of lists
SCALAR_TABLE_LIMIT = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in (2, 3, 5, 7, 11, 13):
        if n % d == 0:
            return n == d
    d = 17
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n >= 1`` by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


# -- polynomials over the prime field, as ascending int lists ---------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _fp_mod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv % p
        if c:
            shift = len(a) - 1 - dm
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - c * mi) % p
        a.pop()
        _trim(a)
    return _trim(a)


def _fp_powmod(a, e, m, p):
    result = [1]
    base = _fp_mod(a, m, p)
    while e:
        if e & 1:
            result = _fp_mod(_fp_mul(result, base, p), m, p)
        base = _fp_mod(_fp_mul(base, base, p), m, p)
        e >>= 1
    return result


def _fp_gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _fp_mod(a, b, p)
    return a


def _fp_sub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _fp_is_irreducible(m: Sequence[int], p: int) -> bool:
    # Rabin's test
    f = len(m) - 1
    if f == 1:
        return True
    x = [0, 1]
    if _fp_sub(_fp_powmod(x, p**f, m, p), x, p):
        return False
    for r in prime_factors(f):
        h = _fp_sub(_fp_powmod(x, p ** (f // r), m, p), x, p)
        if len(_fp_gcd(m, h, p)) != 1:
            return False
    return True


def smallest_irreducible(p: int, f: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree ``f`` over Z/p.

    Candidates are ordered by the code of their lower coefficients, i.e.
    lexicographically on ``(c[f-1], ..., c[0])``.
    """
    for code in range(p**f):
        low = [(code // p**i) % p for i in range(f)]
        cand = low + [1]
        if f > 1 and low[0] == 0:
            continue
        if _fp_is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# -- the field ---------------------------------------------------------------

class GF:
    """The finite field F_q, q = p**f, as Z/p[x] modulo ``modulus``.

    Instances from :func:`make_field` and :func:`extension` are cached, so a
    field is usually compared by identity; equality falls back to
    ``(p, modulus)``.
    """

    def __init__(self, p: int, modulus: Sequence[int]):
        if not is_prime(p):
            raise NonPrime(f"{p} is not prime")
        modulus = tuple(int(c) % p for c in modulus)
        if modulus[-1] != 1:
            raise ValueError("modulus must be monic")
        self.p = p
        self.modulus = modulus
        self.f = len(modulus) - 1
        self.q = p**self.f
        # set by extension()
        self.base: GF | None = None
        self._embed: np.ndarray | None = None
        self._tables_built = False

    # identity ---------------------------------------------------------
    def __repr__(self):
        if self.base is not None:
            return f"GF({self.base.q}^{self.f // self.base.f})"
        return f"GF({self.p}^{self.f})" if self.f > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __len__(self):
        return self.q

    @property
    def order(self) -> int:
        return self.q

    @property
    def frobenius_base(self) -> int:
        """Order of the field whose Frobenius ``phi_q`` acts on this one."""
        return self.base.q if self.base is not None else self.q

    # codes <-> coordinates ---------------------------------------------
    def digits(self, a: int) -> tuple[int, ...]:
        p = self.p
        return tuple((a // p**i) % p for i in range(self.f))

    def from_digits(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.f:
            coeffs = _fp_mod(list(coeffs), list(self.modulus), self.p)
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs))

    def __call__(self, value) -> "FqElem":
        if isinstance(value, FqElem):
            if value.field != self:
                raise FieldMismatch(f"{value.field} vs {self}")
            return value
        if isinstance(value, (list, tuple)):
            return FqElem(self, self.from_digits(value))
        return FqElem(self, int(value) % self.p)

    def element(self, code: int) -> "FqElem":
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} out of range for {self}")
        return FqElem(self, code)

    # bootstrap arithmetic (no tables) ---------------------------------
    def _mul_slow(self, a: int, b: int) -> int:
        prod = _fp_mul(_trim(list(self.digits(a))), _trim(list(self.digits(b))), self.p)
        return self.from_digits(_fp_mod(prod, list(self.modulus), self.p))

    def _pow_slow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._mul_slow(r, a)
            a = self._mul_slow(a, a)
            e >>= 1
        return r

    def _primitive_element(self) -> int:
        order = self.q - 1
        if order == 1:
            return 1
        primes = prime_factors(order)
        for g in range(2, self.q):
            if all(self._pow_slow(g, order // r) != 1 for r in primes):
                return g
        raise AssertionError("no primitive element")  # pragma: no cover

    def _build_tables(self):
        p, f, q = self.p, self.f, self.q
        order = q - 1
        g = self._primitive_element()
        pw = p ** np.arange(f, dtype=np.int64)
        # powers g^0 .. g^(B-1) one at a time, then whole blocks at once by
        # applying the F_p-linear map "multiply by g^B" to digit vectors
        B = math.isqrt(order) + 1
        block = [1]
        for _ in range(B - 1):
            block.append(self._mul_slow(block[-1], g))
        gB = self._mul_slow(block[-1], g)
        M = np.array([self.digits(self._mul_slow(gB, p**t)) for t in range(f)], dtype=np.int64)
        D = np.array([self.digits(c) for c in block], dtype=np.int64)
        chunks = []
        for _ in range(-(-order // B)):
            chunks.append(D @ pw)
            D = (D @ M) % p
        exp = np.concatenate(chunks)[:order].astype(np.int64)
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(order, dtype=np.int64)
        self._exp_np = np.concatenate([exp, exp])
        self._log_np = log
        one_plus = self._vadd_digits(exp, np.ones_like(exp))
        zech = log[one_plus].copy()
        zech[one_plus == 0] = -1
        self._zech_np = zech
        if q <= SCALAR_TABLE_LIMIT:
            self._exp = self._exp_np.tolist()
            self._log = log.tolist()
            self._zech = zech.tolist()
        else:
            self._exp, self._log, self._zech = self._exp_np, log, zech
        self._tables_built = True

    def _ensure(self):
        if not self._tables_built:
            self._build_tables()

    # scalar arithmetic on codes ---------------------------------------
    def add(self, a: int, b: int) -> int:
        p = self.p
        if self.f == 1:
            return (a + b) % p
        if p == 2:
            return a ^ b
        if a == 0:
            return b
        if b == 0:
            return a
        self._ensure()
        la = int(self._log[a])
        d = (int(self._log[b]) - la) % (self.q - 1)
        z = int(self._zech[d])
        if z < 0:
            return 0
        return int(self._exp[la + z])

    def neg(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        if self.f == 1:
            return self.p - a
        self._ensure()
        return int(self._exp[int(self._log[a]) + (self.q - 1) // 2])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.f == 1:
            return a * b % self.p
        self._ensure()
        return int(self._exp[int(self._log[a]) + int(self._log[b])])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"inverse of 0 in {self}")
        if self.f == 1:
            return pow(a, self.p - 2, self.p)
        self._ensure()
        return int(self._exp[(self.q - 1 - int(self._log[a])) % (self.q - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise DivisionByZero(f"0 ** {e} in {self}")
            return 1 if e == 0 else 0
        if self.f == 1:
            return pow(a, e % (self.p - 1), self.p)
        self._ensure()
        return int(self._exp[(int(self._log[a]) * e) % (self.q - 1)])

    def log(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("log of 0")
        self._ensure()
        return int(self._log[a])

    def frobenius(self, a: int, k: int = 1) -> int:
        """``a ** (p**k)``, the absolute Frobenius iterated ``k`` times."""
        return self.pow(a, self.p ** (k % self.f))

    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        return self.log(a) % 2 == 0

    def sqrt(self, a: int) -> int | None:
        """One square root of ``a`` or None; deterministic."""
        if a == 0:
            return 0
        if self.p == 2:
            return self.pow(a, self.q // 2)
        la = self.log(a)
        if la % 2:
            return None
        self._ensure()
        return int(self._exp[la // 2])

    def trace(self, a: int) -> int:
        """Absolute trace F_q -> F_p as a residue mod p."""
        t = 0
        x = a
        for _ in range(self.f):
            t = self.add(t, x)
            x = self.pow(x, self.p)
        assert t < self.p
        return t

    def relative_trace(self, a: int) -> int:
        """Trace to the base field of an extension (a code of this field)."""
        base = self.base if self.base is not None else self
        n = self.f // base.f
        t, x = 0, a
        for _ in range(n):
            t = self.add(t, x)
            x = self.pow(x, base.q)
        return t

    # vectorized arithmetic on int64 code arrays -----------------------
    def _vadd_digits(self, a, b):
        p = self.p
        if p == 2:
            return a ^ b
        if self.f == 1:
            return (a + b) % p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        pw = 1
        for _ in range(self.f):
            out += (((a // pw) % p + (b // pw) % p) % p) * pw
            pw *= p
        return out

    def vadd(self, a, b):
        return self._vadd_digits(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        p = self.p
        if p == 2:
            return a.copy()
        if self.f == 1:
            return (-a) % p
        out = np.zeros_like(a)
        pw = 1
        for _ in range(self.f):
            out += ((-(a // pw)) % p) * pw
            pw *= p
        return out

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.f == 1:
            return (a * b) % self.p
        self._ensure()
        out = self._exp_np[self._log_np[a] + self._log_np[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vpow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        self._ensure()
        out = self._exp_np[(self._log_np[a] * e) % (self.q - 1)]
        if e == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, out)

    def vquadratic_character(self, a):
        """Legendre symbol: 0, 1 or -1 elementwise (every element is a square when p = 2)."""
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return np.where(a == 0, 0, 1)
        self._ensure()
        chi = 1 - 2 * (self._log_np[a] % 2)
        return np.where(a == 0, 0, chi)

    def vsqrt(self, a):
        """A square root of each square; undefined entries for non-squares."""
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return self.vpow(a, self.q // 2)
        self._ensure()
        out = self._exp_np[self._log_np[a] // 2]
        return np.where(a == 0, 0, out)

    def veval(self, coeffs: Sequence[int], xs):
        """Horner evaluation of an ascending code polynomial at every x."""
        xs = np.asarray(xs, dtype=np.int64)
        acc = np.zeros_like(xs)
        for c in reversed(coeffs):
            acc = self.vadd(self.vmul(acc, xs), np.full_like(xs, c))
        return acc

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    # polynomial product via integer convolutions of digit planes ---------
    def poly_mul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if a.size == 0 or b.size == 0:
            return np.zeros(0, dtype=np.int64)
        p, f = self.p, self.f
        if f == 1:
            return np.convolve(a, b) % p
        A = [(a // p**t) % p for t in range(f)]
        Bp = [(b // p**t) % p for t in range(f)]
        n = a.size + b.size - 1
        C = np.zeros((2 * f - 1, n), dtype=np.int64)
        for s in range(f):
            for t in range(f):
                C[s + t] += np.convolve(A[s], Bp[t])
        C %= p
        # x^f = -(m_0 + ... + m_{f-1} x^{f-1})
        for k in range(2 * f - 2, f - 1, -1):
            top = C[k]
            if top.any():
                for i in range(f):
                    if self.modulus[i]:
                        C[k - f + i] -= self.modulus[i] * top
                C[k - f : k] %= p
        pw = p ** np.arange(f, dtype=np.int64)
        return (C[:f] % p).T @ pw

    # embedding from the base of an extension ---------------------------
    def embed(self, a: int) -> int:
        """Image of a base-field code in this extension."""
        if self._embed is None:
            return a
        return int(self._embed[a])

    def embed_array(self, a):
        a = np.asarray(a, dtype=np.int64)
        return a if self._embed is None else self._embed[a]


@functools.lru_cache(maxsize=None)
def make_field(p: int, f: int = 1) -> GF:
    """F_{p^f} with the lexicographically smallest irreducible modulus."""
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if f < 1:
        raise ValueError("extension degree must be >= 1")
    return GF(p, smallest_irreducible(p, f))


FieldDesc = GF


@functools.lru_cache(maxsize=None)
def extension(base: GF, n: int) -> GF:
    """F_{q^n} over ``base`` = F_q, with a stored embedding of F_q.

    The big field uses its own canonical modulus of degree ``f*n`` over Z/p;
    F_q sits inside it through the smallest root of ``base.modulus``.
    """
    if n < 1:
        raise ValueError("extension degree must be >= 1")
    p = base.p
    E = GF(p, smallest_irreducible(p, base.f * n))
    E.base = base
    if base.f == 1:
        E._embed = None  # prime field codes coincide
        return E
    # roots of base.modulus lie in the subfield of order q: the zero element and
    # the (Q-1)/(q-1)-th powers of the generator
    E._ensure()
    step = (E.q - 1) // (base.q - 1)
    sub = np.sort(E._exp_np[: E.q - 1][::step])
    vals = E.veval(list(base.modulus), sub)
    theta = int(sub[np.nonzero(vals == 0)[0][0]])
    powers = [1]
    for _ in range(base.f - 1):
        powers.append(E.mul(powers[-1], theta))
    table = np.zeros(base.q, dtype=np.int64)
    codes = np.arange(base.q, dtype=np.int64)
    for t in range(base.f):
        digit = (codes // p**t) % p
        table = E.vadd(table, E.vmul(digit, np.full_like(codes, powers[t])))
    E._embed = table
    return E


# -- element wrapper ----------------------------------------------------------

@dataclass(frozen=True)
class FqElem:
    """An element of a :class:`GF` with operator overloading."""

    field: GF
    code: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.digits(self.code)

    def _other(self, other) -> int:
        if isinstance(other, FqElem):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.code
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return FqElem(self.field, self.field.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return FqElem(self.field, self.field.sub(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        return FqElem(self.field, self.field.sub(b, self.code))

    def __mul__(self, other):
        b = self._other(other)
        return FqElem(self.field, self.field.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return FqElem(self.field, self.field.div(self.code, b))

    def __neg__(self):
        return FqElem(self.field, self.field.neg(self.code))

    def __pow__(self, e: int):
        return FqElem(self.field, self.field.pow(self.code, e))

    def __bool__(self):
        return self.code != 0

    def __eq__(self, other):
        if isinstance(other, int):
            return self.code == other % self.field.p and self.code < self.field.p
        return isinstance(other, FqElem) and self.field == other.field and self.code == other.code

    def __hash__(self):
        return hash((self.field, self.code))

    def __repr__(self):
        return f"{self.field}({list(self.coeffs)})"

    def inverse(self) -> "FqElem":
        return FqElem(self.field, self.field.inv(self.code))


def field_arithmetic(a: FqElem, b: FqElem, op: str) -> FqElem:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    ops = {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}
    if op not in ops:
        raise ValueError(f"unknown operation {op!r}")
    return ops[op](b)


def frobenius_power(a: FqElem, k: int, q: int | None = None) -> FqElem:
    """``a ** (q**k)``; ``q`` defaults to the order of the base of the tower."""
    F = a.field
    q = F.frobenius_base if q is None else q
    if a.code == 0 or F.q == 2:
        return a
    # on F_Q^* the exponent only matters mod Q-1
    return FqElem(F, F.pow(a.code, pow(q, k, F.q - 1)))


def trace_to_prime(a: FqElem) -> int:
    return a.field.trace(a.code)


def enumerate_field(F: GF) -> Iterator[FqElem]:
    for code in range(F.q):
        yield FqElem(F, code)
