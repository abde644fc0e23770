"""Jensen-type identities for rational functions over Q, and the counting
function N_f(0, r) of a product vanishing at 1/p to order [log_p x].

Boundary integrals use the trapezoid rule on the circle, doubling the number
of nodes until two successive estimates agree; the integrand is periodic and
smooth, so this converges geometrically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import SingularityOnContour, ZeroOnBoundary
from .ff import prime_factors
from .zeta import _gcd, _poly_divmod, _trimq, aberth_roots, squarefree_parts

CONTOUR_GUARD = 1e-6


def _lowest(a: Sequence[Fraction]) -> int:
    for i, c in enumerate(a):
        if c:
            return i
    raise ValueError("zero polynomial")


@dataclass
class RatFnC:
    """num/den over Q, ascending coefficients, coprime with den monic."""

    num: list
    den: list
    _roots: dict = dc_field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        num, den = _trimq(self.num), _trimq(self.den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            raise ValueError("the zero function has no divisor")
        g = _gcd(num, den)
        if len(g) > 1:
            num = _trimq(_poly_divmod(num, g)[0])
            den = _trimq(_poly_divmod(den, g)[0])
        lc = den[-1]
        self.num = [c / lc for c in num]
        self.den = [c / lc for c in den]

    @classmethod
    def from_ints(cls, num: Sequence, den: Sequence = (1,)) -> "RatFnC":
        return cls([Fraction(c) for c in num], [Fraction(c) for c in den])

    def scaled(self, factor: complex) -> "ComplexScaled":
        return ComplexScaled(self, factor)

    @property
    def order_at_zero(self) -> int:
        return _lowest(self.num) - _lowest(self.den)

    @property
    def leading_coefficient(self) -> Fraction:
        """c in f(z) = c z^ord + ... at the origin."""
        return self.num[_lowest(self.num)] / self.den[_lowest(self.den)]

    def __call__(self, z):
        n = np.polyval([float(c) for c in reversed(self.num)], z)
        d = np.polyval([float(c) for c in reversed(self.den)], z)
        return n / d

    def log_abs(self, z):
        n = np.polyval([float(c) for c in reversed(self.num)], z)
        d = np.polyval([float(c) for c in reversed(self.den)], z)
        return np.log(np.abs(n)) - np.log(np.abs(d))

    def _divisor_part(self, poly) -> list[tuple[complex, int]]:
        """Nonzero roots with multiplicities: exact squarefree split, numeric roots."""
        low = _lowest(poly)
        core = poly[low:]
        out = []
        for factor, mult in squarefree_parts(core):
            for r in aberth_roots([float(c) for c in factor]):
                out.append((r, mult))
        return out

    def zeros(self) -> list[tuple[complex, int]]:
        if "zeros" not in self._roots:
            self._roots["zeros"] = self._divisor_part(self.num)
        return self._roots["zeros"]

    def poles(self) -> list[tuple[complex, int]]:
        if "poles" not in self._roots:
            self._roots["poles"] = self._divisor_part(self.den)
        return self._roots["poles"]


@dataclass
class ComplexScaled:
    """u * f for a complex constant u (no longer rational)."""

    base: RatFnC
    factor: complex

    def log_abs(self, z):
        return self.base.log_abs(z) + math.log(abs(self.factor))


def counting_function(zeros: Sequence[tuple[complex, int]], r: float) -> float:
    """N(0, r) = sum over 0 < |x| < r of ord_x * log(r/|x|)."""
    if r <= 0:
        raise ValueError("r must be positive")
    total = 0.0
    for x, k in zeros:
        ax = abs(x)
        if ax == 0:
            raise ValueError("a zero at the origin enters through v_0, not N(0, r)")
        if abs(ax - r) < 1e-12 * max(1.0, r):
            raise ZeroOnBoundary(f"zero {x} lies on |z| = {r}")
        if ax < r:
            total += k * math.log(r / ax)
    return total


def _primes_upto(n: int) -> list[int]:
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\x00\x00"
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(n + 1) if sieve[i]]


def chebyshev_psi(x: float) -> float:
    """sum over prime powers p^k <= x of log p."""
    total = 0.0
    for p in _primes_upto(int(math.floor(x))):
        pk = p
        while pk <= x:
            total += math.log(p)
            pk *= p
    return total


def psi_product_zeros(x: float) -> list[tuple[float, int]]:
    """Zeros 1/p of prod_{p <= x} (1 - p z)^[log_p x]."""
    out = []
    for p in _primes_upto(int(math.floor(x))):
        k = 0
        while p ** (k + 1) <= x:
            k += 1
        out.append((1.0 / p, k))
    return out


def psi_identity_check(x: float) -> tuple[float, float, float]:
    if x < 2:
        raise ValueError("x must be >= 2")
    nf = counting_function(psi_product_zeros(x), 1.0)
    ps = chebyshev_psi(x)
    return nf, ps, abs(nf - ps)


def boundary_mean(f, r: float, tol: float = 1e-9, max_nodes: int = 1 << 20) -> float:
    """(1/2 pi) * integral of -log|f(r e^{i theta})| d theta."""
    n = 64
    theta = 2 * np.pi * np.arange(n) / n
    prev = float(-np.mean(f.log_abs(r * np.exp(1j * theta))))
    while n < max_nodes:
        # the doubled rule reuses the old nodes and adds the midpoints
        mid = 2 * np.pi * (np.arange(n) + 0.5) / n
        new_vals = -np.mean(f.log_abs(r * np.exp(1j * mid)))
        cur = 0.5 * (prev + float(new_vals))
        n *= 2
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    return prev


def _guard_contour(f: RatFnC, r: float) -> None:
    for x, _ in f.zeros() + f.poles():
        if abs(abs(x) - r) < CONTOUR_GUARD:
            raise SingularityOnContour(f"{x} lies within {CONTOUR_GUARD} of |z| = {r}")


def _interior_sum(f: RatFnC, r: float) -> float:
    total = 0.0
    for x, k in f.zeros():
        if abs(x) < r:
            total += k * math.log(r / abs(x))
    for x, k in f.poles():
        if abs(x) < r:
            total -= k * math.log(r / abs(x))
    return total


def jensen_terms(f: RatFnC, r: float, scale: complex = 1.0) -> dict:
    _guard_contour(f, r)
    g = f if scale == 1.0 else f.scaled(scale)
    c = abs(complex(float(f.leading_coefficient)) * scale)
    return {
        "origin": f.order_at_zero * math.log(r),
        "interior": _interior_sum(f, r),
        "boundary": boundary_mean(g, r),
        "rhs": -math.log(c),
    }


def jensen_check(f: RatFnC, r: float, scale: complex = 1.0) -> float:
    t = jensen_terms(f, r, scale)
    return abs(t["origin"] + t["interior"] + t["boundary"] - t["rhs"])


def padic_log_sum(c: Fraction) -> float:
    """sum over primes p of v_p(c) log p, exactly from the factorization of c."""
    c = Fraction(c)
    if c == 0:
        raise ValueError("c must be nonzero")
    total = 0.0
    for n, sign in ((abs(c.numerator), 1), (c.denominator, -1)):
        for p in prime_factors(n):
            v = 0
            while n % p == 0:
                n //= p
                v += 1
            total += sign * v * math.log(p)
    return total


def rational_pj_check(f: RatFnC, r: float) -> float:
    t = jensen_terms(f, r)
    return abs(padic_log_sum(f.leading_coefficient) + t["origin"] + t["interior"] + t["boundary"])


def random_corpus(count: int = 50, seed: int = 0, max_deg: int = 4,
                  radii: Sequence[float] = (0.7, 1.3), margin: float = 0.05) -> list[tuple[RatFnC, float]]:
    """Seeded rational functions with small rational coefficients, contour kept clear."""
    import random

    rng = random.Random(seed)
    out = []
    while len(out) < count:
        r = radii[len(out) % len(radii)]
        dn, dd = rng.randint(0, max_deg), rng.randint(0, max_deg)
        num = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(dn + 1)]
        den = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(dd)] + [Fraction(1)]
        if num[-1] == 0 or not any(num):
            continue
        try:
            f = RatFnC(num, den)
        except ValueError:
            continue
        if any(abs(abs(x) - r) < margin for x, _ in f.zeros() + f.poles()):
            continue
        out.append((f, r))
    return out
