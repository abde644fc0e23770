"""Zeta functions of curves through their L-polynomials.

Everything here is exact integer or rational arithmetic except the numeric
root finder and the residues, which return floats.

With u = q^(-s),

    Z(u) = L(u) / ((1 - u)(1 - q u)),      zeta_C(s) = u^(-(g-1)) Z(u),

and the reciprocal roots omega of L give N(n) = q^n + 1 - sum omega^n.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    EulerMismatch,
    FactorizationObstruction,
    FunctionalEquationError,
    NonConvergence,
    NonIntegralCoefficient,
    NonPositive,
)


@dataclass(frozen=True)
class LPoly:
    """L(X) = c_0 + c_1 X + ... + c_{2g} X^{2g} with integer coefficients."""

    q: int
    g: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if len(c) != 2 * self.g + 1:
            raise ValueError(f"expected {2 * self.g + 1} coefficients, got {len(c)}")
        if c[0] != 1:
            raise ValueError("L(0) must be 1")

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            if i and abs(c) == 1:
                parts.append(("-" if c < 0 else "+") + mono)
            else:
                parts.append(f"{c:+d}" + mono)
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


def one(q: int) -> LPoly:
    return LPoly(q, 0, (1,))


# -- power sums -----------------------------------------------------------------

def power_sums(L: LPoly, nmax: int) -> list[int]:
    """s_1..s_nmax with s_k = sum omega^k (Newton's identities, integers only).

    For L = prod (1 - omega X) = sum c_i X^i:
    s_k = -(k c_k + sum_{i=1}^{k-1} c_i s_{k-i}), with c_i = 0 past 2g.
    """
    c = L.coeffs
    s = [0] * (nmax + 1)
    for k in range(1, nmax + 1):
        acc = k * c[k] if k < len(c) else 0
        for i in range(1, min(k, len(c))):
            acc += c[i] * s[k - i]
        s[k] = -acc
    return s[1:]


def predict_counts(L: LPoly, n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    return L.q**n + 1 - power_sums(L, n)[-1]


def predict_series(L: LPoly, nmax: int) -> list[int]:
    s = power_sums(L, nmax)
    return [L.q**n + 1 - s[n - 1] for n in range(1, nmax + 1)]


def _from_power_sums(s: Sequence, deg: int) -> list:
    """Coefficients of prod (1 - w X) from its power sums (inverse Newton)."""
    c = [Fraction(1)]
    for k in range(1, deg + 1):
        acc = s[k - 1] + sum(c[i] * s[k - i - 1] for i in range(1, k))
        c.append(Fraction(-acc, k))
    return c


def _integral(c: Sequence[Fraction], what: str) -> tuple[int, ...]:
    out = []
    for i, x in enumerate(c):
        if Fraction(x).denominator != 1:
            raise NonIntegralCoefficient(f"{what}: coefficient c_{i} = {x} is not an integer")
        out.append(int(x))
    return tuple(out)


def l_polynomial(counts: Sequence[int], q: int, g: int) -> LPoly:
    """L from N(1..2g); further counts, if supplied, must agree with the prediction."""
    if len(counts) < 2 * g:
        raise ValueError(f"need {2 * g} counts, got {len(counts)}")
    s = [q**n + 1 - counts[n - 1] for n in range(1, 2 * g + 1)]
    coeffs = _integral(_from_power_sums(s, 2 * g), "l_polynomial")
    L = LPoly(q, g, coeffs)
    if not functional_equation_check(L):
        raise FunctionalEquationError(f"{L} is not symmetric for q={q}, g={g}")
    extra = list(counts[2 * g:])
    if extra and predict_series(L, len(counts))[2 * g:] != extra:
        raise FunctionalEquationError("counts beyond N(2g) disagree with the L-polynomial")
    return L


def l_polynomial_symmetric(counts: Sequence[int], q: int, g: int) -> LPoly:
    """L from N(1..g) alone, completing c_{g+1..2g} by c_{2g-i} = q^(g-i) c_i.

    Counts past N(g) are not used to build L but must agree with it, so the
    symmetry assumption is tested whenever at least g+1 counts are given.
    """
    if len(counts) < g:
        raise ValueError(f"need {g} counts, got {len(counts)}")
    if len(counts) >= 2 * g:
        return l_polynomial(counts, q, g)
    s = [q**n + 1 - counts[n - 1] for n in range(1, g + 1)]
    low = _integral(_from_power_sums(s, g), "l_polynomial_symmetric")
    coeffs = list(low) + [q ** (g - i) * low[i] for i in range(g - 1, -1, -1)]
    L = LPoly(q, g, tuple(coeffs))
    extra = list(counts[g:])
    if extra and predict_series(L, len(counts))[g:] != extra:
        raise FunctionalEquationError("counts beyond N(g) contradict the symmetric completion")
    return L


def functional_equation_check(L: LPoly) -> bool:
    g, q, c = L.g, L.q, L.coeffs
    return all(c[2 * g - i] == q ** (g - i) * c[i] for i in range(g + 1))


def base_change(L: LPoly, n: int) -> LPoly:
    """L-polynomial over F_{q^n}: reciprocal roots omega^n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    s = power_sums(L, 2 * L.g * n)
    sn = [s[k * n - 1] for k in range(1, 2 * L.g + 1)]
    return LPoly(L.q**n, L.g, _integral(_from_power_sums(sn, 2 * L.g), "base_change"))


# -- class number, divisors ---------------------------------------------------------

def class_number(L: LPoly) -> int:
    h = L(1)
    if h <= 0:
        raise NonPositive(f"L(1) = {h}")
    return h


def kappa(L: LPoly) -> Fraction:
    """Volume of the degree-zero idele classes, h/(q-1)."""
    return Fraction(class_number(L), L.q - 1)


def _series_mul(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    out = [0] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j, y in enumerate(b[: n + 1 - i]):
                out[i + j] += x * y
    return out


def zeta_series(L: LPoly, nmax: int) -> list[int]:
    """Coefficients of L(u)/((1-u)(1-qu)) through u^nmax."""
    geo = [(L.q ** (k + 1) - 1) // (L.q - 1) for k in range(nmax + 1)]  # 1/((1-u)(1-qu))
    return _series_mul(list(L.coeffs), geo, nmax)


def euler_series(a: dict[int, int], nmax: int) -> list[int]:
    """Coefficients of prod_d (1 - u^d)^(-a_d) through u^nmax."""
    out = [1] + [0] * nmax
    for d, ad in a.items():
        if d > nmax or ad == 0:
            continue
        # (1 - u^d)^(-a) = sum_j C(a + j - 1, j) u^(d j)
        factor = [0] * (nmax + 1)
        for j in range(nmax // d + 1):
            factor[d * j] = math.comb(ad + j - 1, j)
        out = _series_mul(out, factor, nmax)
    return out


def divisor_counts(L: LPoly, nmax: int, places: dict[int, int] | None = None) -> list[int]:
    """b_0..b_nmax; cross-checked against the Euler product when ``places`` is given."""
    b = zeta_series(L, nmax)
    if places is not None:
        missing = [d for d in range(1, nmax + 1) if d not in places]
        if missing:
            raise ValueError(f"place table lacks degrees {missing}")
        e = euler_series(places, nmax)
        if e != b:
            raise EulerMismatch(f"L gives {b}, places give {e}")
    return b


def log_derivative_check(L: LPoly, nmax: int, counts: Sequence[int] | None = None) -> bool:
    """u Z'(u) = Z(u) * sum_{n>=1} N(n) u^n as power series through u^nmax."""
    Z = zeta_series(L, nmax)
    lhs = [k * Z[k] for k in range(nmax + 1)]
    N = list(counts) if counts is not None else predict_series(L, nmax)
    if len(N) < nmax:
        raise ValueError("not enough counts")
    rhs = _series_mul(Z, [0] + N[:nmax], nmax)
    return lhs == rhs


# -- zeta as a rational function ----------------------------------------------------

@dataclass(frozen=True)
class ZetaRat:
    """zeta_C(s) = u^(-(g-1)) L(u) / ((1-u)(1-qu)) with u = q^(-s)."""

    L: LPoly

    @property
    def q(self) -> int:
        return self.L.q

    @property
    def g(self) -> int:
        return self.L.g

    def of_u(self, u: complex) -> complex:
        return u ** (-(self.g - 1)) * self.L(u) / ((1 - u) * (1 - self.q * u))

    def __call__(self, s: complex) -> complex:
        return self.of_u(cmath.exp(-s * math.log(self.q)))


def residue_at_pole(Z: ZetaRat, which: str = "s=1") -> float:
    """Residue in s; near the pole u0, u - u0 ~ -u0 log(q) (s - s0)."""
    q, g, L = Z.q, Z.g, Z.L
    logq = math.log(q)
    if which == "s=1":
        u0 = Fraction(1, q)
        # (1 - q u) = -q (u - u0)  =>  residue = u0^-(g-1) L(u0) / ((1-u0) * q * u0 * log q)
        val = u0 ** (-(g - 1)) * L(u0) / ((1 - u0) * q * u0)
    elif which == "s=0":
        u0 = Fraction(1)
        # (1 - u) = -(u - 1)  =>  residue = L(1) / ((1 - q) * (-1) * (-u0 log q))
        val = L(u0) / (1 - q * u0)
    else:
        raise ValueError("which must be 's=1' or 's=0'")
    if val == 0:
        raise ValueError("L vanishes at the pole")
    return float(val) / logq


# -- Riemann hypothesis: numeric ---------------------------------------------------

def aberth_roots(coeffs: Sequence[complex], max_iter: int = 200, tol: float = 1e-14) -> list[complex]:
    """All roots of sum coeffs[i] z^i by Aberth-Ehrlich iteration."""
    c = [complex(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    n = len(c) - 1
    if n < 1:
        return []
    lead = c[-1]
    c = [x / lead for x in c]
    dc = [i * c[i] for i in range(1, n + 1)]
    radius = 1 + max(abs(x) for x in c[:-1])
    z = [radius * cmath.exp(2j * math.pi * (k + 0.25) / n) for k in range(n)]

    def horner(poly, x):
        acc = 0j
        for a in reversed(poly):
            acc = acc * x + a
        return acc

    absc = [abs(x) for x in c]
    eps = 2.0**-52
    for _ in range(max_iter):
        biggest = 0.0
        settled = True
        for k in range(n):
            pk = horner(c, z[k])
            # backward-error test: |p(z)| at the level of rounding noise
            if abs(pk) > 4 * n * eps * horner(absc, abs(z[k])).real:
                settled = False
            if pk == 0:
                continue
            ratio = pk / horner(dc, z[k])
            s = sum(1 / (z[k] - z[j]) for j in range(n) if j != k)
            step = ratio / (1 - ratio * s)
            z[k] -= step
            biggest = max(biggest, abs(step) / max(1.0, abs(z[k])))
        if biggest < tol or settled:
            return z
    raise NonConvergence(f"no convergence after {max_iter} iterations")


def reciprocal_roots(L: LPoly) -> list[complex]:
    """omega_nu, i.e. roots of the reversed polynomial X^{2g} L(1/X).

    Repeated factors are split off exactly first; iterating on a multiple root
    only reaches about sqrt(eps) relative accuracy.
    """
    if L.g == 0:
        return []
    out = []
    for part, mult in squarefree_parts(list(reversed(L.coeffs))):
        roots = aberth_roots([float(c) for c in part])
        out.extend(r for r in roots for _ in range(mult))
    return out


def rh_check_numeric(L: LPoly) -> float:
    """max | |omega| - sqrt(q) | over the reciprocal roots."""
    if L.g == 0:
        return 0.0
    rq = math.sqrt(L.q)
    return max(abs(abs(w) - rq) for w in reciprocal_roots(L))


def rh_numeric_passes(L: LPoly, tol: float = 1e-9) -> bool:
    return rh_check_numeric(L) <= tol


# -- Riemann hypothesis: exact ------------------------------------------------------

def real_weil_polynomial(L: LPoly) -> list[int]:
    """h(t) = prod (t - a_j), ascending, where L(X) = prod (1 - a_j X + q X^2).

    X^{-g} L(X) = H(qX + 1/X) with H(t) = h(-t) up to sign conventions; we
    solve for H from the top coefficient down and re-expand to verify.
    """
    g, q, c = L.g, L.q, L.coeffs
    # X^g H(qX + 1/X) = sum_k H_k (qX^2 + 1)^k X^{g-k}; coefficient of X^{g-k+2j}
    # inside (qX^2+1)^k X^{g-k} is C(k, j) q^j.  Match c_i for i = 0..g.
    H = [0] * (g + 1)
    H[g] = 1
    for i in range(1, g + 1):
        k = g - i
        acc = c[i]
        # contributions to X^i from H_{k'} with k' > k: need g - k' + 2j = i
        for kk in range(k + 1, g + 1):
            j2 = i - (g - kk)
            if j2 % 2 == 0 and 0 <= j2 // 2 <= kk:
                acc -= H[kk] * math.comb(kk, j2 // 2) * q ** (j2 // 2)
        H[k] = acc
    # re-expand and compare with all 2g+1 coefficients
    full = [0] * (2 * g + 1)
    for k in range(g + 1):
        for j in range(k + 1):
            full[g - k + 2 * j] += H[k] * math.comb(k, j) * q**j
    if tuple(full) != L.coeffs:
        raise FactorizationObstruction(f"{L} is not of the form X^g H(qX + 1/X)")
    # (1 - aX + qX^2) = X (qX + 1/X - a), so H(t) = prod (t - a_j) directly
    return H


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and any(a):
        shift = len(a) - len(b)
        f = a[-1] / b[-1]
        q[shift] = f
        for i, bc in enumerate(b):
            a[shift + i] -= f * bc
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return q, a


def _trimq(a):
    a = [Fraction(x) for x in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def _gcd(a, b):
    a, b = _trimq(a), _trimq(b)
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, _trimq(r)
    return [x / a[-1] for x in a]


def _deriv(a):
    return [i * a[i] for i in range(1, len(a))]


def squarefree_parts(h: Sequence[int]) -> list[tuple[list[Fraction], int]]:
    """Yun's algorithm over Q: pairs (squarefree factor, multiplicity)."""
    a = _trimq(h)
    out = []
    if len(a) <= 1:
        return out
    b = _gcd(a, _deriv(a))
    c, _ = _poly_divmod(a, b)
    d = _trimq([x - y for x, y in _zip_long(_poly_divmod(_deriv(a), b)[0], _deriv(c))])
    i = 1
    c = _trimq(c)
    while len(c) > 1:
        y = _gcd(c, d) if d else c
        if len(y) > 1:
            out.append((y, i))
        c = _trimq(_poly_divmod(c, y)[0])
        d = _trimq([x - z for x, z in _zip_long(_poly_divmod(d, y)[0], _deriv(c))]) if d else []
        i += 1
    return out


def _zip_long(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]


def sturm_sequence(p: list[Fraction]) -> list[list[Fraction]]:
    seq = [_trimq(p), _trimq(_deriv(p))]
    while len(seq[-1]) > 1:
        _, r = _poly_divmod(seq[-2], seq[-1])
        r = _trimq(r)
        if not r:
            break
        seq.append([-x for x in r])
    return seq


def _sign_at(p: list[Fraction], A: Fraction, B: Fraction, q: int) -> int:
    """Sign of p(A + B*sqrt(q)), computed exactly."""
    # accumulate value as U + V sqrt(q)
    U, V = Fraction(0), Fraction(0)
    for c in reversed(p):
        U, V = U * A + V * B * q + c, U * B + V * A
    return _sign_surd(U, V, q)


def _sign_surd(U: Fraction, V: Fraction, q: int) -> int:
    su = (U > 0) - (U < 0)
    sv = (V > 0) - (V < 0)
    if sv == 0:
        return su
    if su == 0 or su == sv:
        return sv
    # opposite signs: compare U^2 with V^2 q
    d = U * U - V * V * q
    return su if d > 0 else (-su if d < 0 else 0)


def _variations(seq, A, B, q) -> int:
    signs = [s for s in (_sign_at(p, A, B, q) for p in seq) if s != 0]
    return sum(1 for x, y in zip(signs, signs[1:]) if x != y)


def roots_in_interval(p: Sequence[int | Fraction], q: int) -> int:
    """Number of distinct real roots of p in [-2 sqrt q, 2 sqrt q] (Sturm)."""
    p = _trimq(p)
    r = math.isqrt(q)
    if r * r == q:
        lo, hi = (Fraction(-2 * r), Fraction(0)), (Fraction(2 * r), Fraction(0))
        sq = 1
    else:
        lo, hi = (Fraction(0), Fraction(-2)), (Fraction(0), Fraction(2))
        sq = q
    if len(p) <= 1:
        return 0
    seq = sturm_sequence(p)
    count = _variations(seq, *lo, sq) - _variations(seq, *hi, sq)
    if _sign_at(p, *lo, sq) == 0:
        count += 1
    return count


def rh_check_exact(L: LPoly) -> bool:
    if L.g == 0:
        return True
    if not functional_equation_check(L):
        raise FunctionalEquationError(f"{L} fails the functional equation")
    H = real_weil_polynomial(L)
    total = 0
    for factor, mult in squarefree_parts(H):
        total += mult * roots_in_interval(factor, L.q)
    return total == L.g


def weil_polynomial_from_pairs(q: int, a: Sequence[int]) -> LPoly:
    """prod_j (1 - a_j X + q X^2)."""
    c = [1]
    for aj in a:
        nxt = [0] * (len(c) + 2)
        for i, x in enumerate(c):
            nxt[i] += x
            nxt[i + 1] -= aj * x
            nxt[i + 2] += q * x
        c = nxt
    return LPoly(q, len(a), tuple(c))
