"""The point-counting function psi_C(x) = sum_{n <= log_q x} N(n).

Three evaluations are provided: directly from a place table, from the closed
form in the reciprocal roots of L, and from the Fourier-series explicit
formula summed over the zeros and poles of zeta_C.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .curve import PlaceTable
from .errors import InsufficientTable, JumpPoint
from .zeta import LPoly, power_sums, reciprocal_roots


@dataclass(frozen=True)
class PsiQuery:
    q: int
    x: float

    @property
    def M(self) -> int:
        return floor_log(self.x, self.q)


def floor_log(x, q: int) -> int:
    """floor(log_q x) for x >= 1, exact for rational x."""
    if x < 1:
        raise ValueError("x must be >= 1")
    x = Fraction(x)
    M = 0
    while q ** (M + 1) <= x:
        M += 1
    return M


def is_jump(x, q: int) -> bool:
    return Fraction(x) == Fraction(q) ** floor_log(x, q)


def psi_direct(T: PlaceTable, q: int, x) -> int:
    M = floor_log(x, q)
    if M > T.B:
        raise InsufficientTable(f"need places up to degree {M}, table has {T.B}")
    by_counts = sum(T.count(n) for n in range(1, M + 1))
    by_places = sum((M // d) * d * T.a[d] for d in range(1, M + 1))
    if by_counts != by_places:
        raise AssertionError("place table is internally inconsistent")  # pragma: no cover
    return by_counts


def psi_closed_float(L: LPoly, x) -> complex:
    M = floor_log(x, L.q)
    q = L.q
    total = (q**M - 1) / (1 - 1 / q) + M
    for w in reciprocal_roots(L):
        total -= (w**M - 1) / (1 - 1 / w)
    return total


def psi_closed(L: LPoly, x, check: bool = True) -> int:
    """Exact value: sum_nu (w^M - 1)/(1 - 1/w) = sum_nu w (1 + ... + w^(M-1)) = s_1 + ... + s_M."""
    M = floor_log(x, L.q)
    s = power_sums(L, M) if M else []
    exact = sum(L.q**k for k in range(1, M + 1)) - sum(s) + M
    if check and L.g:
        approx = psi_closed_float(L, x)
        if abs(approx - exact) > 1e-6 * max(1.0, abs(exact)):
            raise ArithmeticError(f"closed form: exact {exact} vs floating {approx}")
    return exact


def _fourier_block(c: complex, y: float, logq: float, nterms: int, skip_zero: bool) -> complex:
    """sum_{|n| <= N} e^{2 pi i n y} / (c log q + 2 pi i n), blocked for reproducibility."""
    total = 0j
    block = 1 << 14
    for start in range(-nterms, nterms + 1, block):
        n = np.arange(start, min(start + block, nterms + 1), dtype=np.float64)
        if skip_zero:
            n = n[n != 0]
        two_pi_n = 2 * np.pi * n
        total += complex(np.sum(np.exp(1j * two_pi_n * y) / (c * logq + 1j * two_pi_n)))
    return total


def psi_explicit_series(L: LPoly, x: float, nterms: int) -> float:
    """Sum over poles (s = 1 + 2 pi i n/log q), zeros (rho_nu + ...) and the s = 0 terms."""
    q = L.q
    if nterms < 1:
        raise ValueError("nterms must be >= 1")
    if is_jump(x, q):
        raise JumpPoint(f"x = {x} is a power of q")
    logq = math.log(q)
    y = math.log(x) / logq
    # x^(c + 2 pi i n/log q) / (c + 2 pi i n/log q) / log q = x^c e^{2 pi i n y} / (c log q + 2 pi i n)
    val = x * _fourier_block(1, y, logq, nterms, False)
    omegas = reciprocal_roots(L)
    for w in omegas:
        rho = cmath.log(w) / logq
        val -= cmath.exp(rho * math.log(x)) * _fourier_block(rho, y, logq, nterms, False)
    val += _fourier_block(0, y, logq, nterms, True) + y
    val += -0.5 - 1 / (1 - 1 / q) + sum(1 / (1 - 1 / w) for w in omegas)
    return float(val.real)


def fourier_series_check(c: float, x: float, nterms: int, q: int = 2) -> dict:
    """Both Fourier identities: q^(-c{x}) and {x}, truncated symmetrically."""
    frac = x - math.floor(x)
    if min(frac, 1 - frac) < 0.05:
        raise ValueError("{x} must stay at least 0.05 away from 0 and 1")
    logq = math.log(q)
    lhs1 = q ** (-c * frac)
    rhs1 = ((1 - q ** (-c)) * _fourier_block(c, x, logq, nterms, False)).real
    lhs2 = frac
    rhs2 = 0.5 - _fourier_block(0, x, 1.0, nterms, True).real
    return {
        "exp": (lhs1, rhs1, abs(lhs1 - rhs1)),
        "frac": (lhs2, rhs2, abs(lhs2 - rhs2)),
    }


def sample_points(q: int, count: int = 10, max_x: float = 200.0) -> list[float]:
    """Deterministic non-jump points, log_q x = M + frac with frac in [0.2, 0.8],
    spread over every level M with q^(M + 0.8) <= max_x (at least M = 0)."""
    levels = [M for M in range(64) if M == 0 or q ** (M + 0.8) <= max_x]
    pts = []
    for k in range(count):
        M = levels[k % len(levels)]
        frac = 0.2 + 0.6 * (k + 0.5) / count
        pts.append(q ** (M + frac))
    return sorted(pts)


def rh_psi_bound_ok(L: LPoly, x) -> bool:
    """|psi(x) - q^M/(1 - 1/q)| <= 3 (2g + 2) sqrt(x)."""
    M = floor_log(x, L.q)
    dev = abs(psi_closed(L, x) - L.q ** (M + 1) / (L.q - 1))
    return dev <= 3 * (2 * L.g + 2) * math.sqrt(x)
