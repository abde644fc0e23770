import cmath
import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from curvezeta.adelechar import (
    INF,
    CharExponent,
    _Quotient,
    canonical_degree_p1,
    chi_global,
    chi_global_trials,
    chi_local,
    finite_quotient_fourier,
    genus_from_canonical,
    local_expand,
    local_zeta_factor,
    pairing_nondegenerate,
    quotient_bounds,
    random_rational,
    residue_at,
    residue_sum_complex_check,
    trace_delta_check,
)
from curvezeta.curve import elliptic_curve, place_table
from curvezeta.errors import DerivativeVanishes, QuotientTooLarge
from curvezeta.ff import extension, make_field
from curvezeta.polyarith import RationalFn, UniPoly, factor, monic_irreducibles, roots
from curvezeta.zeta import LPoly, divisor_counts, euler_series, _series_mul

F2, F3, F5 = make_field(2), make_field(3), make_field(5)


def P(F, *c):
    return UniPoly(F, list(c))


def R(num, den=None):
    return RationalFn(num, den)


def residue_by_roots(f: RationalFn, Q: UniPoly) -> int:
    """Sum over the roots a of Q in F_{q^d} of num(a)/den'(a), valid for a simple pole along Q."""
    F = Q.field
    E = F if Q.degree == 1 else extension(F, Q.degree)
    lift = lambda g: UniPoly(E, [E.embed(c) for c in g.coeffs])
    num, den = lift(f.num), lift(f.den)
    dden = den.derivative()
    total = 0
    for a in roots(lift(Q)):
        total = E.add(total, E.div(num(a), dden(a)))
    # total lies in the image of F
    back = {E.embed(c): c for c in range(F.q)}
    return back[total]


def residue_at_inf_by_division(f: RationalFn) -> int:
    """-(coefficient of T^-1): the remainder r of num by den contributes lc(r)/lc(den) when deg r = deg den - 1."""
    F = f.field
    _, r = divmod(f.num, f.den)
    if r.is_zero() or r.degree != f.den.degree - 1:
        return 0
    return F.neg(F.div(r.lc, f.den.lc))


def test_local_expand_examples():
    T = P(F2, 0, 1)
    e = local_expand(R(P(F2, 1), T), T, 1)
    assert e.principal_part() == {-1: P(F2, 1)}
    e = local_expand(R(T), INF, 1)
    assert e.valuation == -1 and e.coefficient(-1) == 1
    f = R(P(F2, 1), T * P(F2, 1, 1))
    e = local_expand(f, T, 3)
    assert e.principal_part() == {-1: P(F2, 1)}
    assert [e.coefficient(n) for n in range(3)] == [P(F2, 1)] * 3


def test_local_expand_reconstructs_mod_power():
    rng = random.Random(2)
    for F in (F2, F3, F5):
        for _ in range(30):
            f = random_rational(F, rng)
            for Q, _ in factor(f.den):
                depth = 3
                e = local_expand(f, Q, depth)
                v = e.valuation
                # P^(-v) f == sum_n x_n P^(n - v) mod P^(depth - v)
                acc = UniPoly(F)
                for n, c in e.terms.items():
                    acc = acc + c * Q ** (n - v)
                mod = Q ** (depth - v)
                lhs_num = f.num * Q ** max(0, -v)
                lhs_den = f.den * Q ** max(0, v)
                assert ((acc * lhs_den - lhs_num) % mod).is_zero() or v >= depth


def test_residue_examples():
    T = P(F2, 0, 1)
    assert residue_at(R(P(F2, 1), T), T) == 1
    assert residue_at(R(P(F3, 1), P(F3, 0, 1)), INF) == F3.neg(1)
    assert residue_at(R(P(F5, 1, 2, 3)), P(F5, 1, 1)) == 0


@pytest.mark.parametrize("F", [F2, F3, F5, make_field(3, 2)])
def test_residues_against_root_sums(F):
    rng = random.Random(F.q)
    checked = 0
    for _ in range(60):
        f = random_rational(F, rng)
        for Q, mult in factor(f.den):
            if mult == 1 and Q.degree <= 3:
                assert residue_at(f, Q) == residue_by_roots(f, Q)
                checked += 1
        assert residue_at(f, INF) == residue_at_inf_by_division(f)
    assert checked > 20


@pytest.mark.parametrize("F", [F2, F3, F5])
def test_residue_theorem_in_base_field(F):
    rng = random.Random(11)
    for _ in range(80):
        f = random_rational(F, rng)
        total = residue_at(f, INF)
        for Q, _ in factor(f.den):
            total = F.add(total, residue_at(f, Q))
        assert total == 0


def test_chi_local_examples():
    T = P(F3, 0, 1)
    assert chi_local(R(P(F3, 1, 1), P(F3, 1, 1, 1)), T).k == 0  # unit at T
    f = R(P(F3, 1), T)
    assert chi_local(f, T).k == 1
    assert chi_local(f, INF).k == 2
    assert (chi_local(f, T) + chi_local(f, INF)).is_trivial()
    assert chi_local(R(P(F3, 1), T**2), INF).is_trivial()  # in T^-2 O_inf
    assert chi_local(R(UniPoly(F3)), INF).k == 0


def test_chi_global_examples():
    assert chi_global(R(P(F5, 1, 2, 3, 4))).is_trivial()
    for Q in monic_irreducibles(F3, 2):
        f = R(P(F3, 2, 1), Q)  # deg numerator = deg Q - 1
        assert chi_local(f, Q).k != 0
        assert chi_global(f).is_trivial()


@pytest.mark.parametrize("p,f", [(2, 1), (3, 1), (5, 1), (3, 2)])
def test_chi_global_random(p, f):
    assert chi_global_trials(make_field(p, f), 1000, seed=p + f) == []


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(0, 10**6))
def test_chi_local_additive(p, seed):
    F = make_field(p)
    rng = random.Random(seed)
    f, g = random_rational(F, rng), random_rational(F, rng)
    places = [INF] + [Q for Q, _ in factor(f.den)] + [Q for Q, _ in factor(g.den)]
    for v in places:
        assert chi_local(f + g, v) == chi_local(f, v) + chi_local(g, v)


def test_trace_delta_examples():
    assert trace_delta_check(P(F2, 0, 1))
    assert trace_delta_check(P(F2, 1, 1, 1))
    with pytest.raises(DerivativeVanishes):
        trace_delta_check(P(F2, 1, 0, 1))  # T^2 + 1 = (T + 1)^2 has P' = 0


@pytest.mark.parametrize("F,dmax", [(F2, 6), (F3, 4), (make_field(2, 2), 3)])
def test_trace_delta_sweep(F, dmax):
    for d in range(1, dmax + 1):
        for Q in monic_irreducibles(F, d):
            assert trace_delta_check(Q)


def test_residue_sum_complex_examples():
    assert residue_sum_complex_check([-1, 0, 1], 0) < 1e-15
    assert residue_sum_complex_check([-1, 0, 1], 1) < 1e-15
    with pytest.raises(ValueError):
        residue_sum_complex_check([-1, 0, 1], 2)


def test_residue_sum_complex_random():
    rng = np.random.default_rng(0)
    done = 0
    while done < 100:
        d = int(rng.integers(1, 7))
        m = list(rng.integers(-5, 6, d).astype(float)) + [1.0]
        r = np.roots(m[::-1])
        gaps = [abs(a - b) for a, b in itertools.combinations(r, 2)]
        if gaps and min(gaps) < 1e-3:
            continue  # keep clear of near-multiple roots
        for k in range(d):
            assert residue_sum_complex_check(m, k) < 1e-8
        done += 1


def test_local_zeta_factor_examples():
    assert local_zeta_factor(1, 0, 4) == [1, 1, 1, 1, 1]
    assert local_zeta_factor(2, 0, 5) == [1, 0, 1, 0, 1, 0]
    assert local_zeta_factor(2, 1, 6) == [0, 0, 1, 0, 1, 0, 1]


def test_local_factors_multiply_to_divisor_counts():
    E = elliptic_curve(F5, 1, 1)
    nmax = 5
    T = place_table(E, nmax)
    prod = [1] + [0] * nmax
    for d, ad in T.a.items():
        for _ in range(ad):
            prod = _series_mul(prod, local_zeta_factor(d, 0, nmax), nmax)
    assert prod == divisor_counts(LPoly(5, 1, (1, 3, 5)), nmax, T.a) == euler_series(T.a, nmax)


def dft_by_floats(F, place, N):
    """Fourier transform of the test-set indicator with complex exponentials and chi_local."""
    a, b, lo = quotient_bounds(place, N)
    Q = _Quotient(F, place, a, b)
    T = UniPoly(F, [0, 1])
    pi = Q.P if place != INF else None

    def to_fn(digits):
        if place == INF:
            # sum x_i pi^(a+i), pi = 1/T
            num = UniPoly(F)
            top = b - 1
            for i, x in enumerate(digits):
                num = num + UniPoly.constant(F, x) * T ** (top - (a + i))
            return RationalFn(num, T**top) if top >= 0 else RationalFn(num * T ** (-top))
        num = UniPoly(F)
        for i, x in enumerate(digits):
            num = num + x * pi ** (i)
        return RationalFn(num, pi ** (-a)) if a < 0 else RationalFn(num * pi**a)

    elems = list(Q.elements())
    test = list(Q.elements(lo))
    zero = 0 if place == INF else UniPoly(F)
    z = cmath.exp(2j * cmath.pi / F.p)
    out = []
    for eta in elems:
        fe = to_fn(eta)
        s = sum(z ** chi_local(to_fn(xi) * fe, place).k for xi in test)
        inside = all(c == zero for c in eta[: lo - a])
        out.append((s * Q.qv ** (-N), 1.0 if inside else 0.0))
    return out


@pytest.mark.parametrize("F,place,N", [
    (F2, "T", 2), (F3, "T", 2), (F2, INF, 2), (F3, INF, 1), (F2, "T2", 1),
])
def test_finite_quotient_fourier(F, place, N):
    if place == "T":
        place = UniPoly(F, [0, 1])
    elif place == "T2":
        place = UniPoly(F, [1, 1, 1])
    assert finite_quotient_fourier(F, place, N)
    for got, want in dft_by_floats(F, place, N):
        assert abs(got - want) < 1e-9


def test_quotient_windows():
    # chi_inf is trivial exactly on pi^2 O, which shifts the window at infinity by one
    assert quotient_bounds(INF, 2) == (-1, 3, 1)
    assert quotient_bounds(UniPoly(F2, [0, 1]), 2) == (-2, 2, 0)


def test_quotient_too_large():
    with pytest.raises(QuotientTooLarge):
        finite_quotient_fourier(F5, UniPoly(F5, [0, 1]), 5)


@pytest.mark.parametrize("F,place,N", [(F2, "T", 2), (F3, "T", 1), (F2, INF, 2), (F3, INF, 1)])
def test_pairing_nondegenerate(F, place, N):
    place = UniPoly(F, [0, 1]) if place == "T" else place
    assert pairing_nondegenerate(F, place, N)


def test_genus_zero_from_canonical():
    assert genus_from_canonical(canonical_degree_p1()) == 0


def test_char_exponent():
    assert CharExponent(7, 5).k == 2
    assert (CharExponent(3, 5) + CharExponent(2, 5)).is_trivial()
