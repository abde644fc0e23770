import math
import random

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from curvezeta.curve import elliptic_curve, place_table, projective_line
from curvezeta.errors import (
    EulerMismatch,
    FactorizationObstruction,
    FunctionalEquationError,
    NonIntegralCoefficient,
)
from curvezeta.ff import make_field
from curvezeta.zeta import (
    LPoly,
    ZetaRat,
    base_change,
    class_number,
    divisor_counts,
    euler_series,
    functional_equation_check,
    kappa,
    l_polynomial,
    l_polynomial_symmetric,
    log_derivative_check,
    power_sums,
    predict_counts,
    predict_series,
    real_weil_polynomial,
    reciprocal_roots,
    residue_at_pole,
    rh_check_exact,
    rh_check_numeric,
    roots_in_interval,
    squarefree_parts,
    weil_polynomial_from_pairs,
    zeta_series,
)

U = sympy.Symbol("u")
ELL = LPoly(5, 1, (1, 3, 5))


def sympy_series(expr, n):
    s = sympy.series(expr, U, 0, n + 1).removeO()
    return [int(s.coeff(U, k)) for k in range(n + 1)]


def sympy_L(L):
    return sum(c * U**i for i, c in enumerate(L.coeffs))


def test_l_polynomial_examples():
    assert l_polynomial([], 7, 0) == LPoly(7, 0, (1,))
    assert l_polynomial([9, 27], 5, 1) == ELL
    with pytest.raises((NonIntegralCoefficient, FunctionalEquationError)):
        l_polynomial([3, 5], 2, 1)  # P^1 over F_2 declared as genus 1
    with pytest.raises(ValueError):
        l_polynomial([9], 5, 1)


def test_l_polynomial_nonintegral():
    with pytest.raises(NonIntegralCoefficient):
        l_polynomial([9, 28], 5, 1)


def test_symmetric_fit_checks_extra_counts():
    L = LPoly(3, 2, (1, 1, 3, 3, 9))
    counts = predict_series(L, 4)
    assert l_polynomial_symmetric(counts[:2], 3, 2) == L
    assert l_polynomial_symmetric(counts[:3], 3, 2) == L
    with pytest.raises(FunctionalEquationError):
        l_polynomial_symmetric([counts[0], counts[1], counts[2] + 3], 3, 2)


def test_functional_equation_examples():
    assert functional_equation_check(LPoly(3, 0, (1,)))
    assert functional_equation_check(ELL)
    assert not functional_equation_check(LPoly(5, 1, (1, 3, 7)))


@pytest.mark.parametrize("L", [ELL, LPoly(3, 2, (1, 1, 3, 3, 9)), LPoly(2, 3, (1, 0, 0, 5, 0, 0, 8))])
def test_functional_equation_matches_symbolic_identity(L):
    P = sympy_L(L)
    lhs = sympy.expand(L.q**L.g * U ** (2 * L.g) * P.subs(U, 1 / (L.q * U)))
    assert sympy.expand(lhs - P) == 0
    assert functional_equation_check(L)


def test_predict_counts_examples():
    for n in range(1, 6):
        assert predict_counts(LPoly(4, 0, (1,)), n) == 4**n + 1
    assert predict_counts(ELL, 2) == 27
    assert predict_counts(ELL, 5) == 3069


@pytest.mark.parametrize("L", [ELL, LPoly(3, 2, (1, 1, 3, 3, 9)), LPoly(2, 3, (1, 0, 0, 5, 0, 0, 8))])
def test_power_sums_against_numpy_roots(L):
    w = np.roots(list(L.coeffs))  # ascending coefficients read as descending: the reversed polynomial
    for k, s in enumerate(power_sums(L, 10), 1):
        assert abs(np.sum(w**k) - s) < 1e-6 * max(1, abs(s))


def test_rh_numeric_examples():
    assert rh_check_numeric(ELL) < 1e-12
    assert rh_check_numeric(LPoly(5, 0, (1,))) == 0
    bad = LPoly(5, 1, (1, 6, 5))
    assert abs(rh_check_numeric(bad) - (5 - math.sqrt(5))) < 1e-9


def test_rh_exact_examples():
    assert real_weil_polynomial(ELL) == [3, 1]
    assert rh_check_exact(ELL)
    assert rh_check_exact(LPoly(5, 0, (1,)))
    assert not rh_check_exact(LPoly(5, 1, (1, 6, 5)))
    with pytest.raises(FunctionalEquationError):
        rh_check_exact(LPoly(5, 1, (1, 3, 7)))


def test_real_weil_obstruction():
    # passes the symmetry test but the top coefficient is not q^g
    with pytest.raises(FactorizationObstruction):
        real_weil_polynomial(LPoly(4, 2, (1, 0, 3, 0, 15)))


def test_rh_repeated_factor():
    L = weil_polynomial_from_pairs(5, [0, 0])  # (1 + 5X^2)^2
    assert rh_check_exact(L)
    assert rh_check_numeric(L) < 1e-12
    assert len(reciprocal_roots(L)) == 4


def synthetic_polys(count, seed):
    """Symmetric L built from pairs (1 - aX + qX^2); truth is known from the a_j."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        q = rng.choice([2, 3, 4, 5, 7, 9, 11, 16, 25])
        g = rng.randint(1, 4)
        bound = math.isqrt(4 * q)
        if i % 10 == 0:
            a = [rng.randint(-bound, bound)] * g  # repeated factor
        elif i % 10 == 1 and bound * bound == 4 * q:
            a = [bound, -bound] + [rng.randint(-bound, bound) for _ in range(g - 2)]
            a = a[:g]
        else:
            a = [rng.randint(-bound - 4, bound + 4) for _ in range(g)]
        truth = all(x * x <= 4 * q for x in a)
        out.append((weil_polynomial_from_pairs(q, a), truth, a))
    return out


def test_rh_exact_and_numeric_agree_on_synthetic():
    cases = synthetic_polys(100, 17)
    assert any(t for _, t, _ in cases) and any(not t for _, t, _ in cases)
    for L, truth, a in cases:
        assert functional_equation_check(L)
        assert rh_check_exact(L) == truth, (L, a)
        assert (rh_check_numeric(L) <= 1e-9) == truth, (L, a, rh_check_numeric(L))


def test_rh_agree_on_non_real_pairs():
    # symmetric polynomials whose real Weil polynomial has complex roots
    rng = random.Random(5)
    seen_false = 0
    for _ in range(60):
        q, g = rng.choice([2, 3, 5, 7]), rng.randint(2, 3)
        low = [1] + [rng.randint(-6, 6) for _ in range(g)]
        coeffs = low + [q ** (g - i) * low[i] for i in range(g - 1, -1, -1)]
        L = LPoly(q, g, tuple(coeffs))
        exact = rh_check_exact(L)
        seen_false += not exact
        assert exact == (rh_check_numeric(L) <= 1e-9)
    assert seen_false > 0


def test_sturm_count_against_sympy():
    rng = random.Random(9)
    for _ in range(80):
        q = rng.choice([2, 3, 4, 5, 7, 9])
        deg = rng.randint(1, 5)
        p = [rng.randint(-8, 8) for _ in range(deg)] + [1]
        t = sympy.Symbol("t")
        P = sympy.Poly(list(reversed(p)), t)
        r = 2 * sympy.sqrt(q)
        want = len({x for x in sympy.real_roots(P) if -r <= x <= r})
        assert roots_in_interval(p, q) == want


def test_squarefree_parts_against_sympy():
    t = sympy.Symbol("t")
    rng = random.Random(4)
    for _ in range(40):
        factors = [[rng.randint(-3, 3), 1] for _ in range(rng.randint(1, 4))]
        h = sympy.Integer(1)
        for f in factors:
            h *= (f[0] + t) ** rng.randint(1, 3)
        h = sympy.Poly(sympy.expand(h), t)
        ours = squarefree_parts([int(c) for c in reversed(h.all_coeffs())])
        _, want = sympy.sqf_list(h)
        got = {m: sympy.Poly(list(reversed(f)), t).monic() for f, m in ours}
        assert got == {m: g.monic() for g, m in want}


def test_class_number_examples():
    assert class_number(LPoly(2, 0, (1,))) == 1
    assert class_number(ELL) == 9
    assert kappa(ELL) == sympy.Rational(9, 4)


def test_divisor_counts_examples():
    T = place_table(projective_line(make_field(2)), 4)
    b = divisor_counts(LPoly(2, 0, (1,)), 4, T.a)
    assert b == [2 ** (n + 1) - 1 for n in range(5)]
    E = elliptic_curve(make_field(5), 1, 1)
    b = divisor_counts(ELL, 3, place_table(E, 3).a)
    assert b[0] == 1 and b[1] == 9
    with pytest.raises(EulerMismatch):
        divisor_counts(ELL, 2, {1: 9, 2: 10})


@pytest.mark.parametrize("L", [ELL, LPoly(2, 0, (1,)), LPoly(3, 2, (1, 1, 3, 3, 9))])
def test_zeta_series_against_sympy(L):
    expr = sympy_L(L) / ((1 - U) * (1 - L.q * U))
    assert zeta_series(L, 8) == sympy_series(expr, 8)


def test_euler_series_against_sympy():
    a = {1: 3, 2: 5, 3: 0, 4: 7}
    expr = sympy.Integer(1)
    for d, ad in a.items():
        expr *= (1 - U**d) ** (-ad)
    assert euler_series(a, 9) == sympy_series(expr, 9)


def test_euler_series_large_exponents():
    # a_1 huge: the binomial expansion must not loop a_1 times
    a = {1: 10**12, 2: 3}
    assert euler_series(a, 2) == [1, 10**12, math.comb(10**12 + 1, 2) + 3]


def test_base_change_examples():
    assert base_change(LPoly(3, 0, (1,)), 4) == LPoly(81, 0, (1,))
    L2 = base_change(ELL, 2)
    assert L2 == LPoly(25, 1, (1, 1, 25))
    assert predict_counts(L2, 1) == predict_counts(ELL, 2) == 27


def test_residue_examples():
    r = residue_at_pole(ZetaRat(LPoly(2, 0, (1,))), "s=1")
    assert abs(r - 1 / math.log(2)) < 1e-12
    Z = ZetaRat(ELL)
    r1 = residue_at_pole(Z, "s=1")
    assert abs(r1 - 9 / (4 * math.log(5))) < 1e-12 * r1
    assert abs(residue_at_pole(Z, "s=0") + r1) < 1e-12 * r1


@pytest.mark.parametrize("L", [ELL, LPoly(3, 2, (1, 1, 3, 3, 9)), LPoly(2, 0, (1,))])
def test_residue_against_numeric_limit(L):
    Z = ZetaRat(L)
    eps = 1e-6
    for s0, which in ((1, "s=1"), (0, "s=0")):
        approx = (eps * Z(s0 + eps) - eps * Z(s0 - eps)) / 2
        assert abs(approx.real - residue_at_pole(Z, which)) < 1e-5


def test_log_derivative_examples():
    P1 = LPoly(3, 0, (1,))
    assert log_derivative_check(P1, 8, [3**n + 1 for n in range(1, 9)])
    assert log_derivative_check(ELL, 8)
    bad = predict_series(ELL, 8)
    bad[3] += 1
    assert not log_derivative_check(ELL, 8, bad)


def test_log_derivative_against_sympy():
    expr = sympy_L(ELL) / ((1 - U) * (1 - 5 * U))
    series = sympy_series(sympy.simplify(U * sympy.diff(expr, U) / expr), 8)
    assert series[1:] == predict_series(ELL, 8)


pairs = st.lists(st.integers(-4, 4), min_size=1, max_size=3)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 4, 5]), pairs, st.integers(1, 3), st.integers(1, 3))
def test_base_change_coherence(q, a, m, n):
    L = weil_polynomial_from_pairs(q, a)
    assert base_change(base_change(L, m), n) == base_change(L, m * n)
    assert predict_counts(base_change(L, m), n) == predict_counts(L, m * n)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), pairs)
def test_round_trip_counts_to_l(q, a):
    L = weil_polynomial_from_pairs(q, a)
    assert l_polynomial(predict_series(L, 2 * L.g), q, L.g) == L
    assert l_polynomial_symmetric(predict_series(L, L.g), q, L.g) == L


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([3, 4, 5]), st.lists(st.integers(-3, 3), min_size=1, max_size=2),
       st.integers(1, 3), st.integers(1, 2), st.integers(1, 40))
def test_corrupted_counts_violate_bound_and_rh(q, a, n, m, bump):
    # a count pushed outside the Hasse-Weil window cannot come from an RH-satisfying L
    L = weil_polynomial_from_pairs(q, a)
    g = L.g
    counts = predict_series(L, 2 * g)
    k = min(n * m, 2 * g) - 1
    limit = 2 * g * math.sqrt(q ** (k + 1))
    counts[k] = q ** (k + 1) + 1 + math.ceil(limit) + bump
    try:
        bad = l_polynomial(counts, q, g)
    except (NonIntegralCoefficient, FunctionalEquationError):
        return
    assert not rh_check_exact(bad)
    assert rh_check_numeric(bad) > 1e-9
