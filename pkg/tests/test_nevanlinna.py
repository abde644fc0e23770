import cmath
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from curvezeta.errors import SingularityOnContour, ZeroOnBoundary
from curvezeta.nevanlinna import (
    RatFnC,
    boundary_mean,
    chebyshev_psi,
    counting_function,
    jensen_check,
    jensen_terms,
    padic_log_sum,
    psi_identity_check,
    psi_product_zeros,
    random_corpus,
    rational_pj_check,
)


def test_counting_function_examples():
    assert counting_function([], 1.0) == 0
    assert counting_function([(2.0, 1)], 1.0) == 0
    assert abs(counting_function([(0.5, 1)], 1.0) - math.log(2)) < 1e-15
    zeros = psi_product_zeros(10)
    assert abs(counting_function(zeros, 1.0) - math.log(2520)) < 1e-12
    with pytest.raises(ZeroOnBoundary):
        counting_function([(1.0, 1)], 1.0)
    with pytest.raises(ValueError):
        counting_function([(0.0, 1)], 1.0)


def test_psi_identity_examples():
    nf, ps, d = psi_identity_check(2)
    assert abs(nf - math.log(2)) < 1e-15 and d < 1e-12
    nf, ps, d = psi_identity_check(10)
    assert abs(ps - math.log(2520)) < 1e-12 and d < 1e-12


@pytest.mark.parametrize("x", range(2, 201))
def test_psi_identity_against_lcm(x):
    nf, ps, d = psi_identity_check(x)
    assert d < 1e-12
    # psi(x) = log lcm(1..x)
    assert abs(ps - math.log(math.lcm(*range(1, x + 1)))) < 1e-9


def test_chebyshev_psi_against_sympy_primes():
    want = sum(math.log(p) * int(math.floor(math.log(100) / math.log(p) + 1e-12))
               for p in sympy.primerange(2, 101))
    assert abs(chebyshev_psi(100) - want) < 1e-12


def test_psi_product_zeros_are_roots():
    zeros = psi_product_zeros(30)
    poly = np.poly1d([1.0])
    for z, k in zeros:
        p = round(1 / z)
        for _ in range(k):
            poly = poly * np.poly1d([-p, 1.0])
    for z, k in zeros:
        assert abs(poly(z)) < 1e-6 * abs(poly(0.0) or 1)


def test_jensen_examples():
    f = RatFnC.from_ints([Fraction(-1, 2), 1])
    assert jensen_check(f, 1.0) < 1e-9
    t = jensen_terms(f, 1.0)
    assert abs(t["interior"] - math.log(2)) < 1e-12
    for k in (1, 3):
        g = RatFnC.from_ints([0] * k + [1])
        for r in (0.5, 1.7):
            assert jensen_check(g, r) < 1e-9
    with pytest.raises(SingularityOnContour):
        jensen_check(RatFnC.from_ints([-1, 1]), 1.0)


def test_random_corpus_jensen():
    corpus = random_corpus(50, seed=0)
    assert {r for _, r in corpus} == {0.7, 1.3}
    for f, r in corpus:
        assert jensen_check(f, r) < 1e-6


def test_boundary_mean_against_mpmath():
    for f, r in random_corpus(8, seed=3):
        want = mpmath.quad(lambda th: -mpmath.log(abs(complex(f(r * mpmath.e ** (1j * th))))),
                           mpmath.linspace(0, 2 * mpmath.pi, 9)) / (2 * mpmath.pi)
        assert abs(boundary_mean(f, r) - float(want)) < 1e-7


def test_roots_against_numpy():
    for f, _ in random_corpus(20, seed=4):
        for poly, found in ((f.num, f.zeros()), (f.den, f.poles())):
            low = next(i for i, c in enumerate(poly) if c)
            core = [float(c) for c in poly[low:]]
            want = sorted(np.roots(core[::-1]), key=lambda z: (round(z.real, 6), round(z.imag, 6)))
            got = sorted((z for z, k in found for _ in range(k)), key=lambda z: (round(z.real, 6), round(z.imag, 6)))
            assert len(got) == len(want)
            for a, b in zip(got, want):
                assert abs(a - b) < 1e-5 * max(1, abs(b))


def test_residual_shrinks_with_refinement():
    f = RatFnC.from_ints([Fraction(-9, 10), 1], [Fraction(11, 10), 1])  # zero and pole near |z| = 1
    coarse = boundary_mean(f, 1.0, tol=1e-3)
    fine = boundary_mean(f, 1.0, tol=1e-12)
    exact = -math.log(0.9) + math.log(1.0)  # interior zero at 0.9, exterior pole
    t = jensen_terms(f, 1.0)
    lhs = t["origin"] + t["interior"]
    assert abs(lhs + fine - t["rhs"]) <= abs(lhs + coarse - t["rhs"]) + 1e-15
    assert abs(t["interior"] - exact) < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.floats(0.0, 2 * math.pi))
def test_jensen_invariant_under_unit_scaling(seed, angle):
    f, r = random_corpus(1, seed=seed)[0]
    u = cmath.exp(1j * angle)
    assert abs(jensen_check(f, r, scale=u) - jensen_check(f, r)) < 1e-9


def test_padic_log_sum():
    assert padic_log_sum(Fraction(1)) == 0
    assert abs(padic_log_sum(Fraction(-1, 6)) + math.log(6)) < 1e-15
    assert abs(padic_log_sum(Fraction(12, 5)) - math.log(12 / 5)) < 1e-12
    with pytest.raises(ValueError):
        padic_log_sum(Fraction(0))


@settings(max_examples=50, deadline=None)
@given(st.integers(-10**6, 10**6).filter(bool), st.integers(1, 10**6))
def test_padic_sum_is_log_abs(a, b):
    # product formula: sum_p v_p(c) log p = log |c|
    c = Fraction(a, b)
    assert abs(padic_log_sum(c) - math.log(abs(c))) < 1e-9


def test_rational_pj_examples():
    assert rational_pj_check(RatFnC.from_ints([Fraction(-1, 2), 1]), 1.0) < 1e-9
    assert rational_pj_check(RatFnC.from_ints([-1, 2]), 1.0) < 1e-9
    f = RatFnC.from_ints([Fraction(-1, 6), Fraction(1, 3)])  # (z - 1/2)/3
    assert f.leading_coefficient == Fraction(-1, 6)
    assert rational_pj_check(f, 1.0) < 1e-9


def test_rational_pj_corpus():
    for f, r in random_corpus(30, seed=7):
        assert rational_pj_check(f, r) < 1e-6


def test_ratfnc_normalization():
    f = RatFnC.from_ints([-2, 2], [-3, 3])  # (2z - 2)/(3z - 3) = 2/3
    assert f.den == [1] and f.num == [Fraction(2, 3)]
    with pytest.raises(ZeroDivisionError):
        RatFnC.from_ints([1], [0])
    with pytest.raises(ValueError):
        RatFnC.from_ints([0])
    g = RatFnC.from_ints([0, 0, 5], [0, 1, 1])
    assert g.order_at_zero == 1 and g.leading_coefficient == 5
