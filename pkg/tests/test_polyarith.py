import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from curvezeta.errors import DivisionByZero, FieldMismatch
from curvezeta.ff import make_field
from curvezeta.polyarith import (
    MultiPoly,
    RationalFn,
    UniPoly,
    distinct_degree_factorization,
    expand_factors,
    factor,
    formal_derivative,
    irreducible_test,
    mobius,
    monic_irreducibles,
    monic_polynomials,
    necklace_count,
    partial_fractions,
    poly_gcd,
    poly_invmod,
    poly_xgcd,
    roots,
    squarefree_decomposition,
)

X = sympy.Symbol("x")


def P(F, *c):
    return UniPoly(F, list(c))


def rand_poly(F, rng, deg, monic=False):
    c = [rng.randrange(F.q) for _ in range(deg)] + [1 if monic else rng.randrange(1, F.q)]
    return UniPoly(F, c)


def sympy_factor_degrees(a: UniPoly, p: int):
    """Multiset of (degree, multiplicity) of the factorization, via sympy over GF(p)."""
    poly = sympy.Poly([c for c in reversed(a.coeffs)], X, modulus=p)
    _, fl = poly.factor_list()
    return sorted((g.degree(), m) for g, m in fl)


def test_gcd_examples():
    F5, F2 = make_field(5), make_field(2)
    assert poly_gcd(P(F5, 4, 0, 1), P(F5, 4, 1)) == P(F5, 4, 1)
    a = P(F5, 2, 0, 3)
    assert poly_gcd(a, UniPoly(F5)) == a.monic()
    assert poly_gcd(P(F2, 1, 1, 1), P(F2, 1, 0, 1)).is_one()


def test_gcd_field_mismatch():
    with pytest.raises(FieldMismatch):
        poly_gcd(P(make_field(2), 1, 1), P(make_field(3), 1, 1))


def test_xgcd_and_inverse():
    F = make_field(7)
    rng = random.Random(1)
    for _ in range(50):
        a, b = rand_poly(F, rng, 5), rand_poly(F, rng, 4)
        g, s, t = poly_xgcd(a, b)
        assert s * a + t * b == g
        m = rand_poly(F, rng, 3, monic=True)
        if poly_gcd(a, m).is_one():
            assert ((a * poly_invmod(a, m)) % m).is_one()


def test_factor_examples():
    F2 = make_field(2)
    assert factor(P(F2, 1, 0, 1)) == [(P(F2, 1, 1), 2)]
    irr = P(F2, 1, 1, 0, 0, 1)
    assert factor(irr) == [(irr, 1)]
    got = factor(P(F2, 0, 1, 0, 0, 1))
    assert got == [(P(F2, 0, 1), 1), (P(F2, 1, 1), 1), (P(F2, 1, 1, 1), 1)]


@pytest.mark.parametrize("p,f", [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)])
def test_factor_reassembles(p, f):
    F = make_field(p, f)
    rng = random.Random(p * 10 + f)
    for _ in range(100 if f == 1 else 40):
        a = rand_poly(F, rng, rng.randint(1, 8))
        fac = factor(a, seed=rng.randrange(100))
        assert expand_factors(a.lc, fac, F) == a
        for g, _ in fac:
            assert g.lc == 1 and irreducible_test(g)
        if f == 1:
            assert sorted((g.degree, m) for g, m in fac) == sympy_factor_degrees(a, p)


def test_factor_p_th_power_case():
    F = make_field(3)
    a = P(F, 1, 0, 0, 1) ** 2  # (x^3 + 1)^2 = (x + 1)^6 in characteristic 3
    assert factor(a) == [(P(F, 1, 1), 6)]


def test_squarefree_and_ddf_shapes():
    F = make_field(3)
    rng = random.Random(5)
    for _ in range(40):
        a = rand_poly(F, rng, rng.randint(1, 9), monic=True)
        sq = squarefree_decomposition(a)
        prod = UniPoly.constant(F, 1)
        for g, m in sq:
            assert poly_gcd(g, formal_derivative(g)).is_one()
            prod = prod * g**m
        assert prod == a
        for g, m in sq:
            for block, d in distinct_degree_factorization(g):
                assert block.degree % d == 0


def test_irreducible_examples_and_cubic_count():
    F2, F3 = make_field(2), make_field(3)
    assert irreducible_test(P(F2, 1, 1, 1))
    assert not irreducible_test(P(F2, 1, 0, 1))
    cubics = list(monic_polynomials(F3, 3))
    irr = [c for c in cubics if irreducible_test(c)]
    # a cubic is irreducible iff it has no root
    no_root = [c for c in cubics if all(c(x) != 0 for x in range(3))]
    assert len(irr) == len(no_root) == 8 == (27 - 3) // 3


@pytest.mark.parametrize("p,f", [(2, 1), (3, 1), (2, 2), (5, 1)])
def test_irreducible_counts_match_necklace(p, f):
    F = make_field(p, f)
    for d in range(1, 6):
        if F.q**d > 4000:
            break
        assert sum(1 for _ in monic_irreducibles(F, d)) == necklace_count(F.q, d)


def test_irreducible_test_against_sympy():
    for p in (2, 3, 5):
        F = make_field(p)
        rng = random.Random(p)
        for _ in range(60):
            a = rand_poly(F, rng, rng.randint(1, 7), monic=True)
            want = sympy.Poly(list(reversed(a.coeffs)), X, modulus=p).is_irreducible
            assert irreducible_test(a) == want


def test_mobius_values():
    assert [mobius(n) for n in range(1, 13)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]
    for n in range(1, 200):
        assert mobius(n) == sympy.mobius(n)


def test_formal_derivative_examples():
    F2, F5 = make_field(2), make_field(5)
    assert formal_derivative(P(F5, 3)).is_zero()
    assert formal_derivative(UniPoly.monomial(F5, 5)).is_zero()
    assert formal_derivative(P(F2, 1, 1, 1)) == P(F2, 1)


@pytest.mark.parametrize("p,f", [(2, 1), (3, 1), (2, 2), (3, 2), (5, 1)])
def test_roots_match_brute_force(p, f):
    F = make_field(p, f)
    rng = random.Random(7 * p + f)
    for _ in range(40):
        a = rand_poly(F, rng, rng.randint(1, 6))
        assert roots(a, seed=rng.randrange(50)) == [x for x in range(F.q) if a(x) == 0]


def test_partial_fraction_examples():
    F2 = make_field(2)
    poly = P(F2, 1, 0, 1, 1)
    pf = partial_fractions(RationalFn(poly))
    assert pf.terms == [] and pf.poly_part == poly
    T, T1 = P(F2, 0, 1), P(F2, 1, 1)
    pf = partial_fractions(RationalFn(P(F2, 1), T * T1))
    assert pf.poly_part.is_zero()
    assert pf.terms == [(T, 1, P(F2, 1)), (T1, 1, P(F2, 1))]


@pytest.mark.parametrize("p,f", [(2, 1), (3, 1), (5, 1), (2, 2)])
def test_partial_fractions_round_trip(p, f):
    F = make_field(p, f)
    rng = random.Random(11 * p + f)
    for _ in range(120):
        num = rand_poly(F, rng, rng.randint(0, 6))
        den = rand_poly(F, rng, rng.randint(1, 6), monic=True)
        r = RationalFn(num, den)
        pf = partial_fractions(r, seed=rng.randrange(9))
        assert pf.reassemble() == r
        for Q, n, c in pf.terms:
            assert irreducible_test(Q) and Q.lc == 1 and n >= 1
            assert c.degree < Q.degree and not c.is_zero()


def test_rational_fn_normalization():
    F = make_field(5)
    r = RationalFn(P(F, 2, 2), P(F, 3, 3))  # (2x+2)/(3x+3) = 2/3
    assert r.den.is_one() and r.num == P(F, F.div(2, 3))
    with pytest.raises(DivisionByZero):
        RationalFn(P(F, 1), UniPoly(F))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.lists(st.integers(0, 100), min_size=1, max_size=7),
       st.lists(st.integers(0, 100), min_size=1, max_size=7))
def test_division_identity(p, ca, cb):
    F = make_field(p)
    a, b = UniPoly(F, [c % p for c in ca]), UniPoly(F, [c % p for c in cb])
    if b.is_zero():
        return
    qt, r = divmod(a, b)
    assert qt * b + r == a
    assert r.is_zero() or r.degree < b.degree


def test_multipoly_basics():
    F = make_field(2)
    # Klein quartic X^3 Y + Y^3 Z + Z^3 X
    K = MultiPoly(F, {(3, 1, 0): 1, (0, 3, 1): 1, (1, 0, 3): 1}, 3)
    assert K.total_degree == 4 and K.is_homogeneous()
    assert not MultiPoly(F, {(1, 0, 0): 1, (0, 2, 0): 1}, 3).is_homogeneous()
    assert K(1, 0, 0) == 0 and K(1, 1, 1) == 1
    dX = K.partial(0)
    assert dX(1, 1, 1) == (3 + 1) % 2
