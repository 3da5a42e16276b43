from fractions import Fraction
from math import comb

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from chowbeta.errors import DimensionMismatch, InvalidInput
from chowbeta.exact_algebra import (
    HomogeneousIdeal,
    Polynomial,
    RationalPolynomial,
    fit_polynomial,
    format_rational,
    hilbert_function,
    ideal_graded_piece,
    minimal_degree_fit,
    monomials_of_degree,
    nlc_interpolate,
    parse_rational,
    reduce_against_piece,
    to_fraction,
)

X = sympy.symbols("x0:3")


def to_sympy(p):
    return sympy.expand(sum(sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[x ** e for x, e in zip(X, mon)])
                            for mon, c in p.terms.items()))


coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)
mono = st.tuples(*[st.integers(0, 3)] * 3)
polys = st.dictionaries(mono, coeff, max_size=5).map(lambda t: Polynomial(3, t))


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_ring_operations_match_sympy(p, q):
    assert to_sympy(p + q) == to_sympy(p) + to_sympy(q)
    assert to_sympy(p * q) == sympy.expand(to_sympy(p) * to_sympy(q))
    assert to_sympy(p - q) == sympy.expand(to_sympy(p) - to_sympy(q))


@settings(max_examples=30, deadline=None)
@given(polys, st.integers(0, 3))
def test_power_matches_repeated_product(p, k):
    r = Polynomial.constant(3, 1)
    for _ in range(k):
        r = r * p
    assert p ** k == r


def test_zero_terms_are_dropped():
    p = Polynomial(2, {(1, 0): 1, (0, 1): 0})
    assert p.terms == {(1, 0): Fraction(1)}
    assert (p - p).is_zero()


def test_mismatched_rings_rejected():
    with pytest.raises(DimensionMismatch):
        Polynomial.variable(2, 0) + Polynomial.variable(3, 0)


def test_floats_rejected():
    with pytest.raises((InvalidInput, TypeError)):
        to_fraction(0.5)


@pytest.mark.parametrize("x", [Fraction(0), Fraction(-7, 3), Fraction(10 ** 30 + 1, 7)])
def test_rational_format_round_trips(x):
    s = format_rational(x)
    assert "/" in s
    assert parse_rational(s) == x


@pytest.mark.parametrize("n,m", [(2, 0), (3, 4), (4, 3)])
def test_monomial_counts(n, m):
    mons = monomials_of_degree(n, m)
    assert len(mons) == comb(n - 1 + m, m)
    assert len(set(mons)) == len(mons)
    assert all(sum(b) == m for b in mons)


def test_inhomogeneous_generator_rejected():
    x = [Polynomial.variable(3, i) for i in range(3)]
    with pytest.raises(InvalidInput):
        HomogeneousIdeal(3, (x[0] + x[1] * x[1],))


@pytest.mark.parametrize("m", range(0, 7))
def test_hilbert_function_of_projective_space(m):
    assert hilbert_function(HomogeneousIdeal.zero(3), m) == comb(m + 2, 2)


@pytest.mark.parametrize("e", [1, 2, 3])
@pytest.mark.parametrize("m", range(0, 7))
def test_hilbert_function_of_plane_curve(e, m):
    # a degree-e hypersurface in P^2: C(m+2,2) - C(m-e+2,2)
    x = [Polynomial.variable(3, i) for i in range(3)]
    f = x[0] ** e + x[1] ** e + x[2] ** e
    expected = comb(m + 2, 2) - (comb(m - e + 2, 2) if m >= e else 0)
    assert hilbert_function(HomogeneousIdeal(3, (f,)), m) == expected


def test_graded_piece_rank_matches_sympy():
    x = [Polynomial.variable(4, i) for i in range(4)]
    I = HomogeneousIdeal(4, (x[0] * x[2] - x[1] ** 2, x[1] * x[3] - x[2] ** 2, x[0] * x[3] - x[1] * x[2]))
    for m in (2, 3):
        piece = ideal_graded_piece(I, m)
        n = len(monomials_of_degree(4, m))
        from chowbeta.exact_algebra import multiples_in_degree

        rows = multiples_in_degree(I.generators, 4, m)
        mat = sympy.Matrix([[r.get(j, 0) for j in range(n)] for r in rows])
        assert piece.dim == mat.rank()
        assert hilbert_function(I, m) == 3 * m + 1


def test_reduction_is_idempotent():
    x = [Polynomial.variable(3, i) for i in range(3)]
    I = HomogeneousIdeal(3, (x[0] * x[2] - x[1] ** 2,))
    P = ideal_graded_piece(I, 2)
    v = [Fraction(k + 1) for k in range(6)]
    once = reduce_against_piece(v, P)
    assert reduce_against_piece(once, P) == once


def test_nlc_of_interpolated_polynomial():
    # f(m) = 2m^2 + m has nlc 4 in degree 2
    f = nlc_interpolate([(m, 2 * m * m + m) for m in range(1, 5)], 2)
    assert f.nlc(2) == 4
    assert f(10) == 210


def test_nlc_interpolate_needs_distinct_samples():
    with pytest.raises(InvalidInput):
        nlc_interpolate([(1, 1), (1, 2), (2, 3)], 2)


def test_fit_rejects_nonpolynomial_data():
    assert fit_polynomial([(m, 2 ** m) for m in range(1, 6)], 2) is None
    assert minimal_degree_fit([(m, 3 * m + 1) for m in range(1, 6)]).degree == 1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=6), min_size=1, max_size=4))
def test_interpolation_recovers_polynomial(coeffs):
    p = RationalPolynomial(tuple(coeffs))
    D = len(coeffs) - 1
    q = nlc_interpolate([(m, p(m)) for m in range(3, 3 + D + 1)], D)
    assert all(q(m) == p(m) for m in range(-3, 10))
