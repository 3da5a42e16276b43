from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chowbeta.chow import (
    R_TYPE,
    WeightVector,
    chow_weights,
    hilbert_polynomial,
    max_weight_basis,
    min_weight_basis,
    s_function,
)
from chowbeta.errors import InvalidWeightVector, UnstableRange
from chowbeta.exact_algebra import HomogeneousIdeal, Polynomial, hilbert_function

from conftest import brute_force_s, load

x = [Polynomial.variable(3, i) for i in range(3)]
CONIC = HomogeneousIdeal(3, (x[0] * x[2] - x[1] ** 2,))
P2 = HomogeneousIdeal.zero(3)


def test_conic_chow_weight():
    res = chow_weights(CONIC, WeightVector((0, 1, 2)), (1, 5))
    assert res.e_c == 4
    assert res.e_r == 4
    assert res.degree_L_X == 2
    assert res.normalized == 1
    assert [res.s_polynomial(m) for m in range(1, 4)] == [3, 10, 21]


def test_plane_chow_weight():
    res = chow_weights(P2, WeightVector((0, 1, 1)), (1, 6))
    assert (res.e_c, res.e_r, res.normalized) == (2, 1, Fraction(2, 3))
    # s(m,c) = m^3/3 + m^2 + 2m/3
    assert res.s_polynomial.coefficients == (0, Fraction(2, 3), 1, Fraction(1, 3))


def test_twisted_cubic_chow_weight():
    X = load("twisted_cubic").variety_spec()
    res = chow_weights(X.ideal, WeightVector((0, 1, 2, 3)), (1, 6))
    assert (res.e_c, res.degree_L_X, res.normalized) == (9, 3, Fraction(3, 2))


@pytest.mark.parametrize("ideal,c,m", [(CONIC, (0, 1, 2), 1), (CONIC, (0, 1, 2), 2), (CONIC, (0, 0, 5), 2),
                                       (P2, (0, 1, 1), 1), (P2, (0, 1, 1), 2), (P2, (0, 2, 3), 2)])
def test_greedy_matches_exhaustive_search(ideal, c, m):
    assert s_function(ideal, m, c) == brute_force_s(ideal, m, c)


def test_min_basis_uses_dual_weights():
    c = WeightVector((0, 1, 2))
    for m in range(1, 5):
        w = min_weight_basis(CONIC, m, c.dual()).total_weight
        s = max_weight_basis(CONIC, m, c).total_weight
        assert w + s == m * hilbert_function(CONIC, m) * 2


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=3, max_size=3).map(sorted), st.integers(0, 3))
def test_translation_shifts_chow_weight(c, k):
    # adding k to every weight adds (d+1) deg k
    base = chow_weights(CONIC, WeightVector(tuple(c)), (1, 5))
    moved = chow_weights(CONIC, WeightVector(tuple(a + k for a in c)), (1, 5))
    assert moved.e_c - base.e_c == 2 * 2 * k


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=3, max_size=3).map(sorted), st.integers(1, 4))
def test_chow_weight_is_homogeneous(c, lam):
    base = chow_weights(P2, WeightVector(tuple(c)), (1, 6))
    scaled = chow_weights(P2, WeightVector(tuple(lam * a for a in c)), (1, 6))
    assert scaled.e_c == lam * base.e_c


def test_weight_vector_validation():
    with pytest.raises(InvalidWeightVector):
        WeightVector((1, 0))
    with pytest.raises(InvalidWeightVector):
        WeightVector((-1, 0))
    with pytest.raises(InvalidWeightVector):
        WeightVector((0, 1), R_TYPE)
    assert WeightVector((0, 1, 3)).dual().entries == (3, 2, 0)


def test_short_range_is_rejected():
    with pytest.raises(UnstableRange):
        chow_weights(P2, WeightVector((0, 1, 1)), (1, 3))


def test_hilbert_polynomial_of_cubic_curve():
    hp = hilbert_polynomial(load("twisted_cubic").variety_spec().ideal, (1, 6))
    assert hp.coefficients == (1, 3)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_chow_weight_ignores_choice_of_adapted_basis(coeffs):
    # x_i -> x_i + (terms of weight >= c_i) keeps the weight filtration, so the
    # Chow weight must not move; equal weights make the choice non-unique
    a, b, k = coeffs
    c = WeightVector((0, 1, 1))
    images = (x[0] + a * x[1] + b * x[2], x[1] + k * x[2], x[2] + x[1] if k == 0 else x[2])
    moved = CONIC.transform(images)
    assert chow_weights(moved, c, (1, 5)).e_c == chow_weights(CONIC, c, (1, 5)).e_c
