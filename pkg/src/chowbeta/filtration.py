"""Order-of-vanishing filtrations of ``H^0(X, mL)`` along a subscheme ``Z``.

Two realizations of the filtration are used:

* ``Z`` a point of ``X`` (the common case): orders of vanishing are computed
  exactly from a truncated power-series parametrization of ``X`` at the
  point.  This gives the divisorial filtration of the blow-up at a smooth
  point without any saturation step.
* any other ``Z``: the ``k``-th step is ``(J_Z^k + I)_m / I_m``, built from
  products of generators of ``J_Z``.  This is exact for ``X = P^n`` and
  complete-intersection ``Z``; elsewhere it may undercount in low degree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .chow import C_TYPE, WeightVector, hilbert_polynomial
from .errors import InvalidFixture, InvalidInput, UnsupportedFixture
from .exact_algebra import (
    HomogeneousIdeal,
    Polynomial,
    hilbert_function,
    ideal_graded_piece,
    monomials_of_degree,
    multiples_in_degree,
)
from .kernels import Echelon


@dataclass(frozen=True)
class VarietySpec:
    ideal: HomogeneousIdeal
    dim_hint: int | None = None
    # irreducibility and normality are assumed, never checked
    assumptions: tuple = ("irreducible", "normal")

    @property
    def n_vars(self) -> int:
        return self.ideal.n_vars

    def dimension(self, m_range: tuple = (1, 8)) -> int:
        if self.dim_hint is not None:
            return self.dim_hint
        return hilbert_polynomial(self.ideal, m_range).degree


@dataclass(frozen=True)
class SubschemeSpec:
    z_ideal: HomogeneousIdeal

    @property
    def n_vars(self) -> int:
        return self.z_ideal.n_vars


def check_proper(X: VarietySpec, Z: SubschemeSpec, max_degree: int = 3) -> None:
    """Raise unless ``Z`` cuts out something strictly smaller than ``X`` in low degree."""
    if X.n_vars != Z.n_vars:
        raise InvalidInput("X and Z live in different projective spaces")
    for m in range(0, max_degree + 1):
        if hilbert_function(X.ideal, m) == 0 and m > 0:
            raise InvalidFixture("the ideal of X is not proper")
        both = HomogeneousIdeal(X.n_vars, X.ideal.generators + Z.z_ideal.generators)
        if ideal_graded_piece(both, m).dim > ideal_graded_piece(X.ideal, m).dim:
            return
    raise InvalidFixture("Z does not differ from X in degrees <= %d" % max_degree)


# -- points ----------------------------------------------------------------

def point_of(Z: SubschemeSpec) -> tuple | None:
    """Projective coordinates of ``Z`` if it is a reduced point, else None."""
    n = Z.n_vars
    lin = [g for g in Z.z_ideal.generators if g.degree == 1]
    ech = Echelon()
    for g in lin:
        ech.add(g.coordinate_vector(1))
    if len(ech) != n - 1:
        return None
    free = [j for j in range(n) if j not in ech.rows][0]
    pt = [Fraction(0)] * n
    pt[free] = Fraction(1)
    for p, row in ech.rows.items():
        pt[p] = -row.get(free, Fraction(0))
    if any(g.evaluate(pt) != 0 for g in Z.z_ideal.generators):
        raise InvalidFixture("Z has no points: generators do not vanish at the linear locus")
    return tuple(pt)


def _series_mul(a: dict, b: dict, K: int) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        da = sum(ea)
        for eb, cb in b.items():
            if da + sum(eb) >= K:
                continue
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e, 0) + ca * cb
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _series_add(a: dict, b: dict, scale=1) -> dict:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + scale * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


class LocalChart:
    """Truncated power-series parametrization of ``X`` near a smooth point.

    The point ``p`` is moved to the origin of the affine chart ``x_j = 1``;
    ``d`` of the affine coordinates serve as local parameters and the others
    are solved for as power series by a chord (fixed Jacobian) iteration.
    """

    def __init__(self, ideal: HomogeneousIdeal, point: Sequence, dim: int):
        n = ideal.n_vars
        self.n_vars = n
        self.point = tuple(Fraction(x) for x in point)
        self.j = next(i for i, x in enumerate(self.point) if x != 0)
        q = [x / self.point[self.j] for x in self.point]
        self.others = [i for i in range(n) if i != self.j]
        na = n - 1
        images = []
        for i in range(n):
            if i == self.j:
                images.append(Polynomial.constant(na))
            else:
                k = self.others.index(i)
                images.append(Polynomial.variable(na, k) + q[i])
        self.affine = [g.substitute(images) for g in ideal.generators]
        for g in self.affine:
            if g.terms.get((0,) * na, 0) != 0:
                raise InvalidFixture("the point does not lie on X")
        # Jacobian at the origin
        jac = []
        for g in self.affine:
            row = {}
            for b, c in g.terms.items():
                if sum(b) == 1:
                    row[b.index(1)] = c
            jac.append(row)
        ech = Echelon()
        eqs = []
        for g, row in zip(self.affine, jac):
            if row and ech.add(row) is not None:
                eqs.append((g, row))
        self.codim = len(eqs)
        if na - self.codim != dim:
            raise UnsupportedFixture(
                f"point is singular on X or dimension mismatch (tangent dim {na - self.codim}, dim X {dim})")
        self.dim = dim
        self.dependent = sorted(ech.rows)
        self.params = [k for k in range(na) if k not in ech.rows]
        self.equations = [g for g, _ in eqs]
        # inverse of the Jacobian block on the dependent coordinates
        size = self.codim
        block = [[row.get(k, Fraction(0)) for k in self.dependent] for _, row in eqs]
        self._jinv = _invert(block) if size else []
        self._cache: dict = {}

    def coordinate_series(self, K: int) -> list:
        """Series (in the ``d`` local parameters) for each affine coordinate."""
        if K in self._cache:
            return self._cache[K]
        d = self.dim
        na = self.n_vars - 1
        u: list = [None] * na
        for idx, k in enumerate(self.params):
            e = [0] * d
            e[idx] = 1
            u[k] = {tuple(e): Fraction(1)} if K > 1 else {}
        for k in self.dependent:
            u[k] = {}
        for _ in range(K):
            vals = [self._evaluate(g, u, K) for g in self.equations]
            if not any(vals):
                break
            for a, k in enumerate(self.dependent):
                corr: dict = {}
                for b, v in enumerate(vals):
                    coeff = self._jinv[a][b]
                    if coeff and v:
                        corr = _series_add(corr, v, coeff)
                u[k] = _series_add(u[k], corr, -1)
        else:
            if any(self._evaluate(g, u, K) for g in self.equations):
                raise InvalidFixture("power-series parametrization failed to converge")
        self._cache[K] = u
        return u

    def _evaluate(self, g: Polynomial, u: list, K: int) -> dict:
        total: dict = {}
        d = self.dim
        one = {(0,) * d: Fraction(1)}
        for b, c in g.terms.items():
            term = {e: c * x for e, x in one.items()}
            for k, e in enumerate(b):
                for _ in range(e):
                    term = _series_mul(term, u[k], K)
            total = _series_add(total, term)
        return total

    def monomial_images(self, m: int, K: int) -> list:
        """Series of every degree-``m`` monomial, in graded-lex order of monomials."""
        u = self.coordinate_series(K)
        d = self.dim
        q = [x / self.point[self.j] for x in self.point]
        xs = []
        for i in range(self.n_vars):
            if i == self.j:
                xs.append({(0,) * d: Fraction(1)})
            else:
                s = dict(u[self.others.index(i)])
                s = _series_add(s, {(0,) * d: q[i]}) if q[i] else s
                xs.append(s)
        cache = {(0,) * self.n_vars: {(0,) * d: Fraction(1)}}

        def series(b):
            if b in cache:
                return cache[b]
            i = next(k for k, e in enumerate(b) if e)
            prev = list(b)
            prev[i] -= 1
            s = _series_mul(series(tuple(prev)), xs[i], K)
            cache[b] = s
            return s

        return [series(b) for b in monomials_of_degree(self.n_vars, m)]


def _invert(mat):
    n = len(mat)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def series_columns(d: int, K: int) -> dict:
    """Column index for each local monomial of total degree < K, ordered by degree."""
    cols = {}
    for deg in range(K):
        for e in monomials_of_degree(d, deg) if d else [()]:
            cols[e] = len(cols)
        if d == 0:
            break
    return cols


@lru_cache(maxsize=64)
def _chart(ideal: HomogeneousIdeal, point: tuple, dim: int) -> LocalChart:
    return LocalChart(ideal, point, dim)


@lru_cache(maxsize=512)
def _point_adapted_basis(X: VarietySpec, point: tuple, m: int, with_vectors: bool) -> tuple:
    dim = X.dimension()
    chart = _chart(X.ideal, point, dim)
    h = hilbert_function(X.ideal, m)
    K = m + 1
    cap = 64 * (m + 1)
    while True:
        cols = series_columns(dim, K)
        degree_of = {c: sum(e) for e, c in cols.items()}
        images = chart.monomial_images(m, K)
        rows = []
        for j, s in enumerate(images):
            row = {cols[e]: c for e, c in s.items()}
            if with_vectors:
                row[len(cols) + j] = Fraction(1)
            rows.append(row)
        ech = Echelon()
        for r in rows:
            ech.add(r)
        ordered = [p for p in ech.rows if p < len(cols)]
        if len(ordered) == h:
            break
        if len(ordered) > h:
            raise InvalidFixture("more independent sections than the Hilbert function allows")
        if K >= cap:
            raise InvalidFixture(
                "sections could not be separated by their jets; is the ideal saturated and X irreducible?")
        K *= 2
    out = []
    for p in sorted(ordered):
        vec = None
        if with_vectors:
            base = len(cols)
            vec = {c - base: x for c, x in ech.rows[p].items() if c >= base}
        out.append((degree_of[p], vec))
    return tuple(out)


# -- general subschemes ----------------------------------------------------

def _power_generators(Z: SubschemeSpec, k: int, m: int) -> list:
    gens = [g for g in Z.z_ideal.generators if g.degree <= m]
    if k == 0:
        return [Polynomial.constant(Z.n_vars)]
    out = []
    for combo in itertools.combinations_with_replacement(range(len(gens)), k):
        if sum(gens[i].degree for i in combo) > m:
            continue
        p = Polynomial.constant(Z.n_vars)
        for i in combo:
            p = p * gens[i]
        if not p.is_zero():
            out.append(p)
    return out


@lru_cache(maxsize=512)
def _power_adapted_basis(X: VarietySpec, Z: SubschemeSpec, m: int) -> tuple:
    n = X.n_vars
    base = list(ideal_graded_piece(X.ideal, m).basis_matrix)
    levels = []
    k = 0
    while True:
        rows = multiples_in_degree(_power_generators(Z, k, m), n, m)
        ech = Echelon()
        for r in base:
            ech.add(r)
        extra = sum(1 for r in rows if ech.add(r) is not None)
        if extra == 0:
            break
        levels.append(rows)
        k += 1
    ech = Echelon()
    for r in base:
        ech.add(r)
    out = []
    for k in range(len(levels) - 1, -1, -1):
        for r in levels[k]:
            if ech.add(r) is not None:
                out.append((k, dict(r)))
    out.sort(key=lambda kv: kv[0])
    return tuple(out)


def adapted_basis(X: VarietySpec, Z: SubschemeSpec, m: int, with_vectors: bool = True) -> tuple:
    """Basis of ``(S/I)_m`` as ``(order, vector)`` pairs, sorted by order, such
    that the order-``>= k`` step is spanned by ``I_m`` and the vectors of order ``>= k``."""
    if m < 0:
        raise InvalidInput("m must be non-negative")
    pt = point_of(Z)
    if pt is not None:
        return _point_adapted_basis(X, pt, m, with_vectors)
    return _power_adapted_basis(X, Z, m)


def filtered_dimension(X: VarietySpec, Z: SubschemeSpec, m: int, k: int) -> int:
    """Dimension of the space of degree-``m`` sections vanishing to order ``>= k`` along ``Z``."""
    if k < 0:
        raise InvalidInput("k must be non-negative")
    if k == 0:
        return hilbert_function(X.ideal, m)
    return sum(1 for order, _ in adapted_basis(X, Z, m, with_vectors=False) if order >= k)


def filtered_subspace(X: VarietySpec, Z: SubschemeSpec, m: int, k: int) -> list:
    """Sparse vectors spanning the order-``>= k`` step modulo ``I_m`` (ideal rows excluded)."""
    return [vec for order, vec in adapted_basis(X, Z, m) if order >= k]


@dataclass(frozen=True)
class VanishingProfile:
    m: int
    numbers: tuple

    def __post_init__(self):
        if any(a > b for a, b in zip(self.numbers, self.numbers[1:])):
            raise InvalidInput("vanishing numbers must be non-decreasing")

    @property
    def a_max(self) -> int:
        return self.numbers[-1] if self.numbers else 0


def vanishing_numbers(X: VarietySpec, Z: SubschemeSpec, m: int) -> VanishingProfile:
    if m < 1:
        raise InvalidInput("m must be positive")
    orders = sorted(order for order, _ in adapted_basis(X, Z, m, with_vectors=False))
    return VanishingProfile(m, tuple(orders))


def weight_vector_from_Z(X: VarietySpec, Z: SubschemeSpec) -> WeightVector:
    return WeightVector(vanishing_numbers(X, Z, 1).numbers, C_TYPE)


@dataclass(frozen=True)
class FilteredEmbedding:
    """``X`` and ``Z`` re-expressed in coordinates given by a filtered basis of ``H^0(L)``."""

    variety: VarietySpec
    subscheme: SubschemeSpec
    weights: WeightVector
    basis: tuple  # linear forms (sparse vectors in the old coordinates), one per new variable


def filtered_embedding(X: VarietySpec, Z: SubschemeSpec) -> FilteredEmbedding:
    """Change coordinates so that ``x_i`` is a section of vanishing order ``a_i``
    with ``a_0 <= ... <= a_n``."""
    n = X.n_vars
    if ideal_graded_piece(X.ideal, 1).dim:
        raise InvalidFixture("X lies in a hyperplane; the embedding must be given by all of H^0(L)")
    basis = adapted_basis(X, Z, 1)
    orders = [o for o, _ in basis]
    forms = [vec for _, vec in basis]
    identity = all(len(v) == 1 and v.get(i) == 1 for i, v in enumerate(forms))
    if identity:
        return FilteredEmbedding(X, Z, WeightVector(tuple(orders)), tuple(forms))
    # y = A x with rows of A the forms; substitute x = A^{-1} y
    A = [[v.get(j, Fraction(0)) for j in range(n)] for v in forms]
    Ainv = _invert(A)
    images = [Polynomial.linear_form(Ainv[k]) for k in range(n)]
    X2 = VarietySpec(X.ideal.transform(images), X.dim_hint, X.assumptions)
    Z2 = SubschemeSpec(Z.z_ideal.transform(images))
    return FilteredEmbedding(X2, Z2, WeightVector(tuple(orders)), tuple(forms))


@dataclass(frozen=True)
class DiscreteMeasure:
    atoms: tuple  # ((support, mass), ...)

    def __post_init__(self):
        supports = [s for s, _ in self.atoms]
        if any(w <= 0 for _, w in self.atoms):
            raise InvalidInput("atom masses must be positive")
        if supports != sorted(set(supports)):
            raise InvalidInput("supports must be distinct and sorted")
        if self.atoms and sum(w for _, w in self.atoms) != 1:
            raise InvalidInput("total mass must be 1")

    @property
    def total_mass(self) -> Fraction:
        return sum((w for _, w in self.atoms), Fraction(0))


def discrete_measure(profile: VanishingProfile) -> DiscreteMeasure:
    """Uniform measure on the rescaled vanishing numbers ``a_j(mL)/m``."""
    h = len(profile.numbers)
    if h == 0:
        raise InvalidInput("empty profile")
    counts: dict = {}
    for a in profile.numbers:
        counts[a] = counts.get(a, 0) + 1
    return DiscreteMeasure(tuple(
        (Fraction(a, profile.m), Fraction(k, h)) for a, k in sorted(counts.items())))


def expectation(mu: DiscreteMeasure) -> Fraction:
    return sum((s * w for s, w in mu.atoms), Fraction(0))


@dataclass(frozen=True)
class AMaxEstimate:
    value: Fraction
    sequence: tuple = field(default=())  # ((m, a_max(mL)/m), ...)


def a_max_estimate(X: VarietySpec, Z: SubschemeSpec, m_range: tuple) -> AMaxEstimate:
    """Largest sampled ``a_max(mL)/m``: a lower estimate of ``a_max(||L||)``."""
    lo, hi = m_range
    if hi < lo or lo < 1:
        raise InvalidInput(f"empty m range {m_range}")
    seq = tuple((m, Fraction(vanishing_numbers(X, Z, m).a_max, m)) for m in range(lo, hi + 1))
    return AMaxEstimate(max(v for _, v in seq), seq)
