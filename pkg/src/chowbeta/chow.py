"""Weighted monomial bases of ``(S/I)_m`` and Chow weights.

``s(m, c)`` is the largest total ``c``-weight of a set of degree-``m``
monomials whose residues form a basis of ``(S/I)_m``.  Linear independence of
residues is a matroid, so the greedy scan is optimal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch, InvalidInput, InvalidWeightVector, UnstableRange
from .exact_algebra import (
    HomogeneousIdeal,
    RationalPolynomial,
    fit_polynomial,
    hilbert_function,
    ideal_graded_piece,
    minimal_degree_fit,
    monomials_of_degree,
    to_fraction,
)
from .kernels import greedy_basis

C_TYPE = "c"
R_TYPE = "r"


@dataclass(frozen=True)
class WeightVector:
    entries: tuple
    kind: str = C_TYPE

    def __post_init__(self):
        e = tuple(to_fraction(x) for x in self.entries)
        object.__setattr__(self, "entries", e)
        if self.kind == C_TYPE:
            if any(x < 0 for x in e) or any(a > b for a, b in zip(e, e[1:])):
                raise InvalidWeightVector(f"c-type weights must satisfy 0 <= a_0 <= ... <= a_n, got {e}")
        elif self.kind == R_TYPE:
            if e and e[-1] != 0 or any(a < b for a, b in zip(e, e[1:])):
                raise InvalidWeightVector(f"r-type weights must satisfy r_0 >= ... >= r_n = 0, got {e}")
        else:
            raise InvalidInput(f"unknown weight kind {self.kind!r}")

    def __len__(self):
        return len(self.entries)

    @property
    def a_max(self) -> Fraction:
        return self.entries[-1] if self.entries else Fraction(0)

    def dual(self) -> "WeightVector":
        """``r_i = a_n - a_i`` for a c-type vector."""
        if self.kind != C_TYPE:
            raise InvalidWeightVector("dual() expects a c-type vector")
        return WeightVector(tuple(self.a_max - a for a in self.entries), R_TYPE)


def weight_of_monomial(b: Sequence[int], w) -> Fraction:
    entries = w.entries if isinstance(w, WeightVector) else tuple(to_fraction(x) for x in w)
    if len(b) != len(entries):
        raise DimensionMismatch(f"monomial has {len(b)} exponents, weights have {len(entries)}")
    return sum((e * x for e, x in zip(b, entries)), Fraction(0))


@dataclass(frozen=True)
class WeightedBasisResult:
    monomials: tuple
    total_weight: Fraction
    degree: int


def _weighted_basis(I: HomogeneousIdeal, m: int, w: WeightVector, descending: bool) -> WeightedBasisResult:
    if len(w) != I.n_vars:
        raise DimensionMismatch("weight vector length differs from the number of variables")
    monos = monomials_of_degree(I.n_vars, m)
    weights = [weight_of_monomial(b, w) for b in monos]
    # stable sort keeps the graded-lex order among equal weights
    order = sorted(range(len(monos)), key=lambda j: -weights[j] if descending else weights[j])
    target = hilbert_function(I, m)
    piece = ideal_graded_piece(I, m)
    kept = greedy_basis(list(piece.basis_matrix), order, target)
    return WeightedBasisResult(
        monomials=tuple(monos[j] for j in kept),
        total_weight=sum((weights[j] for j in kept), Fraction(0)),
        degree=m,
    )


def max_weight_basis(I: HomogeneousIdeal, m: int, c: WeightVector) -> WeightedBasisResult:
    """Monomial basis of ``(S/I)_m`` of maximal total weight; its weight is ``s(m, c)``."""
    return _weighted_basis(I, m, c, descending=True)


def min_weight_basis(I: HomogeneousIdeal, m: int, r: WeightVector) -> WeightedBasisResult:
    """Monomial basis of ``(S/I)_m`` of minimal total weight; its weight is ``w(m, r)``."""
    return _weighted_basis(I, m, r, descending=False)


@dataclass(frozen=True)
class ChowWeightResult:
    e_c: Fraction
    e_r: Fraction
    degree_L_X: int
    dim_X: int
    normalized: Fraction
    sample_range: tuple
    s_polynomial: RationalPolynomial
    w_polynomial: RationalPolynomial
    hilbert_polynomial: RationalPolynomial
    s_values: tuple = ()
    w_values: tuple = ()
    hilbert_values: tuple = ()


def hilbert_polynomial(I: HomogeneousIdeal, m_range: tuple, dim_hint: int | None = None) -> RationalPolynomial:
    """Hilbert polynomial of ``S/I`` certified on ``m_range`` (inclusive)."""
    lo, hi = m_range
    samples = [(m, hilbert_function(I, m)) for m in range(lo, hi + 1)]
    if dim_hint is not None:
        p = fit_polynomial(samples, dim_hint) if len(samples) > dim_hint + 1 else None
        if p is None or p.degree != dim_hint:
            raise UnstableRange(
                f"Hilbert function is not a degree-{dim_hint} polynomial on m in [{lo}, {hi}]; "
                "increase m_range")
        return p
    p = minimal_degree_fit(samples)
    if p is None:
        raise UnstableRange(f"Hilbert function not certified polynomial on [{lo}, {hi}]; increase m_range")
    return p


def chow_weights(I: HomogeneousIdeal, c: WeightVector, m_range: tuple,
                 dim_hint: int | None = None) -> ChowWeightResult:
    """Chow weights ``e_X(c)``, ``e_X(r)`` and the normalized Chow weight.

    ``s(m, c)`` and ``w(m, r)`` are sampled on every ``m`` in ``m_range`` and
    must agree with a single degree-``d+1`` polynomial on all of them.
    """
    if not isinstance(c, WeightVector):
        c = WeightVector(tuple(c), C_TYPE)
    if c.kind != C_TYPE:
        raise InvalidWeightVector("chow_weights expects a c-type weight vector")
    lo, hi = m_range
    if lo < 1 or hi < lo:
        raise InvalidInput(f"bad m_range {m_range}")
    hp = hilbert_polynomial(I, m_range, dim_hint)
    d = hp.degree
    if d < 0:
        raise InvalidInput("empty variety (Hilbert polynomial is zero)")
    if hi - lo < d + 2:
        raise UnstableRange(f"m_range {m_range} too short: need m_end - m_start >= {d + 2}")
    r = c.dual()
    ms = range(lo, hi + 1)
    s_vals = [(m, max_weight_basis(I, m, c).total_weight) for m in ms]
    w_vals = [(m, min_weight_basis(I, m, r).total_weight) for m in ms]
    s_poly = fit_polynomial(s_vals, d + 1)
    w_poly = fit_polynomial(w_vals, d + 1)
    if s_poly is None or w_poly is None:
        raise UnstableRange(
            f"s(m,c) or w(m,r) not polynomial of degree {d + 1} on [{lo}, {hi}]; "
            "retry with a larger m_start")
    deg = hp.nlc(d)
    if deg.denominator != 1 or deg <= 0:
        raise UnstableRange(f"non-integral degree {deg}; increase m_range")
    e_c = s_poly.nlc(d + 1)
    e_r = w_poly.nlc(d + 1)
    return ChowWeightResult(
        e_c=e_c,
        e_r=e_r,
        degree_L_X=int(deg),
        dim_X=d,
        normalized=e_c / ((d + 1) * deg),
        sample_range=(lo, hi),
        s_polynomial=s_poly,
        w_polynomial=w_poly,
        hilbert_polynomial=hp,
        s_values=tuple(v for _, v in s_vals),
        w_values=tuple(v for _, v in w_vals),
        hilbert_values=tuple(hilbert_function(I, m) for m in ms),
    )


def s_function(I: HomogeneousIdeal, m: int, c) -> Fraction:
    if not isinstance(c, WeightVector):
        c = WeightVector(tuple(c))
    return max_weight_basis(I, m, c).total_weight
