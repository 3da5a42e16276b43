"""Exact rational polynomials, graded pieces of homogeneous ideals, and
interpolation of eventually-polynomial integer sequences.

Everything here is exact: scalars are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DimensionMismatch, InvalidInput
from .kernels import Echelon, echelonize

Monomial = tuple  # exponent vector (b_0, ..., b_n)


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise InvalidInput(f"refusing inexact float {x!r}; pass a Fraction or 'p/q' string")
    return Fraction(x)


def format_rational(x: Fraction) -> str:
    """Lossless ``p/q`` rendering (denominator always shown)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s)


@lru_cache(maxsize=None)
def monomials_of_degree(n_vars: int, m: int) -> tuple[Monomial, ...]:
    """All exponent vectors of total degree ``m`` in graded-lex order.

    Within a fixed degree the order is lexicographically decreasing, so the
    variables come out as ``x_0, x_1, ..., x_n``.
    """
    if n_vars < 1:
        raise InvalidInput("n_vars must be positive")
    if m < 0:
        return ()
    out = []
    for cut in itertools.combinations(range(m + n_vars - 1), n_vars - 1):
        prev = -1
        exps = []
        for c in cut:
            exps.append(c - prev - 1)
            prev = c
        exps.append(m + n_vars - 1 - prev - 1)
        out.append(tuple(exps))
    out.sort(reverse=True)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(n_vars: int, m: int) -> dict:
    return {b: i for i, b in enumerate(monomials_of_degree(n_vars, m))}


def add_exponents(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class Polynomial:
    """Sparse multivariate polynomial with rational coefficients."""

    __slots__ = ("n_vars", "terms", "_hash")

    def __init__(self, n_vars: int, terms=None):
        self.n_vars = n_vars
        clean = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for mono, coeff in items:
                mono = tuple(mono)
                if len(mono) != n_vars:
                    raise DimensionMismatch(
                        f"monomial {mono} has {len(mono)} exponents, expected {n_vars}")
                c = clean.get(mono, 0) + to_fraction(coeff)
                if c:
                    clean[mono] = c
                else:
                    clean.pop(mono, None)
        self.terms = clean
        self._hash = None

    @classmethod
    def constant(cls, n_vars, c=1):
        return cls(n_vars, {(0,) * n_vars: c})

    @classmethod
    def variable(cls, n_vars, i):
        e = [0] * n_vars
        e[i] = 1
        return cls(n_vars, {tuple(e): 1})

    @classmethod
    def linear_form(cls, coeffs: Sequence):
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(n, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {sum(b) for b in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(self.degrees())

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.n_vars != self.n_vars:
                raise DimensionMismatch("polynomials live in different rings")
            return other
        return Polynomial.constant(self.n_vars, to_fraction(other))

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for b, c in other.terms.items():
            v = t.get(b, 0) + c
            if v:
                t[b] = v
            else:
                t.pop(b, None)
        return Polynomial(self.n_vars, t)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.n_vars, {b: -c for b, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        t: dict = {}
        for b1, c1 in self.terms.items():
            for b2, c2 in other.terms.items():
                b = add_exponents(b1, b2)
                v = t.get(b, 0) + c1 * c2
                if v:
                    t[b] = v
                else:
                    t.pop(b, None)
        return Polynomial(self.n_vars, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise InvalidInput("negative power")
        result = Polynomial.constant(self.n_vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.n_vars == other.n_vars and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n_vars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self.to_string()!r})"

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"x{i}" for i in range(self.n_vars)]
        parts = []
        for b in sorted(self.terms, key=lambda e: (sum(e), e), reverse=True):
            c = self.terms[b]
            mono = "*".join(
                names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(b) if e)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if mono and a == 1:
                body = mono
            elif mono:
                body = f"{a}*{mono}"
            else:
                body = str(a)
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def evaluate(self, point: Sequence):
        total = Fraction(0)
        for b, c in self.terms.items():
            v = c
            for x, e in zip(point, b):
                if e:
                    v *= x ** e
            total += v
        return total

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Replace variable ``i`` by ``images[i]`` (all in a common ring)."""
        if len(images) != self.n_vars:
            raise DimensionMismatch("need one image per variable")
        target = images[0].n_vars
        out = Polynomial(target)
        cache: dict = {}
        for b, c in self.terms.items():
            term = Polynomial.constant(target, c)
            for i, e in enumerate(b):
                if e:
                    key = (i, e)
                    if key not in cache:
                        cache[key] = images[i] ** e
                    term = term * cache[key]
            out = out + term
        return out

    def coordinate_vector(self, m: int | None = None) -> dict:
        """Sparse coordinates in the monomial basis of ``S_m``."""
        if m is None:
            m = self.degree
        idx = monomial_index(self.n_vars, m)
        out = {}
        for b, c in self.terms.items():
            if sum(b) != m:
                raise DimensionMismatch(f"term {b} is not of degree {m}")
            out[idx[b]] = c
        return out

    @classmethod
    def from_vector(cls, n_vars: int, m: int, vec) -> "Polynomial":
        monos = monomials_of_degree(n_vars, m)
        items = vec.items() if isinstance(vec, dict) else enumerate(vec)
        return cls(n_vars, {monos[i]: c for i, c in items if c})


@dataclass(frozen=True)
class HomogeneousIdeal:
    """Ideal of ``S = k[x_0..x_n]`` given by homogeneous generators."""

    n_vars: int
    generators: tuple = ()

    def __post_init__(self):
        if self.n_vars < 1:
            raise InvalidInput("n_vars must be positive")
        gens = []
        for g in self.generators:
            if not isinstance(g, Polynomial):
                g = Polynomial(self.n_vars, g)
            if g.n_vars != self.n_vars:
                raise DimensionMismatch("generator in the wrong ring")
            if g.is_zero():
                raise InvalidInput("zero generator")
            if not g.is_homogeneous():
                raise InvalidInput(f"generator {g.to_string()} is not homogeneous")
            gens.append(g)
        object.__setattr__(self, "generators", tuple(gens))

    @classmethod
    def zero(cls, n_vars: int) -> "HomogeneousIdeal":
        return cls(n_vars, ())

    def __len__(self):
        return len(self.generators)

    def transform(self, images: Sequence[Polynomial]) -> "HomogeneousIdeal":
        """Ideal generated by the generators with variables substituted."""
        return HomogeneousIdeal(images[0].n_vars,
                                tuple(g.substitute(images) for g in self.generators))


@dataclass(frozen=True)
class GradedPiece:
    degree: int
    n_vars: int
    basis_matrix: tuple  # RREF rows as sparse dicts
    pivot_columns: tuple

    @property
    def dim(self) -> int:
        return len(self.basis_matrix)

    @property
    def ambient_dim(self) -> int:
        return math.comb(self.n_vars - 1 + self.degree, self.degree)

    def dense_rows(self) -> list:
        n = self.ambient_dim
        return [[r.get(j, Fraction(0)) for j in range(n)] for r in self.basis_matrix]

    def echelon(self) -> Echelon:
        ech = Echelon()
        for p, r in zip(self.pivot_columns, self.basis_matrix):
            ech.rows[p] = dict(r)
        return ech


def multiples_in_degree(generators: Iterable[Polynomial], n_vars: int, m: int) -> list:
    """Sparse coordinate vectors of ``g*u`` for every generator ``g`` and
    monomial ``u`` with ``deg g + deg u = m``."""
    idx = monomial_index(n_vars, m)
    rows = []
    for g in generators:
        e = g.degree
        if e > m:
            continue
        for u in monomials_of_degree(n_vars, m - e):
            rows.append({idx[add_exponents(b, u)]: c for b, c in g.terms.items()})
    return rows


@lru_cache(maxsize=256)
def ideal_graded_piece(I: HomogeneousIdeal, m: int) -> GradedPiece:
    """Degree-``m`` piece of the ideal generated by ``I.generators`` (no saturation)."""
    if m < 0:
        raise InvalidInput("degree must be non-negative")
    rows, piv = echelonize(multiples_in_degree(I.generators, I.n_vars, m))
    return GradedPiece(m, I.n_vars, tuple(rows), tuple(piv))


def hilbert_function(I: HomogeneousIdeal, m: int) -> int:
    """``dim (S/I)_m``."""
    if m < 0:
        return 0
    return math.comb(I.n_vars - 1 + m, m) - ideal_graded_piece(I, m).dim


def reduce_against_piece(v: Sequence, P: GradedPiece) -> list:
    """Normal form of the dense vector ``v`` modulo the row space of ``P``."""
    n = P.ambient_dim
    if len(v) != n:
        raise DimensionMismatch(f"vector has length {len(v)}, expected {n}")
    r = P.echelon().reduce({i: to_fraction(x) for i, x in enumerate(v) if x})
    return [r.get(i, Fraction(0)) for i in range(n)]


@dataclass(frozen=True)
class RationalPolynomial:
    """Univariate polynomial in ``m``; ``coefficients[k]`` multiplies ``m**k``."""

    coefficients: tuple = field(default=())

    def __post_init__(self):
        c = [Fraction(x) for x in self.coefficients]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading_coefficient(self) -> Fraction:
        return self.coefficients[-1] if self.coefficients else Fraction(0)

    def coefficient(self, k: int) -> Fraction:
        return self.coefficients[k] if 0 <= k < len(self.coefficients) else Fraction(0)

    def nlc(self, D: int | None = None) -> Fraction:
        """Normalized leading coefficient: ``D! * coeff of m**D``."""
        if D is None:
            D = max(self.degree, 0)
        return math.factorial(D) * self.coefficient(D)

    def __call__(self, m) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * m + c
        return acc

    def __str__(self):
        if not self.coefficients:
            return "0"
        parts = []
        for k in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[k]
            if c:
                parts.append(f"({c})" + ("" if k == 0 else "*m" if k == 1 else f"*m^{k}"))
        return " + ".join(parts)


def nlc_interpolate(samples: Sequence[tuple], D: int) -> RationalPolynomial:
    """Unique polynomial of degree <= ``D`` through ``D + 1`` samples.

    Uses the first ``D + 1`` samples after sorting by ``m`` and Newton divided
    differences.  Extra samples are ignored here; :func:`fit_polynomial`
    checks them.
    """
    pts = sorted((int(m), to_fraction(v)) for m, v in samples)
    ms = [m for m, _ in pts]
    if len(set(ms)) != len(ms):
        raise InvalidInput("duplicate m values in samples")
    if len(pts) < D + 1:
        raise InvalidInput(f"need at least {D + 1} samples for degree {D}")
    pts = pts[: D + 1]
    xs = [Fraction(m) for m, _ in pts]
    dd = [v for _, v in pts]
    coef = [dd[0]]
    for level in range(1, len(pts)):
        dd = [(dd[i + 1] - dd[i]) / (xs[i + level] - xs[i]) for i in range(len(dd) - 1)]
        coef.append(dd[0])
    # expand the Newton form into the monomial basis
    poly = [Fraction(0)]
    for k in range(len(coef) - 1, -1, -1):
        # poly = poly * (m - xs[k]) + coef[k]
        shifted = [Fraction(0)] + poly
        for i, c in enumerate(poly):
            shifted[i] -= xs[k] * c
        shifted[0] += coef[k]
        poly = shifted
    return RationalPolynomial(tuple(poly))


def fit_polynomial(samples: Sequence[tuple], D: int) -> RationalPolynomial | None:
    """Degree-<=D interpolant through *all* samples, or None if none exists."""
    p = nlc_interpolate(samples, D)
    if all(p(m) == to_fraction(v) for m, v in samples):
        return p
    return None


def minimal_degree_fit(samples: Sequence[tuple]) -> RationalPolynomial | None:
    """Lowest-degree polynomial through all samples, certified by at least one
    surplus sample; None if the samples do not certify any degree."""
    for D in range(0, len(samples) - 1):
        p = fit_polynomial(samples, D)
        if p is not None:
            return p
    return None
