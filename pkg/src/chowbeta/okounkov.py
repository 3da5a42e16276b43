"""Flag valuations, Okounkov bodies (d <= 2) and concave transforms.

Supported flags:

* curves (``d = 1``): a single smooth point ``p``; the valuation is ``ord_p``;
* ``X = P^2``: a line ``l`` and a point ``p`` on it; in coordinates
  ``y_0 = l``, ``y_1`` vanishing at ``p``, the valuation of a form is the
  lexicographically smallest ``(a, b)`` among its monomials
  ``y_0^a y_1^b y_2^c``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.spatial import Delaunay

from .errors import (
    GeometryError,
    InfiniteValuation,
    InvalidFixture,
    InvalidInput,
    UnsupportedFixture,
)
from .exact_algebra import (
    Polynomial,
    hilbert_function,
    ideal_graded_piece,
    monomial_index,
    monomials_of_degree,
)
from .filtration import (
    SubschemeSpec,
    VarietySpec,
    _chart,
    _invert,
    adapted_basis,
    point_of,
    series_columns,
    vanishing_numbers,
)
from .kernels import Echelon


@dataclass(frozen=True)
class AdmissibleFlag:
    """Flag ``X ⊋ Y_1 ⊋ ... ⊋ Y_d``; ``stages`` holds ``Y_1..Y_d``."""

    variety: VarietySpec
    stages: tuple

    @property
    def dim(self) -> int:
        return len(self.stages)


def standard_flag(X: VarietySpec, point: SubschemeSpec | None = None) -> AdmissibleFlag:
    """Coordinate flag: ``(p,)`` on a curve, ``(V(x0), V(x0, x1))`` on ``P^2``."""
    d = X.dimension()
    n = X.n_vars
    if d == 1:
        if point is None:
            raise InvalidInput("a curve flag needs its point")
        return AdmissibleFlag(X, (point,))
    if d == 2 and n == 3 and not X.ideal.generators:
        from .exact_algebra import HomogeneousIdeal

        x = [Polynomial.variable(3, i) for i in range(3)]
        return AdmissibleFlag(X, (SubschemeSpec(HomogeneousIdeal(3, (x[0],))),
                                  SubschemeSpec(HomogeneousIdeal(3, (x[0], x[1])))))
    raise UnsupportedFixture(f"no standard flag for dim {d} in P^{n - 1}")


class _CurveChart:
    def __init__(self, flag: AdmissibleFlag):
        X = flag.variety
        pt = point_of(flag.stages[0])
        if pt is None:
            raise UnsupportedFixture("curve flags must end in a point")
        self.X = X
        self.point = pt
        self.chart = _chart(X.ideal, pt, 1)

    def precision(self, m: int) -> int:
        orders = [o for o, _ in adapted_basis(self.X, point_subscheme(self.point, self.X.n_vars), m,
                                              with_vectors=False)]
        return (max(orders) if orders else 0) + 1

    def images(self, m: int) -> tuple:
        K = self.precision(m)
        cols = series_columns(1, K)
        return tuple({cols[e]: c for e, c in s.items()} for s in self.chart.monomial_images(m, K))

    def rank(self, m: int):
        return None

    def value(self, m: int, col: int) -> tuple:
        return (col,)


@lru_cache(maxsize=64)
def point_subscheme(point: tuple, n: int) -> SubschemeSpec:
    """Ideal of a point given by coordinates."""
    from .exact_algebra import HomogeneousIdeal

    j = next(i for i, x in enumerate(point) if x != 0)
    gens = []
    for i in range(n):
        if i == j:
            continue
        coeffs = [Fraction(0)] * n
        coeffs[i] = point[j]
        coeffs[j] = -point[i]
        gens.append(Polynomial.linear_form(coeffs))
    return SubschemeSpec(HomogeneousIdeal(n, tuple(gens)))


class _PlaneChart:
    def __init__(self, flag: AdmissibleFlag):
        X = flag.variety
        if X.n_vars != 3 or X.ideal.generators:
            raise UnsupportedFixture("two-dimensional flags are only supported on P^2")
        line, pt_spec = flag.stages
        lin = [g for g in line.z_ideal.generators if g.degree == 1]
        if len(lin) != 1:
            raise InvalidFixture("the first flag stage must be a line given by one linear form")
        pt = point_of(pt_spec)
        if pt is None or lin[0].evaluate(pt) != 0:
            raise InvalidFixture("the flag point must lie on the flag line")
        y0 = lin[0].coordinate_vector(1)
        ech = Echelon()
        ech.add(y0)
        y1 = None
        for g in pt_spec.z_ideal.generators:
            if g.degree == 1:
                v = g.coordinate_vector(1)
                if ech.add(v) is not None:
                    y1 = v
                    break
        j = next(i for i, x in enumerate(pt) if x != 0)
        y2 = {j: Fraction(1)}
        A = [[v.get(k, Fraction(0)) for k in range(3)] for v in (y0, y1, y2)]
        Ainv = _invert(A)
        self.x_in_y = [Polynomial.linear_form(Ainv[i]) for i in range(3)]
        self._images: dict = {}

    def images(self, m: int) -> tuple:
        if m not in self._images:
            idx = monomial_index(3, m)
            out = []
            for b in monomials_of_degree(3, m):
                p = Polynomial.constant(3)
                for i, e in enumerate(b):
                    if e:
                        p = p * self.x_in_y[i] ** e
                out.append({idx[e]: c for e, c in p.terms.items()})
            self._images[m] = tuple(out)
        return self._images[m]

    def rank(self, m: int):
        monos = monomials_of_degree(3, m)
        order = sorted(range(len(monos)), key=lambda i: (monos[i][0], monos[i][1]))
        rank = [0] * len(monos)
        for r, i in enumerate(order):
            rank[i] = r
        return rank

    def value(self, m: int, col: int) -> tuple:
        b = monomials_of_degree(3, m)[col]
        return (b[0], b[1])


@lru_cache(maxsize=32)
def _flag_chart(flag: AdmissibleFlag):
    d = flag.dim
    if d != flag.variety.dimension():
        raise InvalidFixture("flag length must equal dim X")
    if d == 1:
        return _CurveChart(flag)
    if d == 2:
        return _PlaneChart(flag)
    raise UnsupportedFixture(f"flags in dimension {d} are not supported (d <= 2 only)")


def _image_of(vec: dict, images: Sequence[dict]) -> dict:
    out: dict = {}
    for j, c in vec.items():
        for col, x in images[j].items():
            v = out.get(col, 0) + c * x
            if v:
                out[col] = v
            else:
                out.pop(col, None)
    return out


def flag_valuation(f: Polynomial, flag: AdmissibleFlag) -> tuple:
    """Valuation vector of the section represented by the form ``f``."""
    X = flag.variety
    if f.is_zero():
        raise InfiniteValuation("the zero section has no valuation")
    if not f.is_homogeneous():
        raise InvalidInput("f must be homogeneous")
    m = f.degree
    piece = ideal_graded_piece(X.ideal, m)
    if not piece.echelon().reduce(f.coordinate_vector(m)):
        raise InfiniteValuation("f vanishes on X")
    chart = _flag_chart(flag)
    img = _image_of(f.coordinate_vector(m), chart.images(m))
    rank = chart.rank(m)
    lead = min(img) if rank is None else min(img, key=rank.__getitem__)
    return chart.value(m, lead)


def value_set(vectors: Sequence[dict], flag: AdmissibleFlag, m: int) -> list:
    """Valuation vectors realized by the span of ``vectors`` (sparse, in ``S_m``)."""
    chart = _flag_chart(flag)
    ech = Echelon(chart.rank(m))
    images = chart.images(m)
    for v in vectors:
        ech.add(_image_of(v, images))
    return sorted(chart.value(m, p) for p in ech.rows)


# -- exact planar geometry -------------------------------------------------

def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Sequence[tuple]) -> list:
    """Exact hull vertices (counter-clockwise for d = 2; ``[lo, hi]`` for d = 1)."""
    pts = sorted(set(tuple(p) for p in points))
    if not pts:
        return []
    if len(pts[0]) == 1:
        return [pts[0], pts[-1]] if len(pts) > 1 else [pts[0]]
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def polygon_area(vertices: Sequence[tuple]) -> Fraction:
    n = len(vertices)
    if n < 3:
        return Fraction(0)
    s = Fraction(0)
    for i in range(n):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % n]
        s += x1 * y2 - x2 * y1
    return abs(s) / 2


def contains(hull: Sequence[tuple], y: tuple) -> bool:
    """Exact membership in a convex hull returned by :func:`convex_hull`."""
    if not hull:
        return False
    if len(y) == 1:
        return hull[0][0] <= y[0] <= hull[-1][0]
    n = len(hull)
    if n == 1:
        return tuple(hull[0]) == tuple(y)
    if n == 2:
        a, b = hull
        return _cross(a, b, y) == 0 and min(a, b) <= tuple(y) <= max(a, b)
    return all(_cross(hull[i], hull[(i + 1) % n], y) >= 0 for i in range(n))


@dataclass(frozen=True)
class OkounkovBody:
    vertices: tuple
    sample_level: int
    dim: int

    @property
    def volume(self) -> Fraction:
        """Euclidean volume; ``d! * volume`` approximates ``Vol(L)``."""
        if self.dim == 1:
            return self.vertices[-1][0] - self.vertices[0][0]
        return polygon_area(self.vertices)

    @property
    def normalized_volume(self) -> Fraction:
        return self.volume * (1 if self.dim == 1 else 2)


def okounkov_body(X: VarietySpec, flag: AdmissibleFlag, M: int) -> OkounkovBody:
    """Inner approximation: hull of ``nu(s)/m`` over sections of degree ``m <= M``."""
    if M < 1:
        raise InvalidInput("M must be positive")
    d = flag.dim
    if d > 2:
        raise UnsupportedFixture("Okounkov bodies are only computed for d <= 2")
    pts = []
    for m in range(1, M + 1):
        h = hilbert_function(X.ideal, m)
        if h == 0:
            continue
        n = len(monomials_of_degree(X.n_vars, m))
        vals = value_set([{j: Fraction(1)} for j in range(n)], flag, m)
        if len(vals) != h:
            raise InvalidFixture(f"found {len(vals)} valuation vectors in degree {m}, expected {h}")
        pts.extend(tuple(Fraction(v, m) for v in nu) for nu in vals)
    return OkounkovBody(tuple(convex_hull(pts)), M, d)


# -- concave transform -----------------------------------------------------

@dataclass(frozen=True)
class PLFunction:
    dim: int
    vertices: tuple      # points in Q^d
    simplices: tuple     # index tuples (d + 1 entries)
    values: tuple        # Fraction per vertex
    levels: tuple = field(default=())  # ((t, hull vertices), ...)
    sample_level: int = 0

    def evaluate(self, y) -> float:
        """Float evaluation of the surrogate at ``y`` (nan outside the triangulation)."""
        y = np.asarray(y, dtype=float).reshape(-1)
        for s in self.simplices:
            P = np.array([[float(c) for c in self.vertices[i]] for i in s])
            vals = np.array([float(self.values[i]) for i in s])
            if self.dim == 1:
                a, b = P[0, 0], P[1, 0]
                if min(a, b) - 1e-12 <= y[0] <= max(a, b) + 1e-12:
                    if a == b:
                        return float(max(vals))
                    lam = (y[0] - a) / (b - a)
                    return float((1 - lam) * vals[0] + lam * vals[1])
            else:
                T = np.column_stack([P[1] - P[0], P[2] - P[0]])
                if abs(np.linalg.det(T)) < 1e-15:
                    continue
                lam = np.linalg.solve(T, y - P[0])
                if lam.min() >= -1e-9 and lam.sum() <= 1 + 1e-9:
                    return float(vals[0] + lam[0] * (vals[1] - vals[0]) + lam[1] * (vals[2] - vals[0]))
        return float("nan")


def discrete_transform(X: VarietySpec, Z: SubschemeSpec, flag: AdmissibleFlag, m: int) -> dict:
    """``{nu: k}`` with ``k`` the largest order along ``Z`` of a degree-``m``
    section having valuation ``nu``."""
    chart = _flag_chart(flag)
    images = chart.images(m)
    ech = Echelon(chart.rank(m))
    out: dict = {}
    basis = adapted_basis(X, Z, m)
    for order, vec in sorted(basis, key=lambda ov: -ov[0]):
        p = ech.add(_image_of(vec, images))
        if p is not None:
            out[chart.value(m, p)] = order
    return out


def default_grid(a_max: Fraction, N: int = 32) -> list:
    return [a_max * Fraction(i, N) for i in range(N + 1)]


def concave_transform(X: VarietySpec, Z: SubschemeSpec, flag: AdmissibleFlag, M: int,
                      t_grid: Sequence | None = None) -> PLFunction:
    """Piecewise-linear lower approximation of the concave transform ``G``.

    Vertices are the points ``nu/m`` (``m <= M``) together with the vertices of
    the level bodies ``{G >= t}`` for ``t`` in ``t_grid``.  Each vertex gets the
    largest value certified for it; the surface is then triangulated.
    """
    d = flag.dim
    if d > 2:
        raise UnsupportedFixture("concave transforms are only computed for d <= 2")
    points: dict = {}
    for m in range(1, M + 1):
        if hilbert_function(X.ideal, m) == 0:
            continue
        if m == 1 and not adapted_basis(X, Z, 1, with_vectors=False):
            raise InvalidFixture("empty filtered piece at t = 0")
        for nu, k in discrete_transform(X, Z, flag, m).items():
            y = tuple(Fraction(v, m) for v in nu)
            val = Fraction(k, m)
            if val > points.get(y, Fraction(-1)):
                points[y] = val
    if t_grid is None:
        top = max(points.values())
        t_grid = default_grid(top)
    t_grid = sorted(Fraction(t) for t in t_grid)
    levels = []
    for t in t_grid:
        hull = convex_hull([y for y, v in points.items() if v >= t])
        if hull:
            levels.append((t, tuple(hull)))
    verts = dict(points)
    for t, hull in levels:
        for y in hull:
            if t > verts.get(y, Fraction(-1)):
                verts[y] = t
    for y in list(verts):
        for t, hull in reversed(levels):
            if t <= verts[y]:
                break
            if contains(hull, y):
                verts[y] = t
                break
    if d == 1:
        return _envelope_1d(verts, levels, M)
    return _triangulate_2d(verts, levels, M)


def _envelope_1d(verts: dict, levels, M) -> PLFunction:
    pts = sorted((y[0], v) for y, v in verts.items())
    hull: list = []
    for p in pts:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) >= 0:
            hull.pop()
        hull.append(p)
    vertices = tuple((x,) for x, _ in hull)
    values = tuple(v for _, v in hull)
    simplices = tuple((i, i + 1) for i in range(len(hull) - 1))
    return PLFunction(1, vertices, simplices, values, tuple(levels), M)


def _orient(a, b, c) -> Fraction:
    return _cross(a, b, c)


def _above(pa, pb, pc, pd, va, vb, vc, vd) -> bool:
    """Is the lifted point d strictly above the plane through lifted a, b, c?"""
    det = _orient(pa, pb, pc)
    if det == 0:
        return False
    la = _orient(pd, pb, pc) / det
    lb = _orient(pa, pd, pc) / det
    lc = _orient(pa, pb, pd) / det
    return vd > la * va + lb * vb + lc * vc


def _triangulate_2d(verts: dict, levels, M) -> PLFunction:
    keys = sorted(verts)
    if len(keys) < 3:
        raise GeometryError("degenerate two-dimensional body")
    arr = np.array([[float(c) for c in y] for y in keys])
    tri = Delaunay(arr)
    simplices = []
    for s in tri.simplices:
        a, b, c = (int(i) for i in s)
        o = _orient(keys[a], keys[b], keys[c])
        if o == 0:
            continue
        simplices.append((a, b, c) if o > 0 else (a, c, b))
    values = [verts[y] for y in keys]
    simplices = _lawson_concave(keys, values, simplices)
    return PLFunction(2, tuple(keys), tuple(simplices), tuple(values), tuple(levels), M)


def _lawson_concave(pts, vals, tris, max_rounds: int = 200):
    """Flip edges where the interpolant bends upward, when the flip is legal."""
    tris = [tuple(t) for t in tris]
    for _ in range(max_rounds):
        edge_map: dict = {}
        for ti, t in enumerate(tris):
            for k in range(3):
                a, b = t[k], t[(k + 1) % 3]
                edge_map.setdefault(frozenset((a, b)), []).append((ti, t[(k + 2) % 3]))
        flipped = False
        used: set = set()
        for e, lst in edge_map.items():
            if len(lst) != 2:
                continue
            (t1, c), (t2, dd) = lst
            if t1 in used or t2 in used:
                continue
            a, b = tuple(e)
            if not _above(pts[a], pts[b], pts[c], pts[dd], vals[a], vals[b], vals[c], vals[dd]):
                continue
            # new diagonal c-d must split the quadrilateral into two proper triangles
            o1 = _orient(pts[c], pts[dd], pts[a])
            o2 = _orient(pts[c], pts[dd], pts[b])
            if o1 == 0 or o2 == 0 or (o1 > 0) == (o2 > 0):
                continue
            n1 = (c, dd, a) if o1 > 0 else (c, a, dd)
            n2 = (c, dd, b) if o2 > 0 else (c, b, dd)
            tris[t1], tris[t2] = n1, n2
            used.update((t1, t2))
            flipped = True
        if not flipped:
            break
    return tris


def integral(G: PLFunction) -> Fraction:
    """Exact ``∫ G dλ`` over the triangulation."""
    total = Fraction(0)
    for s in G.simplices:
        if G.dim == 1:
            a, b = (G.vertices[i][0] for i in s)
            total += abs(b - a) * (G.values[s[0]] + G.values[s[1]]) / 2
        else:
            P = [G.vertices[i] for i in s]
            area = abs(_orient(*P)) / 2
            total += area * sum(G.values[i] for i in s) / 3
    return total


def covered_volume(G: PLFunction) -> Fraction:
    total = Fraction(0)
    for s in G.simplices:
        if G.dim == 1:
            a, b = (G.vertices[i][0] for i in s)
            total += abs(b - a)
        else:
            total += abs(_orient(*[G.vertices[i] for i in s])) / 2
    return total


def integrate_pl(G: PLFunction, body: OkounkovBody) -> Fraction:
    """``d!/Vol(L) * ∫_Δ G dλ`` with ``Vol(L) = d! vol(Δ)``; i.e. the mean of ``G`` on ``Δ``."""
    vol = body.volume
    if vol == 0:
        raise GeometryError("body has zero volume")
    if covered_volume(G) != vol:
        raise GeometryError(
            f"triangulation covers volume {covered_volume(G)}, body has {vol}")
    return integral(G) / vol


def concavity_defect(G: PLFunction, max_pairs: int = 4000) -> float:
    """Largest ``(G(y1)+G(y2))/2 - G((y1+y2)/2)`` over sampled vertex pairs (<= 0 when concave)."""
    n = len(G.vertices)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if len(pairs) > max_pairs:
        step = len(pairs) / max_pairs
        pairs = [pairs[int(k * step)] for k in range(max_pairs)]
    worst = float("-inf")
    for i, j in pairs:
        mid = [(float(a) + float(b)) / 2 for a, b in zip(G.vertices[i], G.vertices[j])]
        g = G.evaluate(mid)
        if g != g:
            continue
        worst = max(worst, (float(G.values[i]) + float(G.values[j])) / 2 - g)
    return worst if pairs else 0.0


def body_from_transform(G: PLFunction) -> OkounkovBody:
    hull = convex_hull(G.vertices)
    return OkounkovBody(tuple(hull), G.sample_level, G.dim)


def transform_expectation(X: VarietySpec, Z: SubschemeSpec, flag: AdmissibleFlag, M: int,
                          t_grid: Sequence | None = None) -> Fraction:
    G = concave_transform(X, Z, flag, M, t_grid)
    return integrate_pl(G, okounkov_body(X, flag, M))


def a_max_from_profile(X: VarietySpec, Z: SubschemeSpec, m: int) -> Fraction:
    return Fraction(vanishing_numbers(X, Z, m).a_max, m)
