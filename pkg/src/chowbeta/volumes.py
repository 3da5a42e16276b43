"""Volumes, the normalized volume function ``g(t)``, the asymptotic volume
constant ``beta_Z(L)`` along three independent routes, and Seshadri bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .chow import ChowWeightResult, chow_weights, hilbert_polynomial, s_function
from .errors import ChowBetaError, InvalidInput
from .exact_algebra import hilbert_function
from .filtration import (
    SubschemeSpec,
    VarietySpec,
    a_max_estimate,
    discrete_measure,
    expectation,
    filtered_dimension,
    filtered_embedding,
    point_of,
    vanishing_numbers,
)
from .okounkov import (
    AdmissibleFlag,
    concave_transform,
    default_grid,
    integrate_pl,
    okounkov_body,
)

ZERO_THRESHOLD = 1e-9
DEFAULT_TOL = 0.02


class SeshadriViolation(ChowBetaError):
    """A Seshadri-constant inequality failed; signals a computation bug."""


def volume_L(X: VarietySpec, m_range: tuple = (1, 8)) -> Fraction:
    """``d!`` times the leading coefficient of the certified Hilbert polynomial."""
    hp = hilbert_polynomial(X.ideal, m_range, X.dim_hint)
    return hp.nlc(hp.degree)


@dataclass(frozen=True)
class Extrapolated:
    value: float
    band: float
    samples: tuple  # ((m, exact value), ...)


def _lsq_limit(samples: Sequence[tuple], order: int) -> Fraction:
    """Constant term of the exact least-squares fit ``a + b/m + c/m^2 + ...``."""
    k = min(order + 1, len(samples))
    rows = [[Fraction(1, m ** j) for j in range(k)] for m, _ in samples]
    ys = [v for _, v in samples]
    ata = [[sum(r[i] * r[j] for r in rows) for j in range(k)] for i in range(k)]
    aty = [sum(r[i] * y for r, y in zip(rows, ys)) for i in range(k)]
    # Gaussian elimination on the normal equations
    aug = [ata[i] + [aty[i]] for i in range(k)]
    for c in range(k):
        p = next(r for r in range(c, k) if aug[r][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        for r in range(k):
            if r != c and aug[r][c]:
                f = aug[r][c] / aug[c][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return aug[0][k] / aug[0][0]


def extrapolate(samples: Sequence[tuple], order: int = 2) -> Extrapolated:
    """Limit of a sequence sampled at integers ``m`` under the model
    ``a + b/m + c/m^2``; the band compares fits with and without the smallest ``m``."""
    samples = sorted(samples)
    full = _lsq_limit(samples, order)
    tail = samples[1:]
    band = abs(full - _lsq_limit(tail, order)) if len(tail) > order + 1 else Fraction(0)
    return Extrapolated(float(full), float(band), tuple(samples))


def g_function(X: VarietySpec, Z: SubschemeSpec, t, m_list: Sequence[int],
               vol: Fraction | None = None) -> Extrapolated:
    """``Vol(L, v >= t) / Vol(L)`` extrapolated in ``m``.

    The level-``m`` sample is ``d! dim F^{mt} / (m^d Vol(L))`` with the
    filtered dimension interpolated linearly between the integer orders
    ``floor(mt)`` and ``floor(mt) + 1``.  This changes each sample by
    ``O(1/m)`` only, and keeps the ``1/m`` tail the same for every residue of
    ``mt``, which a single extrapolation fit needs.
    """
    t = Fraction(t)
    if t < 0:
        raise InvalidInput("t must be non-negative")
    d = X.dimension()
    if vol is None:
        vol = volume_L(X)
    samples = []
    for m in m_list:
        x = m * t
        k = math.floor(x)
        theta = x - k
        dim = (1 - theta) * filtered_dimension(X, Z, m, k)
        if theta:
            dim += theta * filtered_dimension(X, Z, m, k + 1)
        samples.append((m, math.factorial(d) * dim / (m ** d * vol)))
    return extrapolate(samples)


@dataclass(frozen=True)
class BetaG:
    value: float
    t_eff: Fraction
    grid: tuple
    g_values: tuple
    bands: tuple


def beta_via_g(X: VarietySpec, Z: SubschemeSpec, m_range: tuple = (1, 8),
               t_grid: Sequence | None = None, N: int = 32) -> BetaG:
    """Trapezoid integral of the extrapolated ``g(t)`` over ``[0, t_eff]``."""
    lo, hi = m_range
    ms = list(range(lo, hi + 1))
    vol = volume_L(X, m_range)
    if t_grid is None:
        t_grid = default_grid(a_max_estimate(X, Z, m_range).value, N)
    grid = sorted(Fraction(t) for t in t_grid)
    gv, bands = [], []
    for t in grid:
        e = g_function(X, Z, t, ms, vol)
        gv.append(max(e.value, 0.0))
        bands.append(e.band)
    cut = next((i for i, v in enumerate(gv) if v < ZERO_THRESHOLD), len(gv) - 1)
    total = 0.0
    for i in range(cut):
        total += float(grid[i + 1] - grid[i]) * (gv[i] + gv[i + 1]) / 2
    return BetaG(total, grid[cut], tuple(grid), tuple(gv), tuple(bands))


@dataclass(frozen=True)
class BetaChow:
    value: Fraction
    chow: ChowWeightResult
    weights: tuple
    embedding_changed: bool


def beta_via_chow(X: VarietySpec, Z: SubschemeSpec, m_range: tuple = (1, 8)) -> BetaChow:
    """Normalized Chow weight of ``X`` in the embedding given by a filtered basis."""
    fe = filtered_embedding(X, Z)
    res = chow_weights(fe.variety.ideal, fe.weights, m_range, X.dim_hint)
    changed = fe.variety.ideal != X.ideal
    return BetaChow(res.normalized, res, fe.weights.entries, changed)


def beta_via_transform(X: VarietySpec, Z: SubschemeSpec, flag: AdmissibleFlag, M: int = 6,
                       t_grid: Sequence | None = None) -> Fraction:
    G = concave_transform(X, Z, flag, M, t_grid)
    return integrate_pl(G, okounkov_body(X, flag, M))


def expectation_sequence(X: VarietySpec, Z: SubschemeSpec, m_range: tuple) -> tuple:
    lo, hi = m_range
    return tuple((m, expectation(discrete_measure(vanishing_numbers(X, Z, m))))
                 for m in range(lo, hi + 1))


def fitted_inverse_m_coefficient(seq: Sequence[tuple], limit: Fraction) -> Fraction:
    """Least-squares ``b`` in ``E(nu_m) - limit ~ b/m``."""
    num = sum((e - limit) / m for m, e in seq)
    den = sum(Fraction(1, m * m) for m, _ in seq)
    return num / den


@dataclass(frozen=True)
class BetaReport:
    beta_g: float
    beta_g_band: float
    beta_transform: Fraction | None
    beta_chow: Fraction
    vol_L: Fraction
    a_max_used: Fraction
    m_range: tuple
    discrepancies: dict
    e_c: Fraction
    dim_X: int
    degree_L_X: int
    expectations: tuple = field(default=())
    inverse_m_coefficient: Fraction = Fraction(0)
    t_eff: Fraction = Fraction(0)

    def within(self, tol: float) -> bool:
        return all(v <= tol for v in self.discrepancies.values())


def beta_report(X: VarietySpec, Z: SubschemeSpec, flag: AdmissibleFlag | None = None,
                m_range: tuple = (1, 8), M: int = 6, N: int = 32) -> BetaReport:
    chow = beta_via_chow(X, Z, m_range)
    amax = a_max_estimate(X, Z, m_range).value
    grid = default_grid(amax, N)
    bg = beta_via_g(X, Z, m_range, grid)
    bt = beta_via_transform(X, Z, flag, M, grid) if flag is not None else None
    exact = chow.value
    disc = {"g_vs_chow": abs(bg.value - float(exact))}
    if bt is not None:
        disc["transform_vs_chow"] = abs(float(bt) - float(exact))
        disc["g_vs_transform"] = abs(bg.value - float(bt))
    seq = expectation_sequence(X, Z, m_range)
    return BetaReport(
        beta_g=bg.value,
        beta_g_band=max(bg.bands) if bg.bands else 0.0,
        beta_transform=bt,
        beta_chow=exact,
        vol_L=volume_L(X, m_range),
        a_max_used=amax,
        m_range=tuple(m_range),
        discrepancies=disc,
        e_c=chow.chow.e_c,
        dim_X=chow.chow.dim_X,
        degree_L_X=chow.chow.degree_L_X,
        expectations=seq,
        inverse_m_coefficient=fitted_inverse_m_coefficient(seq, exact),
        t_eff=bg.t_eff,
    )


@dataclass(frozen=True)
class SeshadriBound:
    upper: Fraction
    upper_from_beta: Fraction
    upper_from_beta_point: Fraction | None
    known_epsilon: Fraction | None
    beta: Fraction
    checks: tuple = ()  # ((name, passed, lhs, rhs), ...)


def seshadri_bounds(X: VarietySpec, Z: SubschemeSpec, known_epsilon=None,
                    m_range: tuple = (1, 8), strict: bool = True) -> SeshadriBound:
    """Upper bounds for ``epsilon(L; Z)``: ``e_X(c) / (d deg_L X)``, and from
    ``beta`` the weaker ``(d+1) beta`` (``(d+1) beta / d`` when ``Z`` is a point).
    With ``known_epsilon`` the inequalities are checked, and raised if ``strict``."""
    bc = beta_via_chow(X, Z, m_range)
    res = bc.chow
    d, deg = res.dim_X, res.degree_L_X
    if d < 1:
        raise InvalidInput("Seshadri bounds need dim X >= 1")
    beta = bc.value
    is_point = point_of(Z) is not None
    upper = res.e_c / (d * deg)
    general = (d + 1) * beta
    refined = Fraction(d + 1, d) * beta if is_point else None
    checks = []
    eps = None
    if known_epsilon is not None:
        eps = Fraction(known_epsilon)
        checks.append(("epsilon <= e_c/(d deg)", eps <= upper, eps, upper))
        checks.append(("beta >= epsilon/(d+1)", beta >= eps / (d + 1), beta, eps / (d + 1)))
        if is_point:
            checks.append(("beta >= d/(d+1) epsilon", beta >= Fraction(d, d + 1) * eps,
                           beta, Fraction(d, d + 1) * eps))
        failed = [c[0] for c in checks if not c[1]]
        if failed and strict:
            raise SeshadriViolation(f"Seshadri inequalities violated: {', '.join(failed)}")
    return SeshadriBound(upper, general, refined, eps, beta, tuple(checks))


def hilbert_values(X: VarietySpec, m_range: tuple) -> tuple:
    lo, hi = m_range
    return tuple((m, hilbert_function(X.ideal, m)) for m in range(lo, hi + 1))


def expectation_identity(X: VarietySpec, Z: SubschemeSpec, m: int) -> tuple:
    """``(E(nu_m), s(m,c) / (m Hilb(m)))`` in the filtered embedding."""
    fe = filtered_embedding(X, Z)
    lhs = expectation(discrete_measure(vanishing_numbers(X, Z, m)))
    rhs = s_function(fe.variety.ideal, m, fe.weights) / (m * hilbert_function(fe.variety.ideal, m))
    return lhs, rhs
