import importlib
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from chowbeta import _kernels_py, kernels

BACKENDS = [_kernels_py]
try:
    BACKENDS.append(importlib.import_module("chowbeta._kernels"))
except ImportError:
    pass

entry = st.fractions(min_value=-4, max_value=4, max_denominator=3)
matrices = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.dictionaries(st.integers(0, n - 1), entry, max_size=n), max_size=7))


def sympy_rank(rows, n=8):
    if not rows:
        return 0
    return sympy.Matrix([[sympy.Rational(str(r.get(j, 0))) for j in range(n)] for r in rows]).rank()


@pytest.mark.parametrize("k", BACKENDS, ids=lambda k: k.__name__)
@settings(max_examples=60, deadline=None)
@given(matrices)
def test_echelon_rank_matches_sympy(k, rows):
    out, piv = k.echelonize(rows)
    assert len(out) == sympy_rank(rows)
    for r, p in zip(out, piv):
        assert r[p] == 1
        assert all(o.get(p, 0) == 0 for o in out if o is not r)


@pytest.mark.parametrize("k", BACKENDS, ids=lambda k: k.__name__)
@settings(max_examples=40, deadline=None)
@given(matrices, st.dictionaries(st.integers(0, 5), entry, max_size=6))
def test_reduce_is_idempotent(k, rows, v):
    ech = k.Echelon()
    for r in rows:
        ech.add(r)
    once = ech.reduce(v)
    assert ech.reduce(once) == once
    assert not any(p in once for p in ech.rows)


@pytest.mark.parametrize("k", BACKENDS, ids=lambda k: k.__name__)
def test_custom_column_order(k):
    rank = [2, 1, 0]  # column 2 searched first
    ech = k.Echelon(rank)
    assert ech.add({0: Fraction(1), 2: Fraction(3)}) == 2
    assert ech.pivots() == [2]


@pytest.mark.parametrize("k", BACKENDS, ids=lambda k: k.__name__)
def test_greedy_basis_skips_dependent_candidates(k):
    # quotient of Q^3 by span(e0 - e1): e0 and e1 coincide
    kept = k.greedy_basis([{0: Fraction(1), 1: Fraction(-1)}], [0, 1, 2], 2)
    assert kept == [0, 2]


def test_backends_agree_on_random_input():
    if len(BACKENDS) < 2:
        pytest.skip("compiled kernels not built")
    rng = random.Random(7)
    rows = [{c: Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for c in range(10) if rng.random() < 0.5}
            for _ in range(12)]
    assert BACKENDS[0].echelonize(rows) == BACKENDS[1].echelonize(rows)
    assert BACKENDS[0].greedy_basis(rows[:4], range(10), 6) == BACKENDS[1].greedy_basis(rows[:4], range(10), 6)


def test_backend_is_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_pure_python_fallback_is_selectable():
    import os
    import subprocess
    import sys

    code = ("from chowbeta.kernels import BACKEND; from chowbeta.chow import chow_weights, WeightVector;"
            "from chowbeta.exact_algebra import HomogeneousIdeal;"
            "print(BACKEND, chow_weights(HomogeneousIdeal.zero(3), WeightVector((0, 1, 1)), (1, 6)).e_c)")
    env = dict(os.environ, CHOWBETA_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "2"]
