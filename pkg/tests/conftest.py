import os
from itertools import combinations

import pytest
import sympy

from chowbeta.cli import load_spec_text
from chowbeta.exact_algebra import Polynomial, hilbert_function, ideal_graded_piece, monomials_of_degree
from chowbeta.parsing import parse_spec

FIXTURES = ("conic", "p2_point", "p2_general_point", "p1_linear", "twisted_cubic")


def load(name):
    text, stem = load_spec_text(f"fixture:{name}")
    return parse_spec(text, stem)


@pytest.fixture(scope="session")
def specs():
    return {name: load(name) for name in FIXTURES}


def brute_force_s(ideal, m, c):
    """Maximum c-weight over every monomial basis of (S/I)_m, with sympy ranks.

    Independent of the elimination kernel: enumerates all subsets of the
    right size and tests each with a sympy matrix rank."""
    mons = monomials_of_degree(ideal.n_vars, m)
    piece = ideal_graded_piece(ideal, m)
    base = [[row.get(j, 0) for j in range(len(mons))] for row in piece.basis_matrix]
    h = hilbert_function(ideal, m)
    full = len(base) + h
    best = None
    for subset in combinations(range(len(mons)), h):
        rows = base + [[1 if j == i else 0 for j in range(len(mons))] for i in subset]
        if sympy.Matrix(rows).rank() == full:
            w = sum(sum(e * ci for e, ci in zip(mons[i], c)) for i in subset)
            best = w if best is None else max(best, w)
    return best


def poly(n, terms):
    return Polynomial(n, terms)


def pure_python():
    return bool(os.environ.get("CHOWBETA_PURE_PYTHON"))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
