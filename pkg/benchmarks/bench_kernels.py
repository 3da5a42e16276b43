"""Compare the compiled and pure-Python elimination kernels.

    python benchmarks/bench_kernels.py [--repeat 3]

Workloads: the degree-m graded piece of a twisted-cubic ideal and the
greedy maximum-weight basis of the same quotient.
"""

import argparse
import importlib
import time
from fractions import Fraction

from chowbeta import _kernels_py
from chowbeta.exact_algebra import HomogeneousIdeal, Polynomial, monomials_of_degree, multiples_in_degree


def twisted_cubic():
    x = [Polynomial.variable(4, i) for i in range(4)]
    gens = (x[0] * x[2] - x[1] ** 2, x[1] * x[3] - x[2] ** 2, x[0] * x[3] - x[1] * x[2])
    return HomogeneousIdeal(4, gens)


def random_dense(n_rows, n_cols, seed=0):
    import random

    rng = random.Random(seed)
    return [{c: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for c in range(n_cols) if rng.random() < 0.6}
            for _ in range(n_rows)]


def workloads(ideal, m):
    rows = multiples_in_degree(ideal.generators, ideal.n_vars, m)
    n_mon = len(monomials_of_degree(ideal.n_vars, m))
    dense = random_dense(24, 30)
    return {
        f"echelonize ideal piece m={m}": lambda k: k.echelonize(rows),
        f"greedy basis m={m}": lambda k: k.greedy_basis(rows, range(n_mon), n_mon),
        "echelonize dense 24x30": lambda k: k.echelonize(dense),
    }


def best_of(fn, kernel, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn(kernel)
        times.append(time.perf_counter() - t)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--degree", type=int, default=6)
    args = ap.parse_args(argv)
    try:
        compiled = importlib.import_module("chowbeta._kernels")
    except ImportError:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation`")
        return 1
    print(f"{'workload':34s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name, fn in workloads(twisted_cubic(), args.degree).items():
        a = fn(_kernels_py)
        b = fn(compiled)
        assert a == b, f"backends disagree on {name}"
        tp = best_of(fn, _kernels_py, args.repeat)
        tc = best_of(fn, compiled, args.repeat)
        print(f"{name:34s} {tp:10.4f} {tc:10.4f} {tp / tc:8.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
