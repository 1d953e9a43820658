"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--size N] [--repeat R]

Prints one line per (kernel, algebra) with the best-of-R wall time of each
backend and the speedup.  An end-to-end row times irreducible enumeration.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from algroups import kernels
from algroups.gf import make_field
from algroups.irred import clear_cache, enumerate_irreps
from algroups.k1norm import norm_elements
from algroups.nilalg import builtin_algebra, extend_scalars

CASES = [
    ("u4_f3", "upper_triangular", 3, 1, 4),
    ("u5_f2", "upper_triangular", 2, 1, 5),
    ("u4_f4", "upper_triangular", 2, 2, 4),
    ("t6_f3", "truncated_poly", 3, 1, 6),
]


def best(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_calls(A, x, y):
    T = A.tables
    return {
        "alg_mul": lambda: kernels.alg_mul(x, y, A.terms, T.add, T.mul),
        "grp_mul": lambda: kernels.grp_mul(x, y, A.terms, T.add, T.mul),
        "grp_inv": lambda: kernels.grp_inv(x, A.terms, T.add, T.mul, T.neg, A.nclass),
        "grp_comm": lambda: kernels.grp_comm(x, y, A.terms, T.add, T.mul, T.neg, A.nclass),
    }


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=200_000, help="batch size for the element kernels")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; only the numpy backend is timed")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<14}{'algebra':<10}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    rows = []
    for label, kind, p, m, n in CASES:
        A = builtin_algebra(kind, make_field(p, m), n)
        x = rng.integers(0, A.q, (args.size, A.dim), dtype=np.int64)
        y = rng.integers(0, A.q, (args.size, A.dim), dtype=np.int64)
        for name in kernel_calls(A, x, y):
            t = {}
            for b in backends:
                kernels.use_backend(b)
                t[b] = best(kernel_calls(A, x, y)[name], args.repeat)
            rows.append((name, label, t))
    # batched unipotent determinants from the norm map
    A = builtin_algebra("upper_triangular", make_field(2), 4)
    Ae = extend_scalars(A, 3)
    v = rng.integers(0, Ae.q, (args.size // 10, Ae.dim), dtype=np.int64)
    t = {}
    for b in backends:
        kernels.use_backend(b)
        t[b] = best(lambda: norm_elements(A, 3, v), args.repeat)
    rows.append(("norm_det", "u4_f2^3", t))
    # end to end
    A = builtin_algebra("upper_triangular", make_field(3), 4)
    t = {}
    for b in backends:
        kernels.use_backend(b)

        def run():
            clear_cache()
            enumerate_irreps(A)
        t[b] = best(run, 1)
    rows.append(("irreps", "u4_f3", t))
    for name, label, t in rows:
        line = f"{name:<14}{label:<10}" + "".join(f"{t[b] * 1e3:>10.1f}ms" for b in backends)
        if len(backends) > 1:
            line += f"{t['python'] / t['cython']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
