"""Independent oracles: explicit matrices, brute-force closures, complex numbers.

Apart from the hull-matrix helpers at the end (input generators for the
determinant tests), nothing here uses the structure-constant machinery.
"""
from __future__ import annotations

import cmath
from itertools import product

import numpy as np

from algroups.gf import tables
from algroups.k1norm import HullElement, hull_add, hull_mul
from algroups.linalg import rank


def ut_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, i + s) for s in range(1, n) for i in range(n - s)]


def ut_matrix(F, n: int, vec) -> tuple[tuple[int, ...], ...]:
    """1 + sum a_ij e_ij as a tuple-of-tuples matrix over F."""
    M = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for (i, j), a in zip(ut_pairs(n), vec):
        M[i][j] = int(a)
    return tuple(tuple(r) for r in M)


def mat_mul(F, X, Y):
    T = tables(F)
    n = len(X)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = int(T.add[acc, T.mul[X[i][k], Y[k][j]]])
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_inv_unipotent(F, X):
    """Inverse of a unipotent upper triangular matrix by back substitution."""
    T = tables(F)
    n = len(X)
    Y = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for j in range(n):
        for i in range(j - 1, -1, -1):
            acc = 0
            for k in range(i + 1, j + 1):
                acc = int(T.add[acc, T.mul[X[i][k], Y[k][j]]])
            Y[i][j] = int(T.neg[acc])
    return tuple(tuple(r) for r in Y)


def all_ut(F, n: int):
    d = n * (n - 1) // 2
    return [ut_matrix(F, n, v) for v in product(range(F.q), repeat=d)]


def closure(F, gens, identity):
    seen = {identity}
    frontier = [identity]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = mat_mul(F, x, g)
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        frontier = new
    return seen


def brute_derived(F, elements):
    n = len(elements[0])
    ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    comms = set()
    for x in elements:
        xi = mat_inv_unipotent(F, x)
        for y in elements:
            yi = mat_inv_unipotent(F, y)
            comms.add(mat_mul(F, mat_mul(F, x, y), mat_mul(F, xi, yi)))
    return closure(F, list(comms), ident)


def brute_class_sizes(F, elements):
    remaining = set(elements)
    sizes = []
    while remaining:
        x = min(remaining)
        cls = {mat_mul(F, mat_mul(F, g, x), mat_inv_unipotent(F, g)) for g in elements}
        sizes.append(len(cls))
        remaining -= cls
    return sorted(sizes)


def trace_oracle(F, x: int, q: int) -> int:
    """x + x^q + x^(q^2) + ... computed with plain powering."""
    T = tables(F)
    n, s = 0, 1
    while s < F.q:
        s *= q
        n += 1
    acc, y = 0, int(x)
    for _ in range(n):
        acc = int(T.add[acc, y])
        y = T.pow(y, q)
    return acc


def complex_values(f) -> np.ndarray:
    """Class function values as complex numbers."""
    E = f.level
    z = np.exp(2j * np.pi * np.arange(f.values.shape[1]) / E)
    return f.values @ z


def complex_inner(f1, f2) -> complex:
    a, b = complex_values(f1), complex_values(f2)
    return complex(np.sum(a * np.conj(b)) / a.size)


# --- matrices over the unital hull k + A

def random_hull_matrix(A, n, rng, invertible=True):
    q = A.q
    while True:
        S = rng.integers(0, q, (n, n))
        N = rng.integers(0, q, (n, n, A.dim))
        M = [[HullElement(int(S[i, j]), tuple(int(v) for v in N[i, j])) for j in range(n)] for i in range(n)]
        if not invertible:
            return M
        if rank(A.field, S) == n:
            return M


def hull_matmul(A, X, Y):
    n = len(X)
    zero = HullElement(0, (0,) * A.dim)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = zero
            for k in range(n):
                acc = hull_add(A, acc, hull_mul(A, X[i][k], Y[k][j]))
            row.append(acc)
        out.append(row)
    return out
