"""Small dense linear algebra over F_q on int-encoded matrices."""
from __future__ import annotations

import numpy as np

from .gf import FieldDescriptor, tables


def rref(F: FieldDescriptor, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form (zero rows dropped) and pivot columns."""
    T = tables(F)
    A = np.array(M, dtype=np.int64, copy=True)
    if A.ndim != 2 or A.shape[0] == 0:
        return np.zeros((0, A.shape[-1] if A.ndim == 2 else 0), dtype=np.int64), []
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = T.mul[T.inv[A[r, c]], A[r]]
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = T.sub[A[i], T.mul[A[i, c], A[r]]]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(F: FieldDescriptor, M) -> int:
    return len(rref(F, M)[1])


def nullspace(F: FieldDescriptor, M) -> np.ndarray:
    """Basis (rows) of {x : M x = 0}."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[1]
    R, piv = rref(F, M)
    T = tables(F)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for i, pc in enumerate(piv):
            v[pc] = T.neg[R[i, f]]
        basis.append(v)
    if not basis:
        return np.zeros((0, n), dtype=np.int64)
    return np.array(basis, dtype=np.int64)


def mat_vec(F: FieldDescriptor, M, v) -> np.ndarray:
    """M @ v over F."""
    T = tables(F)
    M = np.asarray(M, dtype=np.int64)
    out = np.zeros(M.shape[0], dtype=np.int64)
    for j in range(M.shape[1]):
        out = T.add[out, T.mul[M[:, j], v[j]]]
    return out


def combine(F: FieldDescriptor, coeffs, rows) -> np.ndarray:
    """sum_i coeffs[i] * rows[i]; works batched if coeffs is (N, r)."""
    T = tables(F)
    rows = np.asarray(rows, dtype=np.int64)
    coeffs = np.asarray(coeffs, dtype=np.int64)
    if coeffs.ndim == 1:
        out = np.zeros(rows.shape[1], dtype=np.int64)
        for c, r in zip(coeffs, rows):
            out = T.add[out, T.mul[c, r]]
        return out
    out = np.zeros((coeffs.shape[0], rows.shape[1]), dtype=np.int64)
    for i in range(rows.shape[0]):
        out = T.add[out, T.mul[coeffs[:, i][:, None], rows[i][None, :]]]
    return out


def all_vectors(q: int, r: int) -> np.ndarray:
    """All q^r coefficient tuples, lexicographic with the first entry most significant."""
    if r == 0:
        return np.zeros((1, 0), dtype=np.int64)
    idx = np.arange(q ** r, dtype=np.int64)
    return np.stack([(idx // q ** (r - 1 - i)) % q for i in range(r)], axis=1)


# ---- mod-p helpers (pairing matrices live over Z/p) ------------------------

def rref_mod(M, p: int) -> tuple[np.ndarray, list[int]]:
    A = np.array(M, dtype=np.int64, copy=True) % p
    if A.ndim != 2 or A.shape[0] == 0:
        return np.zeros((0, A.shape[-1] if A.ndim == 2 else 0), dtype=np.int64), []
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = (A[r] * pow(int(A[r, c]), p - 2, p)) % p
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def nullspace_mod(M, p: int) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[1]
    R, piv = rref_mod(M, p)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for i, pc in enumerate(piv):
            v[pc] = (-R[i, f]) % p
        basis.append(v)
    if not basis:
        return np.zeros((0, n), dtype=np.int64)
    return np.array(basis, dtype=np.int64)


def coordinates(F: FieldDescriptor, B, X) -> np.ndarray:
    """Coefficients c with X = c B, for independent rows B and rows X in their span."""
    B = np.asarray(B, dtype=np.int64)
    X = np.atleast_2d(np.asarray(X, dtype=np.int64))
    r, d = B.shape
    R, piv = rref(F, np.hstack([B, np.eye(r, dtype=np.int64)]))
    if len(piv) != r or any(p >= d for p in piv):
        raise ValueError("rows are not independent")
    Tm = R[:, d:]
    c = combine(F, X[:, piv], Tm)
    if not np.array_equal(combine(F, c, B), X):
        raise ValueError("vector outside the span")
    return c
