"""Nilpotent associative algebras given by structure constants.

A vector of the algebra is a length-``dim`` sequence of field encodings;
batched operations take (N, dim) int64 arrays.  Subspaces are kept in
reduced row echelon form so that equality of subspaces is equality of
their bases.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import BadParameter, NotAssociative, NotDefinedOverSubfield, NotNilpotent
from .gf import (
    FieldDescriptor,
    embedding_table,
    extension_field,
    frobenius_table,
    subfield_elements,
    tables,
)
from .linalg import all_vectors, combine, nullspace, rref


class NilpotentAlgebra:
    """Structure constants ``sc[i, j, l]``: b_i * b_j = sum_l sc[i, j, l] b_l."""

    def __init__(self, field: FieldDescriptor, dim: int, sc, nclass: int,
                 defined_over: int | None = None, name: str | None = None):
        self.field = field
        self.dim = dim
        sc = np.array(sc, dtype=np.int64).reshape(dim, dim, dim)
        sc.setflags(write=False)
        self.sc = sc
        self.nclass = nclass
        self.defined_over = defined_over
        self.name = name
        nz = np.argwhere(sc != 0)
        self.terms = np.array([(i, j, l, sc[i, j, l]) for i, j, l in nz], dtype=np.int64).reshape(-1, 4)

    @cached_property
    def _key(self):
        return (self.field, self.dim, self.sc.tobytes(), self.defined_over)

    def __eq__(self, other):
        return isinstance(other, NilpotentAlgebra) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        label = self.name or "A"
        return f"NilpotentAlgebra({label}, {self.field}, dim={self.dim}, nclass={self.nclass})"

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def tables(self):
        return tables(self.field)

    def mul(self, x, y) -> np.ndarray:
        """Algebra product, single vectors or (N, dim) batches."""
        T = self.tables
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        single = x.ndim == 1 and y.ndim == 1
        x2 = np.atleast_2d(x)
        y2 = np.atleast_2d(y)
        if x2.shape[0] != y2.shape[0]:
            x2, y2 = np.broadcast_arrays(x2, y2)
            x2, y2 = np.ascontiguousarray(x2), np.ascontiguousarray(y2)
        out = kernels.alg_mul(x2, y2, self.terms, T.add, T.mul)
        return out[0] if single else out

    def add(self, x, y) -> np.ndarray:
        return self.tables.add[np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)]

    def scale(self, lam: int, x) -> np.ndarray:
        return self.tables.mul[lam, np.asarray(x, dtype=np.int64)]

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def to_json(self) -> dict:
        coeff = lambda x: [(int(x) // self.field.p ** i) % self.field.p for i in range(self.field.m)]
        out = {
            "field": self.field.to_json(),
            "dim": self.dim,
            "sc": [[[coeff(self.sc[i, j, l]) for l in range(self.dim)]
                    for j in range(self.dim)] for i in range(self.dim)],
        }
        if self.defined_over is not None:
            out["defined_over"] = self.defined_over
        return out


@dataclass(frozen=True)
class Subspace:
    """A subspace of k^d, stored by its RREF basis."""
    field: FieldDescriptor
    ambient_dim: int
    basis: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...] = dc_field(compare=False, hash=False, default=())

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.basis, dtype=np.int64).reshape(self.rank, self.ambient_dim)

    def size(self) -> int:
        return self.field.q ** self.rank

    def coords(self, x) -> np.ndarray:
        """Coordinates in the RREF basis (x assumed to lie in the subspace)."""
        x = np.asarray(x, dtype=np.int64)
        return x[..., list(self.pivots)]

    def from_coords(self, c) -> np.ndarray:
        return combine(self.field, c, self.matrix) if self.rank else np.zeros(
            (np.asarray(c).shape[0], self.ambient_dim) if np.asarray(c).ndim == 2 else self.ambient_dim,
            dtype=np.int64)

    def contains(self, x) -> bool | np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if self.rank == 0:
            return ~np.any(x, axis=-1) if x.ndim == 2 else not np.any(x)
        back = self.from_coords(self.coords(x))
        eq = np.all(back == x, axis=-1)
        return eq if x.ndim == 2 else bool(eq)

    def __le__(self, other: "Subspace") -> bool:
        return bool(np.all(other.contains(self.matrix))) if self.rank else True

    def elements(self) -> np.ndarray:
        """All vectors of the subspace, sorted by group code (lex order)."""
        coeffs = all_vectors(self.field.q, self.rank)
        vecs = self.from_coords(coeffs) if self.rank else np.zeros((1, self.ambient_dim), dtype=np.int64)
        codes = vector_codes(vecs, self.field.q)
        return vecs[np.argsort(codes, kind="stable")]

    def to_json(self) -> list:
        return [list(r) for r in self.basis]


def vector_codes(vecs, q: int) -> np.ndarray:
    """Integer code of each vector; lexicographic order equals numeric order."""
    vecs = np.atleast_2d(np.asarray(vecs, dtype=np.int64))
    d = vecs.shape[1]
    w = q ** np.arange(d - 1, -1, -1, dtype=np.int64)
    return vecs @ w


def span(F: FieldDescriptor, d: int, vectors) -> Subspace:
    vectors = np.asarray(vectors, dtype=np.int64).reshape(-1, d)
    R, piv = rref(F, vectors)
    return Subspace(F, d, tuple(tuple(int(v) for v in row) for row in R), tuple(piv))


def zero_space(F: FieldDescriptor, d: int) -> Subspace:
    return Subspace(F, d, (), ())


def full_space(F: FieldDescriptor, d: int) -> Subspace:
    return span(F, d, np.eye(d, dtype=np.int64))


def space_sum(U: Subspace, V: Subspace) -> Subspace:
    return span(U.field, U.ambient_dim, np.vstack([U.matrix, V.matrix]))


def intersection(U: Subspace, V: Subspace) -> Subspace:
    F = U.field
    if U.rank == 0 or V.rank == 0:
        return zero_space(F, U.ambient_dim)
    # x = sum a_i u_i = sum b_j v_j  <=>  [U^T | -V^T] (a, b) = 0
    T = tables(F)
    M = np.hstack([U.matrix.T, T.neg[V.matrix.T]])
    ns = nullspace(F, M)
    if ns.shape[0] == 0:
        return zero_space(F, U.ambient_dim)
    return span(F, U.ambient_dim, combine(F, ns[:, :U.rank], U.matrix))


def complement_basis(U: Subspace, W: Subspace) -> np.ndarray:
    """Vectors of U whose images form a basis of U/W (W <= U), chosen greedily
    from U's RREF basis."""
    F = U.field
    chosen = []
    cur = W
    for row in U.matrix:
        if not cur.contains(row):
            chosen.append(row)
            cur = space_sum(cur, span(F, U.ambient_dim, [row]))
    return np.array(chosen, dtype=np.int64).reshape(-1, U.ambient_dim)


# ---------------------------------------------------------------------------
# construction

def _compute_nclass(field, dim, sc) -> int:
    A = NilpotentAlgebra(field, dim, sc, nclass=dim + 1)
    P = full_space(field, dim)
    n = 1
    while P.rank:
        if n == dim + 1:
            raise NotNilpotent("algebra is not nilpotent", witness=P.matrix[0].tolist())
        P = product_space(A, P, full_space(field, dim))
        n += 1
    return n


def algebra_from_constants(field: FieldDescriptor, dim: int, sc, defined_over: int | None = None,
                           name: str | None = None) -> NilpotentAlgebra:
    """Validate associativity and nilpotency and build the algebra."""
    sc = np.array(sc, dtype=np.int64)
    if sc.shape != (dim, dim, dim):
        raise BadParameter(f"structure constants must have shape {(dim, dim, dim)}, got {sc.shape}")
    if np.any((sc < 0) | (sc >= field.q)):
        raise BadParameter("structure constant outside the field")
    A0 = NilpotentAlgebra(field, dim, sc, nclass=dim + 1)
    eye = np.eye(dim, dtype=np.int64)
    # (b_i b_j) b_l vs b_i (b_j b_l) for all triples, batched
    I, J, L = np.meshgrid(np.arange(dim), np.arange(dim), np.arange(dim), indexing="ij")
    I, J, L = I.ravel(), J.ravel(), L.ravel()
    left = A0.mul(A0.mul(eye[I], eye[J]), eye[L])
    right = A0.mul(eye[I], A0.mul(eye[J], eye[L]))
    bad = np.flatnonzero(np.any(left != right, axis=1))
    if bad.size:
        k = bad[0]
        raise NotAssociative("structure constants are not associative",
                             witness=[int(I[k]), int(J[k]), int(L[k])])
    nclass = _compute_nclass(field, dim, sc)
    if defined_over is not None:
        allowed = set(subfield_elements(field, defined_over).tolist())
        if not set(np.unique(sc).tolist()) <= allowed:
            raise NotDefinedOverSubfield(f"structure constants not in F_{defined_over}")
    return NilpotentAlgebra(field, dim, sc, nclass, defined_over, name)


def builtin_algebra(kind: str, field: FieldDescriptor, *args, defined_over: int | None = None):
    """``upper_triangular(n)``, ``truncated_poly(n)`` or ``direct_sum(a, b)``.

    The upper triangular basis is e_ij ordered by (j - i, i), so for n = 3
    it is e12, e23, e13 and b1 b2 = b3.
    """
    if kind == "upper_triangular":
        (n,) = args
        if n < 2:
            raise BadParameter("upper_triangular needs n >= 2")
        # graded order: e_{i,i+1} first, then e_{i,i+2}, ...; A^k is then a tail
        pairs = [(i, i + s) for s in range(1, n) for i in range(n - s)]
        idx = {pr: k for k, pr in enumerate(pairs)}
        d = len(pairs)
        sc = np.zeros((d, d, d), dtype=np.int64)
        for (i, j), a in idx.items():
            for (j2, l), b in idx.items():
                if j == j2:
                    sc[a, b, idx[(i, l)]] = 1
        return algebra_from_constants(field, d, sc, defined_over, name=f"u{n}")
    if kind == "truncated_poly":
        (n,) = args
        if n < 2:
            raise BadParameter("truncated_poly needs n >= 2")
        d = n - 1
        sc = np.zeros((d, d, d), dtype=np.int64)
        for a in range(d):
            for b in range(d):
                e = (a + 1) + (b + 1)
                if e < n:
                    sc[a, b, e - 1] = 1
        return algebra_from_constants(field, d, sc, defined_over,
                                      name="x2" if n == 2 else f"t{n}")
    if kind == "direct_sum":
        a, b = args
        if a.field != b.field:
            raise BadParameter("direct summands must share the field")
        d = a.dim + b.dim
        sc = np.zeros((d, d, d), dtype=np.int64)
        sc[:a.dim, :a.dim, :a.dim] = a.sc
        sc[a.dim:, a.dim:, a.dim:] = b.sc
        return algebra_from_constants(a.field, d, sc, defined_over,
                                      name=f"{a.name}+{b.name}" if a.name and b.name else None)
    raise BadParameter(f"unknown builtin algebra {kind!r}")


# ---------------------------------------------------------------------------
# subspaces of an algebra

def product_space(A: NilpotentAlgebra, U: Subspace, V: Subspace) -> Subspace:
    """span{u v : u in U, v in V}."""
    if U.rank == 0 or V.rank == 0:
        return zero_space(A.field, A.dim)
    Um, Vm = U.matrix, V.matrix
    I, J = np.meshgrid(np.arange(U.rank), np.arange(V.rank), indexing="ij")
    prods = A.mul(Um[I.ravel()], Vm[J.ravel()])
    return span(A.field, A.dim, prods)


def power_ideal(A: NilpotentAlgebra, k: int, U: Subspace | None = None) -> Subspace:
    """A^k (or U^k for a subalgebra U): the span of all k-fold products."""
    if k < 1:
        raise BadParameter("exponent must be >= 1")
    base = full_space(A.field, A.dim) if U is None else U
    P = base
    for _ in range(k - 1):
        P = product_space(A, P, base)
    return P


def square(A: NilpotentAlgebra, U: Subspace | None = None) -> Subspace:
    return power_ideal(A, 2, U)


def is_subalgebra(A: NilpotentAlgebra, S: Subspace) -> bool:
    return product_space(A, S, S) <= S


def subalgebra_closure(A: NilpotentAlgebra, vectors) -> Subspace:
    S = span(A.field, A.dim, vectors)
    while True:
        nxt = space_sum(S, product_space(A, S, S))
        if nxt == S:
            return S
        S = nxt


def annihilator_ideal(A: NilpotentAlgebra) -> Subspace:
    d = A.dim
    rows = []
    for j in range(d):
        for l in range(d):
            rows.append(A.sc[:, j, l])   # coefficient of a_i in (a b_j)_l
            rows.append(A.sc[j, :, l])   # coefficient of a_i in (b_j a)_l
    ns = nullspace(A.field, np.array(rows, dtype=np.int64))
    return span(A.field, d, ns) if ns.shape[0] else zero_space(A.field, d)


def subalgebra_algebra(A: NilpotentAlgebra, S: Subspace) -> NilpotentAlgebra:
    """The subalgebra S as an algebra in its own right, in S's RREF basis."""
    if not is_subalgebra(A, S):
        raise BadParameter("subspace is not closed under multiplication")
    r = S.rank
    B = S.matrix
    sc = np.zeros((r, r, r), dtype=np.int64)
    for i in range(r):
        prods = A.mul(np.repeat(B[i:i + 1], r, axis=0), B) if r else B
        sc[i] = S.coords(prods)
    nclass = _compute_nclass(A.field, r, sc) if r else 1
    return NilpotentAlgebra(A.field, r, sc, nclass, A.defined_over)


# ---------------------------------------------------------------------------
# scalar extension and Frobenius

def extend_scalars(A: NilpotentAlgebra, n: int) -> NilpotentAlgebra:
    """k' (x)_k A for [k':k] = n, same basis labels."""
    if n < 1:
        raise BadParameter("extension degree must be >= 1")
    K = extension_field(A.field, n)
    emb = embedding_table(A.field, K)
    sc = emb[A.sc]
    d_over = A.defined_over if A.defined_over is not None else A.field.q
    nclass = A.nclass
    name = A.name
    return NilpotentAlgebra(K, A.dim, sc, nclass, d_over, name)


def extend_subspace(S: Subspace, A_ext: NilpotentAlgebra) -> Subspace:
    """k' (x) S inside the extended algebra."""
    emb = embedding_table(S.field, A_ext.field)
    return span(A_ext.field, S.ambient_dim, emb[S.matrix]) if S.rank else zero_space(A_ext.field, S.ambient_dim)


def _check_frobenius(A: NilpotentAlgebra, q: int) -> np.ndarray:
    fr = frobenius_table(A.field, q)
    if A.defined_over is not None:
        s_def = round(np.log(A.defined_over) / np.log(A.field.p))
        s_q = round(np.log(q) / np.log(A.field.p))
        if s_q % s_def == 0:
            return fr
    if np.array_equal(fr[A.sc], A.sc):
        return fr
    raise NotDefinedOverSubfield(f"{A!r} is not defined over F_{q}")


def frobenius_on_algebra(A: NilpotentAlgebra, q: int, v) -> np.ndarray:
    """Apply x -> x^q coordinatewise (an algebra automorphism when the
    structure constants are fixed by it)."""
    fr = _check_frobenius(A, q)
    return fr[np.asarray(v, dtype=np.int64)]


def frobenius_subspace(A: NilpotentAlgebra, q: int, S: Subspace) -> Subspace:
    fr = _check_frobenius(A, q)
    return span(A.field, A.dim, fr[S.matrix]) if S.rank else S


def subspaces_between(W: Subspace, U: Subspace) -> list[Subspace]:
    """All subspaces V with W <= V <= U, in a deterministic order."""
    F = U.field
    comp = complement_basis(U, W)
    r = comp.shape[0]
    q = F.q
    seen = {}
    # each V corresponds to a subspace of k^r; enumerate via RREF matrices
    for k in range(r + 1):
        for rows in _rref_matrices(F, k, r):
            vecs = combine(F, rows, comp) if k else np.zeros((0, U.ambient_dim), dtype=np.int64)
            V = span(F, U.ambient_dim, np.vstack([W.matrix, vecs])) if (W.rank or k) else zero_space(F, U.ambient_dim)
            seen.setdefault(V, None)
    del q
    return list(seen)


def _rref_matrices(F: FieldDescriptor, k: int, r: int) -> Iterable[np.ndarray]:
    """All k x r matrices in reduced row echelon form of rank k."""
    from itertools import combinations
    q = F.q
    if k == 0:
        yield np.zeros((0, r), dtype=np.int64)
        return
    for piv in combinations(range(r), k):
        free_slots = [(i, c) for i in range(k) for c in range(piv[i] + 1, r) if c not in piv]
        for vals in all_vectors(q, len(free_slots)):
            M = np.zeros((k, r), dtype=np.int64)
            for i, c in enumerate(piv):
                M[i, c] = 1
            for (i, c), v in zip(free_slots, vals):
                M[i, c] = v
            yield M
