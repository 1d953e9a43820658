"""Units of the hull R = k + A, Dieudonne determinants, and norm maps.

R is local with maximal ideal A, so R^x = k^x x G with k^x central and
(R^x)^ab = k^x x G^ab.  The norm N: (1+A')^ab -> (1+A)^ab for A' = k' (x) A
is the determinant of left multiplication by g on R' = k' (x) R, viewed as a
free R-module with basis 1, t, ..., t^(n-1) for t the root of the modulus of
k'.  For g in G' that matrix is congruent to the identity modulo A, which
lets the elimination run without pivoting and batched over all of G'.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import kernels
from .algrp import AbelianQuotient, AlgebraGroup, abelianize
from .errors import BadParameter, NotAHomomorphism, NotConstantOnCosets, NotInvertible, TooLarge
from .gf import FieldDescriptor, embedding_table, extension_field, frobenius_table, tables
from .linalg import all_vectors, rank
from .nilalg import (
    NilpotentAlgebra,
    Subspace,
    extend_scalars,
    extend_subspace,
    power_ideal,
    subspaces_between,
)


@dataclass(frozen=True)
class HullElement:
    scalar: int
    nil: tuple[int, ...]

    def is_unit(self) -> bool:
        return self.scalar != 0


def hull_mul(A: NilpotentAlgebra, x: HullElement, y: HullElement) -> HullElement:
    T = A.tables
    a1, a2 = np.array(x.nil, dtype=np.int64), np.array(y.nil, dtype=np.int64)
    nil = T.add[T.add[T.mul[x.scalar, a2], T.mul[y.scalar, a1]], A.mul(a1, a2)]
    return HullElement(int(T.mul[x.scalar, y.scalar]), tuple(int(v) for v in nil))


def hull_add(A: NilpotentAlgebra, x: HullElement, y: HullElement) -> HullElement:
    T = A.tables
    return HullElement(int(T.add[x.scalar, y.scalar]),
                       tuple(int(v) for v in T.add[np.array(x.nil), np.array(y.nil)]))


def hull_neg(A: NilpotentAlgebra, x: HullElement) -> HullElement:
    T = A.tables
    return HullElement(int(T.neg[x.scalar]), tuple(int(v) for v in T.neg[np.array(x.nil, dtype=np.int64)]))


def hull_inv(A: NilpotentAlgebra, x: HullElement) -> HullElement:
    """(s + a)^-1 = s^-1 (1 + s^-1 a)^-1."""
    if x.scalar == 0:
        raise NotInvertible("element of the radical is not a unit")
    T = A.tables
    si = int(T.inv[x.scalar])
    u = T.mul[si, np.array(x.nil, dtype=np.int64)][None]
    v = kernels.grp_inv(u, A.terms, T.add, T.mul, T.neg, A.nclass)[0]
    return HullElement(si, tuple(int(c) for c in T.mul[si, v]))


def unit_split(A: NilpotentAlgebra, x: HullElement) -> tuple[int, np.ndarray]:
    """u = lambda (1 + lambda^-1 a): return (lambda, lambda^-1 a)."""
    T = A.tables
    return x.scalar, T.mul[int(T.inv[x.scalar]), np.array(x.nil, dtype=np.int64)]


@dataclass(frozen=True)
class UnitClass:
    scalar_part: int
    unipotent_class: tuple[int, ...]

    def mul(self, other: "UnitClass", F: FieldDescriptor, orders: Sequence[int]) -> "UnitClass":
        T = tables(F)
        return UnitClass(int(T.mul[self.scalar_part, other.scalar_part]),
                         tuple((a + b) % o for a, b, o in zip(self.unipotent_class, other.unipotent_class, orders)))


def _as_arrays(A: NilpotentAlgebra, M) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(M, tuple) and len(M) == 2 and isinstance(M[0], np.ndarray):
        return np.array(M[0], dtype=np.int64), np.array(M[1], dtype=np.int64)
    n = len(M)
    S = np.zeros((n, n), dtype=np.int64)
    N = np.zeros((n, n, A.dim), dtype=np.int64)
    for i, row in enumerate(M):
        if len(row) != n:
            raise BadParameter("matrix must be square")
        for j, e in enumerate(row):
            S[i, j] = e.scalar
            N[i, j] = e.nil
    return S, N


def dieudonne_det(A: NilpotentAlgebra, M, Q: AbelianQuotient | None = None,
                  rng: np.random.Generator | None = None) -> UnitClass:
    """Class of an invertible matrix over R in k^x x G^ab.

    ``M`` is a list of rows of HullElements or a pair (scalars (n,n), nil
    parts (n,n,d)).  With ``rng`` the pivot row is drawn at random among the
    eligible ones (the result must not depend on it).
    """
    Q = Q if Q is not None else abelianize(A)
    T = A.tables
    S, N = _as_arrays(A, M)
    n = S.shape[0]
    if rank(A.field, S) < n:
        raise NotInvertible("matrix is singular modulo the radical")
    rows = [[HullElement(int(S[i, j]), tuple(int(v) for v in N[i, j])) for j in range(n)] for i in range(n)]
    swaps = 0
    for c in range(n):
        elig = [r for r in range(c, n) if rows[r][c].scalar != 0]
        r = elig[0] if rng is None else elig[int(rng.integers(len(elig)))]
        if r != c:
            rows[r], rows[c] = rows[c], rows[r]
            swaps += 1
        pinv = hull_inv(A, rows[c][c])
        for i in range(c + 1, n):
            if rows[i][c].scalar == 0 and not any(rows[i][c].nil):
                continue
            f = hull_mul(A, rows[i][c], pinv)
            rows[i] = [hull_add(A, rows[i][j], hull_neg(A, hull_mul(A, f, rows[c][j]))) for j in range(n)]
    scalar = 1
    logs = np.zeros(len(Q.orders), dtype=np.int64)
    for c in range(n):
        lam, v = unit_split(A, rows[c][c])
        scalar = int(T.mul[scalar, lam])
        logs = logs + Q.log_of(v[None])[0]
    if swaps % 2:
        scalar = int(T.neg[scalar])
    orders = np.array(Q.orders, dtype=np.int64)
    return UnitClass(scalar, tuple(int(x) for x in (logs % orders if orders.size else logs)))


def ordinary_det(A: NilpotentAlgebra, M) -> HullElement:
    """Leibniz determinant; meaningful only when R is commutative."""
    from itertools import permutations
    S, N = _as_arrays(A, M)
    n = S.shape[0]
    el = [[HullElement(int(S[i, j]), tuple(int(v) for v in N[i, j])) for j in range(n)] for i in range(n)]
    total = HullElement(0, (0,) * A.dim)
    for perm in permutations(range(n)):
        sgn = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j]) % 2
        term = HullElement(1, (0,) * A.dim)
        for i in range(n):
            term = hull_mul(A, term, el[i][perm[i]])
        total = hull_add(A, total, hull_neg(A, term) if sgn else term)
    return total


def unit_class(A: NilpotentAlgebra, u: HullElement, Q: AbelianQuotient) -> UnitClass:
    lam, v = unit_split(A, u)
    return UnitClass(int(lam), tuple(int(x) for x in Q.log_of(v[None])[0]))


# ---------------------------------------------------------------------------
# norm maps

@lru_cache(maxsize=None)
def _tau_data(k: FieldDescriptor, n: int):
    """For K = extension of degree n: coordinates of every element of K in
    the k-basis 1, t, ..., t^(n-1), and the k-matrices P_i of multiplication
    by t^i (P_i[r, c] = coordinate r of t^(i+c))."""
    K = extension_field(k, n)
    TK = tables(K)
    emb = embedding_table(k, K)
    t = K.p if K.m > 1 else 1
    pw = [1]
    for _ in range(2 * n):
        pw.append(int(TK.mul[pw[-1], t]))
    combos = all_vectors(k.q, n)                      # (q^n, n) over k
    vals = np.zeros(combos.shape[0], dtype=np.int64)
    for i in range(n):
        vals = TK.add[vals, TK.mul[emb[combos[:, i]], pw[i]]]
    if np.unique(vals).size != K.q:
        raise AssertionError("powers of t are not a basis")  # pragma: no cover
    coords = np.zeros((K.q, n), dtype=np.int64)
    coords[vals] = combos
    P = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for c in range(n):
            P[i, :, c] = coords[pw[i + c]]
    coords.setflags(write=False)
    P.setflags(write=False)
    return K, coords, P


@dataclass(eq=False)
class NormTable:
    """N: (1+U')^ab -> (1+U)^ab, tabulated on every element of 1+U'."""
    src: AbelianQuotient
    dst: AbelianQuotient
    images: np.ndarray        # unipotent part of the determinant, per element of 1+U'
    table: np.ndarray         # dst exponent tuple per element of 1+U'
    ext: int

    def label_table(self) -> np.ndarray:
        """dst exponents per src coset label."""
        return self.table[self.src.reps]

    def apply(self, vecs) -> np.ndarray:
        return self.table[self.src.ambient.index(vecs)]

    def image_size(self) -> int:
        t = self.label_table()
        return int(np.unique(t, axis=0).shape[0]) if t.shape[1] else 1

    def to_json(self) -> list:
        lt = self.label_table()
        src_logs = self.src.label_log()
        return [[list(map(int, a)), list(map(int, b))] for a, b in zip(src_logs, lt)]


def norm_elements(A: NilpotentAlgebra, n: int, vecs_ext: np.ndarray) -> np.ndarray:
    """Unipotent parts of N(1+a') for rows a' of A' = extend_scalars(A, n)."""
    k = A.field
    K, coords, P = _tau_data(k, n)
    T = A.tables
    N_ = vecs_ext.shape[0]
    d = A.dim
    comp = coords[vecs_ext]                 # (N, d, n): a' = sum_i t^i a_i
    nil = np.zeros((N_, n, n, d), dtype=np.int64)
    for i in range(n):
        ai = comp[:, :, i]                  # (N, d)
        for r in range(n):
            for c in range(n):
                if P[i, r, c]:
                    nil[:, r, c, :] = T.add[nil[:, r, c, :], T.mul[P[i, r, c], ai]]
    scal = np.broadcast_to(np.eye(n, dtype=np.int64), (N_, n, n)).copy()
    ds, da = kernels.unipotent_det(scal, nil, A.terms, T.add, T.mul, T.neg, T.inv, A.nclass)
    if np.any(ds != 1):
        raise AssertionError("scalar part of a unipotent determinant is not 1")
    return da


def norm_map(A: NilpotentAlgebra, n: int, U: Subspace | None = None,
             bound: int = 2 ** 20, chunk: int = 65536,
             src: AbelianQuotient | None = None, dst: AbelianQuotient | None = None) -> NormTable:
    """Tabulate N_{k'/k} on (1+U')^ab for [k':k] = n (U defaults to A)."""
    if n < 1:
        raise BadParameter("extension degree must be >= 1")
    Ae = extend_scalars(A, n)
    Ue = extend_subspace(U, Ae) if U is not None else None
    if dst is None:
        dst = abelianize(A, U, bound)
    if src is None:
        src = abelianize(Ae, Ue, bound)
    G1 = src.ambient
    el = G1.elements
    if n == 1:
        emb_back = el  # same field and encodings
        images = np.array(emb_back)
    else:
        images = np.concatenate([norm_elements(A, n, el[s:s + chunk]) for s in range(0, G1.order, chunk)])
    table = dst.log_of(images)
    _check_well_defined(src, dst, table)
    return NormTable(src, dst, images, table, n)


def _check_well_defined(src: AbelianQuotient, dst: AbelianQuotient, table: np.ndarray) -> None:
    per_label = table[src.reps]
    bad = np.flatnonzero(np.any(per_label[src.labels] != table, axis=1)) if table.shape[1] else []
    if len(bad):
        i = int(bad[0])
        raise NotConstantOnCosets("norm is not constant on a coset of the derived subgroup",
                                  witness={"element": src.ambient.elements[i].tolist(),
                                           "coset_rep": src.ambient.elements[src.reps[src.labels[i]]].tolist()})
    # homomorphism: N(x g) = N(x) + N(g) for every coset x and generator g
    G1 = src.ambient
    orders = np.array(dst.orders, dtype=np.int64)
    if orders.size == 0:
        return
    R = G1.elements[src.reps]
    for g in src.generators:
        prod_idx = G1.index(G1.mul(R, g))
        lhs = table[prod_idx]
        rhs = (per_label + table[G1.index(g[None])[0]]) % orders
        badr = np.flatnonzero(np.any(lhs != rhs, axis=1))
        if badr.size:
            j = int(badr[0])
            raise NotAHomomorphism("norm table is not multiplicative",
                                   witness={"x": R[j].tolist(), "g": g.tolist()})


# ---------------------------------------------------------------------------
# property verification

@dataclass
class CheckResult:
    check: str
    passed: bool
    witness: object = None
    params: dict = dc_field(default_factory=dict)


def _log_to_label(Q: AbelianQuotient) -> dict:
    return {tuple(int(v) for v in row): i for i, row in enumerate(Q.label_log())}


def compose_tables(outer: NormTable, inner: NormTable) -> np.ndarray:
    """Exponents of outer(inner(g)) for g in inner's source."""
    lut = _log_to_label(outer.src)
    outer_lab = outer.label_table()
    labs = np.array([lut[tuple(int(v) for v in row)] for row in inner.table], dtype=np.int64)
    return outer_lab[labs]


def frobenius_permutation(G: AlgebraGroup, q: int) -> np.ndarray:
    """Index of Fr_q(g) for every element g of G (coordinatewise x -> x^q)."""
    fr = frobenius_table(G.A.field, q)
    return G.index(fr[G.elements])


def verify_norm_properties(A: NilpotentAlgebra, tower: Sequence[int], bound: int = 2 ** 20,
                           functoriality: bool = True) -> list[CheckResult]:
    """Homomorphism/well-definedness, Fr-equivariance, functoriality,
    surjectivity and coinvariant factorization for each cumulative degree in
    ``tower``; transitivity along consecutive members."""
    out: list[CheckResult] = []
    degs = list(tower)
    tables_: dict[int, NormTable] = {}
    QA = abelianize(A, bound=bound)
    for n in degs:
        params = {"ext": n}
        try:
            Nt = norm_map(A, n, bound=bound, dst=QA)
        except (NotAHomomorphism, NotConstantOnCosets) as e:
            out.append(CheckResult("norm-homomorphism", False, e.witness, params))
            continue
        except TooLarge:
            out.append(CheckResult("norm", True, "skipped: size", params))
            continue
        tables_[n] = Nt
        out.append(CheckResult("norm-homomorphism", True, None, params))
        out.extend(_equivariance(A, Nt, params))
        out.append(_surjectivity(Nt, params))
        out.append(_coinvariants(A, Nt, params))
        if functoriality:
            out.append(_functoriality(A, n, Nt, bound, params))
    for lo, hi in zip(degs, degs[1:]):
        if lo in tables_ and hi in tables_ and hi % lo == 0:
            out.append(_transitivity(A, lo, hi, tables_[lo], tables_[hi], bound))
    return out


def _equivariance(A, Nt: NormTable, params) -> list[CheckResult]:
    q = A.defined_over or A.field.q
    if q == A.field.q:
        return [CheckResult("norm-equivariance", True, None, dict(params, q=q))]
    G1, G = Nt.src.ambient, Nt.dst.ambient
    pf1 = frobenius_permutation(G1, q)
    lhs = Nt.table[pf1]                                   # N(Fr g)
    fr = frobenius_table(A.field, q)
    img_fr = fr[Nt.images]
    rhs = Nt.dst.log_of(img_fr)                           # Fr(N g)
    bad = np.flatnonzero(np.any(lhs != rhs, axis=1)) if lhs.shape[1] else []
    w = None if not len(bad) else {"element": G1.elements[int(bad[0])].tolist()}
    return [CheckResult("norm-equivariance", not len(bad), w, dict(params, q=q))]


def _surjectivity(Nt: NormTable, params) -> CheckResult:
    size = Nt.image_size()
    ok = size == Nt.dst.size
    return CheckResult("norm-surjectivity", ok, None if ok else {"image": size, "target": Nt.dst.size},
                       dict(params, image=size, target=Nt.dst.size))


def _coinvariants(A, Nt: NormTable, params) -> CheckResult:
    G1 = Nt.src.ambient
    if Nt.ext == 1:
        return CheckResult("norm-coinvariants", True, None, params)
    pf = frobenius_permutation(G1, A.field.q)
    killed = np.all(Nt.table[pf] == Nt.table)
    # image of the coinvariants equals the image of N
    ok = bool(killed) and Nt.image_size() == Nt.dst.size
    w = None
    if not killed:
        i = int(np.flatnonzero(np.any(Nt.table[pf] != Nt.table, axis=1))[0])
        w = {"element": G1.elements[i].tolist()}
    return CheckResult("norm-coinvariants", ok, w, params)


def _functoriality(A, n, Nt: NormTable, bound, params) -> CheckResult:
    A2 = power_ideal(A, 2)
    full = Nt.dst.ambient.U
    checked = 0
    for U in subspaces_between(A2, full):
        if U == full:
            continue
        NU = norm_map(A, n, U, bound=bound)
        # include then N^A  vs  N^U then include
        via_A = Nt.apply(NU.src.ambient.elements)
        via_U = Nt.dst.log_of(NU.images)
        bad = np.flatnonzero(np.any(via_A != via_U, axis=1)) if via_A.shape[1] else []
        checked += 1
        if len(bad):
            return CheckResult("norm-functoriality", False,
                               {"subspace": [list(r) for r in U.basis],
                                "element": NU.src.ambient.elements[int(bad[0])].tolist()},
                               dict(params, subgroups=checked))
    return CheckResult("norm-functoriality", True, None, dict(params, subgroups=checked))


def _transitivity(A, lo, hi, N_lo: NormTable, N_hi: NormTable, bound) -> CheckResult:
    A_lo = extend_scalars(A, lo)
    N_mid = norm_map(A_lo, hi // lo, bound=bound, dst=N_lo.src)
    if N_mid.src.ambient.A != N_hi.src.ambient.A:
        raise AssertionError("extension towers disagree")  # pragma: no cover
    comp = compose_tables(N_lo, N_mid)
    bad = np.flatnonzero(np.any(comp != N_hi.table, axis=1)) if comp.shape[1] else []
    w = None if not len(bad) else {"element": N_hi.src.ambient.elements[int(bad[0])].tolist()}
    return CheckResult("norm-transitivity", not len(bad), w, {"ext": [lo, hi]})
