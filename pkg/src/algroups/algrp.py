"""The algebra group G = 1+A and its subgroups 1+U.

An element 1+a is handled through its vector a.  Elements of a subgroup
1+U are listed in lexicographic order of their coefficient vectors, which is
numeric order of the integer code from :func:`nilalg.vector_codes`; for the
full group the index of an element equals its code.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import kernels
from .errors import (
    BadParameter,
    NotNormal,
    NotSubgroup,
    StabilizerNotAlgebraSubgroup,
    TooLarge,
)
from .gf import tables
from .nilalg import (
    NilpotentAlgebra,
    Subspace,
    complement_basis,
    full_space,
    is_subalgebra,
    power_ideal,
    span,
    vector_codes,
)

DEFAULT_BOUND = 2 ** 20


class AlgebraGroup:
    """The group 1+U for a multiplicatively closed subspace U of A."""

    def __init__(self, A: NilpotentAlgebra, U: Subspace | None = None, bound: int = DEFAULT_BOUND):
        self.A = A
        self.U = full_space(A.field, A.dim) if U is None else U
        self.is_full = self.U.rank == A.dim
        self.order = A.q ** self.U.rank
        if self.order > bound:
            raise TooLarge(f"|1+U| = {self.order} exceeds the bound {bound}")
        if not self.is_full and not is_subalgebra(A, self.U):
            raise NotSubgroup("subspace is not closed under multiplication")
        T = A.tables
        self._args = (A.terms, T.add, T.mul)
        self._nargs = (A.terms, T.add, T.mul, T.neg, A.nclass)

    def __repr__(self):
        return f"AlgebraGroup({self.A.name or 'A'}, rank={self.U.rank}, order={self.order})"

    def __eq__(self, other):
        return isinstance(other, AlgebraGroup) and self.A == other.A and self.U == other.U

    def __hash__(self):
        return hash((self.A, self.U))

    # -- elements -----------------------------------------------------------
    @cached_property
    def elements(self) -> np.ndarray:
        if self.is_full:
            from .linalg import all_vectors
            v = all_vectors(self.A.q, self.A.dim)
        else:
            v = self.U.elements()
        v.setflags(write=False)
        return v

    @cached_property
    def codes(self) -> np.ndarray:
        c = vector_codes(self.elements, self.A.q)
        c.setflags(write=False)
        return c

    def code(self, vecs) -> np.ndarray:
        return vector_codes(vecs, self.A.q)

    def index(self, vecs, check: bool = True) -> np.ndarray:
        """Positions of elements in :attr:`elements` (-1 for non-members unless ``check``)."""
        c = self.code(vecs)
        if self.is_full:
            return c
        pos = np.searchsorted(self.codes, c)
        pos_c = np.minimum(pos, self.order - 1)
        ok = self.codes[pos_c] == c
        if check and not np.all(ok):
            raise NotSubgroup("element outside the subgroup")
        return np.where(ok, pos_c, -1)

    def contains(self, vecs) -> np.ndarray:
        return self.index(vecs, check=False) >= 0

    # -- arithmetic (batched over rows) ---------------------------------------
    def mul(self, x, y) -> np.ndarray:
        x, y = _pair(x, y)
        return kernels.grp_mul(x, y, *self._args)

    def inv(self, x) -> np.ndarray:
        return kernels.grp_inv(np.atleast_2d(np.asarray(x, dtype=np.int64)), *self._nargs)

    def conj(self, x, g) -> np.ndarray:
        """g x g^{-1}; ``g`` may be a single row."""
        x = np.atleast_2d(np.asarray(x, dtype=np.int64))
        g = np.atleast_2d(np.asarray(g, dtype=np.int64))
        return kernels.grp_conj(x, g, *self._nargs)

    def comm(self, x, y) -> np.ndarray:
        x, y = _pair(x, y)
        return kernels.grp_comm(x, y, *self._nargs)

    def power(self, x, e: int) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=np.int64))
        out = np.zeros_like(x)
        base = x
        while e:
            if e & 1:
                out = self.mul(out, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return out

    # -- structure ------------------------------------------------------------
    @cached_property
    def generators(self) -> np.ndarray:
        """1+lambda*b for b running over a basis adapted to U > U^2 > ... and
        lambda over the power basis of k as an F_p-space."""
        A = self.A
        T = A.tables
        rows = []
        k = 1
        cur = self.U
        while cur.rank:
            nxt = power_ideal(A, k + 1, self.U)
            for b in complement_basis(cur, nxt):
                for i in range(A.field.m):
                    rows.append(T.mul[A.field.p ** i, b])
            cur = nxt
            k += 1
        g = np.array(rows, dtype=np.int64).reshape(-1, A.dim)
        g.setflags(write=False)
        return g

    def subgroup(self, V: Subspace) -> "AlgebraGroup":
        return AlgebraGroup(self.A, V)

    def is_normal_in(self, G: "AlgebraGroup") -> bool:
        if self.order == 1:
            return True
        gens = self.generators
        for g in G.generators:
            if not np.all(self.contains(self.conj(gens, g))):
                return False
        return True


def _pair(x, y):
    x = np.atleast_2d(np.asarray(x, dtype=np.int64))
    y = np.atleast_2d(np.asarray(y, dtype=np.int64))
    if x.shape[0] != y.shape[0]:
        x, y = np.broadcast_arrays(x, y)
        x, y = np.ascontiguousarray(x), np.ascontiguousarray(y)
    return x, y


def group_arith(op: str, A: NilpotentAlgebra, *operands) -> np.ndarray:
    """mul, inv, commutator (g h g^-1 h^-1) or conjugate (h g h^-1) on single elements."""
    G = _scratch_group(A)
    ops = [np.asarray(o, dtype=np.int64).reshape(1, A.dim) for o in operands]
    if op == "mul":
        return G.mul(*ops)[0]
    if op == "inv":
        return G.inv(ops[0])[0]
    if op == "commutator":
        return G.comm(*ops)[0]
    if op == "conjugate":
        return G.conj(ops[0], ops[1])[0]
    raise BadParameter(f"unknown group operation {op!r}")


def _scratch_group(A: NilpotentAlgebra) -> AlgebraGroup:
    # arithmetic only: skip the size bound
    return AlgebraGroup(A, bound=float("inf"))


def enumerate_group(A: NilpotentAlgebra, S: Subspace | None = None, bound: int = DEFAULT_BOUND) -> np.ndarray:
    return AlgebraGroup(A, S, bound).elements


# ---------------------------------------------------------------------------
# closures

def _unique_rows(G: AlgebraGroup, vecs: np.ndarray) -> np.ndarray:
    c = G.code(vecs)
    _, first = np.unique(c, return_index=True)
    return vecs[np.sort(first)] if vecs.shape[0] else vecs


def _close(G: AlgebraGroup, start: np.ndarray, right: np.ndarray, conj_by: np.ndarray,
           known_codes: np.ndarray | None = None) -> np.ndarray:
    """Smallest set containing ``start`` (and ``known_codes``) closed under
    right multiplication by ``right`` and conjugation by ``conj_by``.
    Returns sorted codes."""
    d = G.A.dim
    known = np.unique(np.concatenate([G.code(start), known_codes if known_codes is not None else []]).astype(np.int64))
    frontier = start
    while frontier.shape[0]:
        parts = [G.mul(frontier, r) for r in right]
        parts += [G.conj(frontier, g) for g in conj_by]
        if not parts:
            break
        cand = _unique_rows(G, np.concatenate(parts).reshape(-1, d))
        cc = G.code(cand)
        new = ~np.isin(cc, known)
        frontier = cand[new]
        known = np.union1d(known, cc[new])
    return known


def _decode(G: AlgebraGroup, codes: np.ndarray) -> np.ndarray:
    q, d = G.A.q, G.A.dim
    codes = np.asarray(codes, dtype=np.int64)
    return np.stack([(codes // q ** (d - 1 - i)) % q for i in range(d)], axis=1).reshape(-1, d)


def commutator_subgroup(A: NilpotentAlgebra, U: Subspace | None = None, W: Subspace | None = None,
                        bound: int = DEFAULT_BOUND) -> np.ndarray:
    """(1+U, 1+W) as a sorted array of element vectors."""
    T = AlgebraGroup(A, U, bound)
    S = T if W is None else AlgebraGroup(A, W, bound)
    return _decode(T, _commutator_codes(T, S))


def _commutator_codes(T: AlgebraGroup, S: AlgebraGroup) -> np.ndarray:
    # (T,S) is the normal closure in <T,S> of the generator commutators
    X, Y = T.generators, S.generators
    d = T.A.dim
    ident = np.zeros((1, d), dtype=np.int64)
    if X.shape[0] == 0 or Y.shape[0] == 0:
        return T.code(ident)
    I, J = np.meshgrid(np.arange(X.shape[0]), np.arange(Y.shape[0]), indexing="ij")
    C = _unique_rows(T, T.comm(X[I.ravel()], Y[J.ravel()]))
    C = C[np.any(C != 0, axis=1)]
    conj_by = _unique_rows(T, np.concatenate([X, Y]))
    return _close(T, ident, C, conj_by)


def _generating_set(G: AlgebraGroup, codes: np.ndarray) -> np.ndarray:
    """A small generating set of the subgroup with the given element codes."""
    vecs = _decode(G, codes)
    d = G.A.dim
    gens = np.zeros((0, d), dtype=np.int64)
    H = G.code(np.zeros((1, d), dtype=np.int64))
    for v, c in zip(vecs, codes):
        if H.size == codes.size:
            break
        if np.isin(c, H):
            continue
        gens = np.vstack([gens, v])
        H = _close(G, _decode(G, H), gens, np.zeros((0, d), dtype=np.int64))
    return gens


def coset_labels(G: AlgebraGroup, gens: np.ndarray) -> tuple[np.ndarray, int]:
    """Label the left cosets g<gens> of G: labels are 0..n-1 ordered by the
    smallest element index in each coset."""
    N = G.order
    if gens.shape[0] == 0:
        return np.arange(N, dtype=np.int64), N
    el = G.elements
    src, dst = [], []
    for h in gens:
        src.append(np.arange(N))
        dst.append(G.index(G.mul(el, h)))
    src = np.concatenate(src)
    dst = np.concatenate(dst)
    graph = coo_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(N, N)).tocsr()
    n, lab = connected_components(graph, directed=True, connection="weak")
    mins = np.full(n, N, dtype=np.int64)
    np.minimum.at(mins, lab, np.arange(N))
    rank = np.empty(n, dtype=np.int64)
    rank[np.argsort(mins)] = np.arange(n)
    return rank[lab], n


# ---------------------------------------------------------------------------
# abelianization

@dataclass(eq=False)
class AbelianQuotient:
    """T^ab with a cyclic decomposition; ``log[i]`` is the exponent tuple of
    the i-th element of T."""
    ambient: AlgebraGroup
    generators: np.ndarray
    orders: tuple[int, ...]
    log: np.ndarray
    derived: np.ndarray          # sorted codes of (T,T)
    labels: np.ndarray           # coset label of each element of T
    reps: np.ndarray             # index of the smallest element in each coset

    @property
    def size(self) -> int:
        return int(np.prod(self.orders)) if self.orders else 1

    @property
    def exponent(self) -> int:
        return max(self.orders) if self.orders else 1

    def log_of(self, vecs) -> np.ndarray:
        return self.log[self.ambient.index(vecs)]

    def elements_of_derived(self) -> np.ndarray:
        return _decode(self.ambient, self.derived)

    def label_log(self) -> np.ndarray:
        return self.log[self.reps]


def abelianize(A: NilpotentAlgebra, U: Subspace | None = None, bound: int = DEFAULT_BOUND,
               group: AlgebraGroup | None = None) -> AbelianQuotient:
    T = group if group is not None else AlgebraGroup(A, U, bound)
    D = _commutator_codes(T, T)
    labels, n = coset_labels(T, _generating_set(T, D))
    reps = np.full(n, T.order, dtype=np.int64)
    np.minimum.at(reps, labels, np.arange(T.order))
    gens_idx, orders, qlog = _cyclic_decomposition(T, labels, reps, A.field.p)
    log = qlog[labels]
    log.setflags(write=False)
    gens = T.elements[gens_idx] if gens_idx else np.zeros((0, A.dim), dtype=np.int64)
    return AbelianQuotient(T, gens, tuple(orders), log, D, labels, reps)


def _cyclic_decomposition(T: AlgebraGroup, labels, reps, p: int):
    """Greedy splitting: repeatedly take an element of largest order in the
    quotient by the part already split off, corrected to have that order."""
    n = reps.size
    R = T.elements[reps]

    def translate(lab: int) -> np.ndarray:
        # the permutation l -> l * lab of coset labels
        return labels[T.index(T.mul(R, T.elements[reps[lab]]))]

    acc = R
    for _ in range(p - 1):
        acc = T.mul(acc, R)
    pmap = labels[T.index(acc)]

    inH = np.zeros(n, dtype=bool)
    inH[0] = True
    H = np.array([0], dtype=np.int64)
    qlog = np.zeros((n, 0), dtype=np.int64)
    gens: list[int] = []
    orders: list[int] = []
    while H.size < n:
        cur = np.arange(n)
        qord = np.ones(n, dtype=np.int64)
        done = inH.copy()
        while not np.all(done):
            cur = pmap[cur]
            qord[~done] *= p
            done |= inH[cur]
        f = int(qord.max())
        y = int(np.flatnonzero(qord == f)[0])
        ty = translate(y)
        yf = 0
        for _ in range(f):
            yf = ty[yf]
        a = qlog[yf]
        if np.any(a % f):
            raise AssertionError("greedy cyclic splitting failed")
        for g, o, aj in zip(gens, orders, a):
            tg = translate(g)
            for _ in range((-(aj // f)) % o):
                y = tg[y]
        ty = translate(y)
        blocks = [H]
        for _ in range(f - 1):
            blocks.append(ty[blocks[-1]])
        H_new = np.concatenate(blocks)
        new_log = np.zeros((n, len(gens) + 1), dtype=np.int64)
        new_log[H_new] = np.hstack([np.tile(qlog[H], (f, 1)),
                                    np.repeat(np.arange(f), H.size)[:, None]])
        qlog = new_log
        inH[H_new] = True
        H = H_new
        gens.append(y)
        orders.append(f)
    return [int(reps[g]) for g in gens], orders, qlog


def quotient_generators_labels(Q: AbelianQuotient) -> list[int]:
    return [int(Q.labels[Q.ambient.index(g[None])[0]]) for g in Q.generators]


# ---------------------------------------------------------------------------
# conjugacy classes

def conjugation_permutations(G: AlgebraGroup, by: np.ndarray | None = None, on: AlgebraGroup | None = None) -> np.ndarray:
    """perm[k, i] = index of g_k x_i g_k^{-1} in ``on`` (default G) for
    g_k in ``by`` (default G's generators)."""
    on = G if on is None else on
    by = G.generators if by is None else by
    el = on.elements
    return np.stack([on.index(G.conj(el, g)) for g in by]) if by.shape[0] else np.zeros((0, on.order), dtype=np.int64)


def orbit_labels(perms: np.ndarray, n: int) -> tuple[np.ndarray, int]:
    """Orbits of the group generated by permutations of range(n), labelled by
    increasing smallest member."""
    if perms.shape[0] == 0:
        return np.arange(n, dtype=np.int64), n
    src = np.tile(np.arange(n), perms.shape[0])
    graph = coo_matrix((np.ones(src.size, dtype=np.int8), (src, perms.ravel())), shape=(n, n)).tocsr()
    k, lab = connected_components(graph, directed=True, connection="weak")
    mins = np.full(k, n, dtype=np.int64)
    np.minimum.at(mins, lab, np.arange(n))
    rank = np.empty(k, dtype=np.int64)
    rank[np.argsort(mins)] = np.arange(k)
    return rank[lab], k


@dataclass(eq=False)
class ConjugacyClasses:
    group: AlgebraGroup
    labels: np.ndarray        # class of each element
    reps: np.ndarray          # lex-minimal representative index per class
    sizes: np.ndarray

    def __len__(self):
        return self.reps.size

    def as_list(self) -> list[tuple[tuple[int, ...], int]]:
        el = self.group.elements
        return [(tuple(int(v) for v in el[r]), int(s)) for r, s in zip(self.reps, self.sizes)]


def conjugacy_classes(A: NilpotentAlgebra, U: Subspace | None = None, bound: int = DEFAULT_BOUND,
                      group: AlgebraGroup | None = None) -> ConjugacyClasses:
    G = group if group is not None else AlgebraGroup(A, U, bound)
    lab, k = orbit_labels(conjugation_permutations(G), G.order)
    reps = np.full(k, G.order, dtype=np.int64)
    np.minimum.at(reps, lab, np.arange(G.order))
    sizes = np.bincount(lab, minlength=k)
    return ConjugacyClasses(G, lab, reps, sizes)


# ---------------------------------------------------------------------------
# linear characters

@dataclass(frozen=True, eq=False)
class LinearCharacter:
    domain: AbelianQuotient
    exponents: tuple[int, ...]

    def __post_init__(self):
        if len(self.exponents) != len(self.domain.orders):
            raise BadParameter("exponent tuple length does not match the decomposition")

    def __eq__(self, other):
        return (isinstance(other, LinearCharacter) and self.domain is other.domain
                and self.exponents == other.exponents)

    def __hash__(self):
        return hash((id(self.domain), self.exponents))

    @property
    def level(self) -> int:
        return self.domain.exponent

    @cached_property
    def weights(self) -> np.ndarray:
        E = self.level
        return np.array([e * (E // o) for e, o in zip(self.exponents, self.domain.orders)], dtype=np.int64)

    def exponent_at(self, idx) -> np.ndarray:
        """Root-of-unity exponent (mod :attr:`level`) at element indices of the domain group."""
        lg = self.domain.log[np.asarray(idx)]
        return (lg @ self.weights) % self.level if lg.shape[-1] else np.zeros(np.shape(idx), dtype=np.int64)

    def exponent_of(self, vecs) -> np.ndarray:
        return self.exponent_at(self.domain.ambient.index(vecs))

    @cached_property
    def values(self) -> np.ndarray:
        """Exponents at every element of the domain group, in element order."""
        v = self.exponent_at(np.arange(self.domain.ambient.order))
        v.setflags(write=False)
        return v

    def is_trivial(self) -> bool:
        return not any(self.exponents)

    def order(self) -> int:
        o = 1
        for e, n in zip(self.exponents, self.domain.orders):
            if e:
                from math import gcd
                o = max(o, n // gcd(e, n))
        return o

    def to_json(self) -> list[int]:
        return list(self.exponents)


def character_group(Q: AbelianQuotient) -> list[LinearCharacter]:
    return [LinearCharacter(Q, tuple(e)) for e in product(*[range(o) for o in Q.orders])]


def character_from_values(Q: AbelianQuotient, gen_values: Sequence[int], level: int) -> LinearCharacter:
    """The character taking value zeta_level^{gen_values[i]} on the i-th generator."""
    exps = []
    for v, o in zip(gen_values, Q.orders):
        # zeta_level^v must be an o-th root of unity: v * o = 0 mod level
        if (v * o) % level:
            raise BadParameter("value is not an o-th root of unity")
        exps.append((v * o // level) % o if level >= o else (v * o // level) % o)
    return LinearCharacter(Q, tuple(exps))


def stabilizer_of_character(A: NilpotentAlgebra, chi: LinearCharacter, G: AlgebraGroup | None = None) -> Subspace:
    """Subspace V with 1+V = {g in G : chi(g t g^-1) = chi(t) for all t}.

    Raises NotNormal if G does not normalize the domain, and
    StabilizerNotAlgebraSubgroup if the stabilizer is not of the form 1+V
    with V a subalgebra.
    """
    G = G if G is not None else AlgebraGroup(A)
    T = chi.domain.ambient
    if not T.is_normal_in(G):
        raise NotNormal("domain of the character is not normal")
    tg = T.generators
    base = chi.exponent_of(tg) if tg.shape[0] else np.zeros(0, dtype=np.int64)
    el = G.elements
    ok = np.ones(G.order, dtype=bool)
    for t, b in zip(tg, base):
        # chi(g t g^-1) for all g at once: conjugate t by every element
        ct = G.mul(G.mul(el, np.broadcast_to(t, el.shape)), G.inv(el))
        ok &= chi.exponent_of(ct) == b
    stab = el[ok]
    return _as_algebra_subgroup(A, stab, "stabilizer")


def _as_algebra_subgroup(A: NilpotentAlgebra, vecs: np.ndarray, what: str) -> Subspace:
    V = span(A.field, A.dim, vecs)
    if V.size() != vecs.shape[0] or not np.all(V.contains(vecs)):
        raise StabilizerNotAlgebraSubgroup(f"{what} is not of the form 1+V", witness=vecs[:4].tolist())
    if not is_subalgebra(A, V):
        raise StabilizerNotAlgebraSubgroup(f"{what} subspace is not multiplicatively closed",
                                           witness=[list(r) for r in V.basis])
    return V
