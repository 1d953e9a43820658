"""Strongly Heisenberg representations of G = 1+U.

Everything is relative to a group 1+U inside a fixed ambient algebra A
(coordinates are always A's); H = 1+U^2 plays the role of 1+A^2.  A
G-invariant linear character phi of H defines the alternating pairing
c(g, h) = phi((g, h)) on U/U^2, with values in the p-th roots of unity.
The pairing is stored on an F_p-basis t^j * c_i of the lifts, where c_i is
a k-basis of a complement of U^2 in U and t^j runs over the power basis of k.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .algrp import (
    AbelianQuotient,
    AlgebraGroup,
    LinearCharacter,
    _commutator_codes,
    abelianize,
)
from .cyclo import ClassFunction, group_level, induce, inner_product
from .errors import (
    BadParameter,
    IsotropicExtensionFailed,
    NoExtension,
    NotInvariant,
    NotIrreducible,
    RadicalMismatch,
    RadicalNotSubspace,
)
from .k1norm import frobenius_permutation, norm_map
from .linalg import all_vectors, coordinates, nullspace_mod, rref_mod
from .nilalg import (
    NilpotentAlgebra,
    Subspace,
    complement_basis,
    extend_scalars,
    extend_subspace,
    full_space,
    is_subalgebra,
    power_ideal,
    span,
    space_sum,
)


class SHContext:
    """Cached data for the group G = 1+U and its subgroup H = 1+U^2."""

    def __init__(self, A: NilpotentAlgebra, U: Subspace | None = None, level: int | None = None):
        self.A = A
        self.U = full_space(A.field, A.dim) if U is None else U
        self.G = AlgebraGroup(A, self.U)
        self.U2 = power_ideal(A, 2, self.U)
        self.H = AlgebraGroup(A, self.U2)
        self.level = level if level is not None else group_level(A)
        T = A.tables
        self.lift_k = complement_basis(self.U, self.U2)
        m, p = A.field.m, A.field.p
        self.lift_p = np.array([T.mul[p ** j, c] for c in self.lift_k for j in range(m)],
                               dtype=np.int64).reshape(-1, A.dim)

    def __repr__(self):
        return f"SHContext({self.A.name or 'A'}, rank U={self.U.rank}, rank U2={self.U2.rank})"

    @cached_property
    def QH(self) -> AbelianQuotient:
        return abelianize(self.A, group=self.H)

    @cached_property
    def GH_codes(self) -> np.ndarray:
        """Sorted codes of the subgroup (G, H)."""
        return _commutator_codes(self.G, self.H)

    @cached_property
    def _quot_basis(self) -> np.ndarray:
        return np.vstack([self.lift_k, self.U2.matrix]).reshape(-1, self.A.dim)

    def fp_coords(self, vecs) -> np.ndarray:
        """F_p coordinates of the images of vectors of U in U/U^2."""
        r = self.lift_k.shape[0]
        vecs = np.atleast_2d(np.asarray(vecs, dtype=np.int64))
        if r == 0:
            return np.zeros((vecs.shape[0], 0), dtype=np.int64)
        c = coordinates(self.A.field, self._quot_basis, vecs)[:, :r]
        digits = self.A.tables.digits[c]          # (N, r, m)
        return digits.reshape(vecs.shape[0], -1)

    def lift(self, x) -> np.ndarray:
        """Vectors of U lifting F_p coordinate rows ``x``."""
        T = self.A.tables
        x = np.atleast_2d(np.asarray(x, dtype=np.int64))
        out = np.zeros((x.shape[0], self.A.dim), dtype=np.int64)
        for l, w in enumerate(self.lift_p):
            out = T.add[out, T.mul[x[:, l][:, None] % self.A.field.p, w[None, :]]]
        return out


@lru_cache(maxsize=256)
def context(A: NilpotentAlgebra, U: Subspace | None = None) -> SHContext:
    return SHContext(A, U)


def _all_exponents(orders) -> np.ndarray:
    orders = list(orders)
    if not orders:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*[np.arange(o) for o in orders], indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)


def _scaled(Q: AbelianQuotient, E: int) -> np.ndarray:
    return np.array([E // o for o in Q.orders], dtype=np.int64)


def character_solutions(Q: AbelianQuotient, logs: np.ndarray, targets: np.ndarray, E: int) -> np.ndarray:
    """Exponent tuples t of characters of Q with sum_i t_i (E/o_i) logs[g, i] = targets[g] mod E."""
    tup = _all_exponents(Q.orders)
    if logs.shape[0] == 0:
        return tup
    vals = ((tup * _scaled(Q, E)) @ logs.T) % E
    return tup[np.all(vals == np.asarray(targets) % E, axis=1)]


def exps_at(chi: LinearCharacter, vecs, E: int) -> np.ndarray:
    if E % chi.level:
        raise BadParameter("level too small")
    return chi.exponent_of(vecs) * (E // chi.level) % E


# ---------------------------------------------------------------------------
# invariant characters and the pairing

def invariant_central_characters(A: NilpotentAlgebra, U: Subspace | None = None,
                                 ctx: SHContext | None = None) -> list[LinearCharacter]:
    """Characters of H = 1+U^2 fixed by G-conjugation, i.e. trivial on (G, H)."""
    ctx = ctx or context(A, U)
    Q = ctx.QH
    from .algrp import _decode
    gh = _decode(ctx.H, ctx.GH_codes)
    logs = np.unique(Q.log_of(gh), axis=0) if Q.orders else np.zeros((0, 0), dtype=np.int64)
    E = Q.exponent
    sols = character_solutions(Q, logs, np.zeros(logs.shape[0], dtype=np.int64), E)
    return [LinearCharacter(Q, tuple(int(v) for v in t)) for t in sols]


def is_invariant(ctx: SHContext, phi: LinearCharacter, full: bool = False) -> bool:
    """Check phi(g h g^-1) = phi(h): on generators, or on all of G x H."""
    G, H = ctx.G, ctx.H
    hs = H.elements if full else H.generators
    gs = G.elements if full else G.generators
    base = phi.exponent_of(hs) if hs.shape[0] else np.zeros(0, dtype=np.int64)
    for g in gs:
        if hs.shape[0] and not np.array_equal(phi.exponent_of(G.conj(hs, g)), base):
            return False
    return True


@dataclass(eq=False)
class PairingMatrix:
    dim: int
    level: int                 # entries are exponents of zeta_level (level = p)
    entries: np.ndarray        # (dim, dim) over Z/level
    ctx: SHContext

    def is_alternating(self) -> bool:
        P = self.entries
        return bool(np.all(np.diag(P) == 0) and np.all((P + P.T) % self.level == 0))

    def evaluate(self, x, y) -> np.ndarray:
        """Pairing exponents of F_p coordinate rows x, y."""
        x = np.atleast_2d(x)
        y = np.atleast_2d(y)
        return np.einsum("ni,ij,nj->n", x, self.entries, y) % self.level


def _pair_exps(ctx: SHContext, phi: LinearCharacter, X, Y) -> np.ndarray:
    """phi((1+x, 1+y)) as exponents of zeta_p, rowwise."""
    p = ctx.A.field.p
    e = phi.exponent_of(ctx.G.comm(X, Y))
    if phi.level == 1:
        return np.zeros(e.shape, dtype=np.int64)
    s = phi.level // p
    if np.any(e % s):
        raise AssertionError("commutator pairing value is not a p-th root of unity")
    return (e // s) % p


def commutator_pairing(A: NilpotentAlgebra, phi: LinearCharacter, U: Subspace | None = None,
                       ctx: SHContext | None = None, rng: np.random.Generator | None = None,
                       samples: int = 8) -> PairingMatrix:
    ctx = ctx or context(A, U)
    if not is_invariant(ctx, phi):
        raise NotInvariant("character is not invariant under conjugation")
    W = ctx.lift_p
    r = W.shape[0]
    I, J = np.meshgrid(np.arange(r), np.arange(r), indexing="ij")
    P = _pair_exps(ctx, phi, W[I.ravel()], W[J.ravel()]).reshape(r, r) if r else np.zeros((0, 0), dtype=np.int64)
    # independence of the lifts: shift both arguments by elements of U^2
    if r and ctx.U2.rank:
        rng = rng or np.random.default_rng(0)
        H = ctx.H.elements
        for _ in range(samples):
            u, v = H[rng.integers(H.shape[0])], H[rng.integers(H.shape[0])]
            T = ctx.A.tables
            P2 = _pair_exps(ctx, phi, T.add[W[I.ravel()], u], T.add[W[J.ravel()], v]).reshape(r, r)
            if not np.array_equal(P, P2):
                raise AssertionError("commutator pairing depends on the lifts")
    return PairingMatrix(r, ctx.A.field.p, P, ctx)


def radical_g_phi(A: NilpotentAlgebra, phi: LinearCharacter, U: Subspace | None = None,
                  ctx: SHContext | None = None, pairing: PairingMatrix | None = None) -> Subspace:
    """V with 1+V = {g : phi((g, h)) = 1 for all h in G}."""
    ctx = ctx or context(A, U)
    P = pairing or commutator_pairing(A, phi, ctx=ctx)
    p = ctx.A.field.p
    K = nullspace_mod(P.entries, p) if P.dim else np.zeros((0, 0), dtype=np.int64)
    lifts = ctx.lift(K) if K.shape[0] else np.zeros((0, ctx.A.dim), dtype=np.int64)
    V = space_sum(ctx.U2, span(ctx.A.field, ctx.A.dim, lifts)) if lifts.shape[0] else ctx.U2
    if (V.rank - ctx.U2.rank) * ctx.A.field.m != K.shape[0]:
        raise RadicalNotSubspace("kernel of the pairing is not a k-subspace",
                                 witness={"fp_kernel_dim": int(K.shape[0]), "k_rank": V.rank - ctx.U2.rank})
    if not is_subalgebra(ctx.A, V):
        raise RadicalNotSubspace("radical is not multiplicatively closed",
                                 witness=[list(r) for r in V.basis])
    return V


def _colex_candidates(ctx: SHContext, rng: np.random.Generator | None) -> np.ndarray:
    r = ctx.lift_k.shape[0]
    vk = all_vectors(ctx.A.field.q, r)[:, ::-1][1:]   # first coordinate least significant
    if rng is not None:
        vk = vk[rng.permutation(vk.shape[0])]
    return vk


def maximal_isotropic(A: NilpotentAlgebra, phi: LinearCharacter, U: Subspace | None = None,
                      ctx: SHContext | None = None, rng: np.random.Generator | None = None,
                      pairing: PairingMatrix | None = None) -> Subspace:
    """Lift L~ of a maximal isotropic k-subspace L of U/U^2 (contains the radical)."""
    ctx = ctx or context(A, U)
    P = pairing or commutator_pairing(A, phi, ctx=ctx)
    p = ctx.A.field.p
    T = ctx.A.tables
    m = ctx.A.field.m
    n = P.dim
    if n == 0:
        return ctx.U
    L = nullspace_mod(P.entries, p)
    cand_k = None
    while True:
        cons = (L @ P.entries) % p if L.shape[0] else np.zeros((0, n), dtype=np.int64)
        perp = nullspace_mod(cons, p) if cons.shape[0] else np.eye(n, dtype=np.int64)
        if perp.shape[0] == L.shape[0]:
            break
        if cand_k is None:
            cand_k = _colex_candidates(ctx, rng)
            cand_vecs = combine_k(ctx, cand_k)
            cand_fp = ctx.fp_coords(cand_vecs)
        in_perp = np.all((cand_fp @ cons.T) % p == 0, axis=1) if cons.shape[0] else np.ones(cand_fp.shape[0], bool)
        annL = nullspace_mod(L, p) if L.shape[0] else np.eye(n, dtype=np.int64)
        not_in_L = np.any((cand_fp @ annL.T) % p != 0, axis=1)
        hits = np.flatnonzero(in_perp & not_in_L)
        if hits.size == 0:
            raise IsotropicExtensionFailed("no vector of L-perp outside L", witness=L.tolist())
        v = cand_vecs[hits[0]]
        new = np.array([T.mul[p ** j, v] for j in range(m)], dtype=np.int64)
        L = rref_mod(np.vstack([L, ctx.fp_coords(new)]), p)[0]
        if np.any((L @ P.entries @ L.T) % p):
            raise IsotropicExtensionFailed("k-span of an isotropic extension is not isotropic",
                                           witness=L.tolist())
    Lt = space_sum(ctx.U2, span(ctx.A.field, ctx.A.dim, ctx.lift(L)))
    if not is_subalgebra(ctx.A, Lt):
        raise IsotropicExtensionFailed("lift of the isotropic subspace is not a subalgebra",
                                       witness=[list(r) for r in Lt.basis])
    return Lt


def combine_k(ctx: SHContext, coeffs: np.ndarray) -> np.ndarray:
    from .linalg import combine
    if coeffs.shape[1] == 0:
        return np.zeros((coeffs.shape[0], ctx.A.dim), dtype=np.int64)
    return combine(ctx.A.field, coeffs, ctx.lift_k)


# ---------------------------------------------------------------------------
# classification

@dataclass(eq=False)
class SHDatum:
    ctx: SHContext
    phi: LinearCharacter        # on 1+U^2
    g_phi: Subspace             # V with G_phi = 1+V
    chi: LinearCharacter        # on 1+V, extending phi

    @property
    def A(self) -> NilpotentAlgebra:
        return self.ctx.A

    @property
    def degree(self) -> int:
        idx = self.ctx.A.q ** (self.ctx.U.rank - self.g_phi.rank)
        d = int(round(idx ** 0.5))
        if d * d != idx:
            raise AssertionError("[G : G_phi] is not a square")
        return d

    @property
    def fdim(self) -> int:
        from .irred import log_q
        return log_q(self.degree, self.ctx.A.q)

    def key(self):
        return (self.phi.exponents, self.g_phi.basis, self.chi.exponents)

    def to_json(self) -> dict:
        return {"phi": list(self.phi.exponents), "g_phi": self.g_phi.to_json(),
                "chi": list(self.chi.exponents)}


def extensions_of(Q_big: AbelianQuotient, small: LinearCharacter, gens: np.ndarray) -> np.ndarray:
    """Exponent tuples of characters of Q_big agreeing with ``small`` on ``gens``."""
    E = max(Q_big.exponent, small.level)
    logs = Q_big.log_of(gens) if gens.shape[0] else np.zeros((0, len(Q_big.orders)), dtype=np.int64)
    tgt = exps_at(small, gens, E) if gens.shape[0] else np.zeros(0, dtype=np.int64)
    return character_solutions(Q_big, logs, tgt, E)


@lru_cache(maxsize=4096)
def _abelianize_cached(A: NilpotentAlgebra, V: Subspace) -> AbelianQuotient:
    return abelianize(A, V)


def sh_data_for(ctx: SHContext, phi: LinearCharacter) -> list[SHDatum]:
    P = commutator_pairing(ctx.A, phi, ctx=ctx)
    V = radical_g_phi(ctx.A, phi, ctx=ctx, pairing=P)
    QV = _abelianize_cached(ctx.A, V)
    sols = extensions_of(QV, phi, ctx.H.generators)
    if sols.shape[0] == 0:
        raise NoExtension("invariant character has no extension to G_phi",
                          witness={"phi": list(phi.exponents)})
    return [SHDatum(ctx, phi, V, LinearCharacter(QV, tuple(int(v) for v in t))) for t in sols]


def sh_classify(A: NilpotentAlgebra, U: Subspace | None = None, ctx: SHContext | None = None) -> list[SHDatum]:
    ctx = ctx or context(A, U)
    out = []
    for phi in invariant_central_characters(A, ctx=ctx):
        out.extend(sh_data_for(ctx, phi))
    return out


def sh_inducing_pair(d: SHDatum, rng: np.random.Generator | None = None,
                     choice: int = 0) -> tuple[Subspace, LinearCharacter]:
    """(L~, psi): psi a linear character of 1+L~ extending chi (lex-first by default)."""
    ctx = d.ctx
    Lt = maximal_isotropic(ctx.A, d.phi, ctx=ctx, rng=rng)
    QL = _abelianize_cached(ctx.A, Lt)
    sols = extensions_of(QL, d.chi, AlgebraGroup(ctx.A, d.g_phi).generators)
    if sols.shape[0] == 0:
        raise NoExtension("chi does not extend to the isotropic lift", witness=d.to_json())
    t = sols[choice % sols.shape[0]]
    return Lt, LinearCharacter(QL, tuple(int(v) for v in t))


def sh_character(d: SHDatum, rng: np.random.Generator | None = None, choice: int = 0,
                 level: int | None = None, verify: bool = True) -> ClassFunction:
    E = level or d.ctx.level
    Lt, psi = sh_inducing_pair(d, rng, choice)
    f = induce(ClassFunction.from_linear(psi, E), d.ctx.G)
    if verify:
        if f.degree != d.degree:
            raise AssertionError(f"SH degree {f.degree} != sqrt[G:G_phi] = {d.degree}")
        if inner_product(f, f) != 1:
            raise NotIrreducible("induced strongly Heisenberg character is reducible")
    return f


# ---------------------------------------------------------------------------
# balance identity

def balance_check(A: NilpotentAlgebra, U: Subspace | None = None, chunk: int = 1 << 18) -> tuple[bool, object]:
    """c(1+la, 1+b) = c(1+a, 1+lb) for all a, b in U, l in k and every
    invariant phi; equivalently (1+la,1+b)(1+a,1+lb)^-1 lies in (G, H)."""
    ctx = context(A, U)
    G = ctx.G
    T = A.tables
    el = G.elements
    N = el.shape[0]
    gh = ctx.GH_codes
    per = max(1, chunk // N)
    for lam in range(2, A.field.q):     # lambda in {0, 1} is trivially balanced
        lel = T.mul[lam, el]
        for s in range(0, N, per):
            ia = np.repeat(np.arange(s, min(s + per, N)), N)
            ib = np.tile(np.arange(N), min(s + per, N) - s)
            c1 = G.comm(lel[ia], el[ib])
            c2 = G.comm(el[ia], lel[ib])
            w = G.mul(c1, G.inv(c2))
            ok = np.isin(G.code(w), gh)
            if not np.all(ok):
                k = int(np.flatnonzero(~ok)[0])
                return False, {"a": el[ia[k]].tolist(), "b": el[ib[k]].tolist(), "lambda": lam}
    return True, None


# ---------------------------------------------------------------------------
# base change of SH data

def _compose_with_norm(chi: LinearCharacter, A: NilpotentAlgebra, n: int, V: Subspace,
                       src: AbelianQuotient | None = None) -> LinearCharacter:
    """chi o N_{k'/k} as a character of (1+V')^ab."""
    Nt = norm_map(A, n, V, dst=chi.domain, src=src)
    src = Nt.src
    vals = (Nt.table @ chi.weights) % chi.level if Nt.table.shape[1] else np.zeros(src.ambient.order, dtype=np.int64)
    gen_idx = src.ambient.index(src.generators) if src.generators.shape[0] else np.zeros(0, dtype=np.int64)
    E = max(chi.level, src.exponent)
    exps = []
    for gi, o in zip(gen_idx, src.orders):
        v = int(vals[gi]) * (E // chi.level)
        if (v * o) % E:
            raise AssertionError("norm composite is not a character")
        exps.append((v * o // E) % o)
    out = LinearCharacter(src, tuple(exps))
    if not np.array_equal(out.values * (E // out.level) % E, vals * (E // chi.level) % E):
        raise AssertionError("composite with the norm is not multiplicative")
    return out


def sh_base_change(d: SHDatum, n: int) -> SHDatum:
    if n == 1:
        return d
    ctx = d.ctx
    A = ctx.A
    Ae = extend_scalars(A, n)
    Ue = extend_subspace(ctx.U, Ae)
    ctx_e = context(Ae, Ue)
    if extend_subspace(ctx.U2, Ae) != ctx_e.U2:
        raise AssertionError("scalar extension does not commute with squaring")
    phi_e = _compose_with_norm(d.phi, A, n, ctx.U2, src=ctx_e.QH)
    V_fresh = radical_g_phi(Ae, phi_e, ctx=ctx_e)
    V_ext = extend_subspace(d.g_phi, Ae)
    if V_fresh != V_ext:
        raise RadicalMismatch("radical of the base-changed character differs from the extended radical",
                              witness={"fresh": V_fresh.to_json(), "extended": V_ext.to_json()})
    chi_e = _compose_with_norm(d.chi, A, n, d.g_phi, src=_abelianize_cached(Ae, V_fresh))
    return SHDatum(ctx_e, phi_e, V_fresh, chi_e)


def sh_galois_invariant(d: SHDatum, q: int) -> bool:
    """phi and chi are fixed by Fr_q acting on coordinates."""
    for chi in (d.phi, d.chi):
        G = chi.domain.ambient
        perm = frobenius_permutation(G, q)
        if not np.array_equal(chi.values[perm], chi.values):
            return False
    return True
