"""All irreducible characters of 1+U by Clifford recursion over 1+U^2.

An irreducible character either lies over a G-invariant character of
H = 1+U^2 (then it is strongly Heisenberg and classified by heis), or over
a character psi of H whose stabilizer 1+V is a proper algebra subgroup; it
is then induced from an irreducible of 1+V lying over psi.  Chains record
that recursion and rebuild the character by induction.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .algrp import AlgebraGroup, LinearCharacter, _as_algebra_subgroup, character_from_values, coset_labels
from .cyclo import (
    ClassFunction,
    induce,
    inner_product,
    inner_product_raw,
    phi as euler_phi,
    reduction_matrix,
    restrict,
    fold,
    conj_matrix,
)
from .errors import (
    InvariantNotLinear,
    NotDefinedOverSubfield,
    NotGaloisInvariant,
    NotIrreducible,
    NotIrreducibleAfterBaseChange,
    ReductionMismatch,
    SumOfSquaresMismatch,
)
from .heis import (
    SHContext,
    SHDatum,
    context,
    sh_base_change,
    sh_character,
    sh_data_for,
    sh_inducing_pair,
)
from .k1norm import frobenius_permutation
from .nilalg import NilpotentAlgebra, Subspace, extend_scalars, extend_subspace, full_space, is_subalgebra


def log_q(d: int, q: int) -> int:
    """Exponent f with q^f = d; raises if d is not a power of q."""
    f, x = 0, 1
    while x < d:
        x *= q
        f += 1
    if x != d:
        raise ValueError(f"{d} is not a power of {q}")
    return f


def is_power_of(d: int, q: int) -> bool:
    try:
        log_q(d, q)
    except ValueError:
        return False
    return True


@dataclass(eq=False)
class IrrepChain:
    """An irreducible character of G = 1+U with its reduction certificate."""
    ctx: SHContext
    character: ClassFunction
    terminal: SHDatum | None = None
    V: Subspace | None = None                  # stabilizer 1+V of psi (proper)
    psi: "IrrepChain | None" = None            # irreducible of 1+U^2
    inner: "IrrepChain | None" = None          # irreducible of 1+V over psi

    @property
    def degree(self) -> int:
        return self.character.degree

    @property
    def fdim(self) -> int:
        return log_q(self.degree, self.ctx.A.q)

    @property
    def sh(self) -> int:
        return 0 if self.terminal is not None else 1 + self.inner.sh

    @property
    def steps(self) -> list[tuple[Subspace, "IrrepChain"]]:
        out, c = [], self
        while c.terminal is None:
            out.append((c.V, c.psi))
            c = c.inner
        return out

    @property
    def innermost(self) -> "IrrepChain":
        c = self
        while c.terminal is None:
            c = c.inner
        return c

    def summary(self) -> dict:
        return {"degree": self.degree, "fdim": self.fdim, "sh": self.sh}

    def to_json(self) -> dict:
        out = self.summary()
        out["steps"] = [{"subgroup": V.to_json(), "psi_degree": psi.degree} for V, psi in self.steps]
        out["terminal"] = self.innermost.terminal.to_json()
        return out


# ---------------------------------------------------------------------------
# character bookkeeping

def _key(f: ClassFunction) -> bytes:
    return f.values.tobytes()


def linear_from_class_function(Q, f: ClassFunction) -> LinearCharacter:
    """The linear character of Q whose class function is f (f linear)."""
    E = f.level
    R = reduction_matrix(E)
    lut = {R[k].tobytes(): k for k in range(E)}
    gens = Q.generators
    vals = [lut[f.values[i].tobytes()] for i in Q.ambient.index(gens)] if gens.shape[0] else []
    chi = character_from_values(Q, vals, E)
    if not np.array_equal(ClassFunction.from_linear(chi, E).values, f.values):
        raise AssertionError("class function is not the recovered linear character")
    return chi


def gram_matrix(chars: Sequence[ClassFunction]) -> np.ndarray:
    """Exact matrix of inner products (raises if any entry is not an integer)."""
    if not chars:
        return np.zeros((0, 0), dtype=np.int64)
    E = max(f.level for f in chars)
    G = chars[0].group
    F = np.stack([f.at_level(E).values for f in chars])        # (K, N, phi)
    Fc = F @ conj_matrix(E)
    K, N, ph = F.shape
    S = np.zeros((K, K, E), dtype=np.int64)
    for i in range(ph):
        for j in range(ph):
            S[:, :, (i + j) % E] += F[:, :, i] @ Fc[:, :, j].T
    red = fold(S, E)
    if np.any(red[:, :, 1:]) or np.any(red[:, :, 0] % G.order):
        raise AssertionError("Gram matrix entry is not an integer")
    return red[:, :, 0] // G.order


# ---------------------------------------------------------------------------
# enumeration

@dataclass
class EnumOptions:
    rng: np.random.Generator | None = None
    check_halasi: bool = True


_CACHE: dict = {}


def clear_cache() -> None:
    _CACHE.clear()


def enumerate_irreps(A: NilpotentAlgebra, U: Subspace | None = None, rng: np.random.Generator | None = None,
                     bound: int = 2 ** 16) -> list[IrrepChain]:
    """All irreducible characters of 1+U (default U = A), each with its chain.

    With ``rng`` the orbit representatives, isotropic scan order and
    extension choices are randomized (results are not cached).
    """
    U = full_space(A.field, A.dim) if U is None else U
    if A.q ** U.rank > bound:
        from .errors import TooLarge
        raise TooLarge(f"|1+U| = {A.q ** U.rank} exceeds the bound {bound}")
    cache = _CACHE if rng is None else {}
    return _enumerate(A, U, rng, cache)


def _enumerate(A, U, rng, cache) -> list[IrrepChain]:
    key = (A, U)
    if key in cache:
        return cache[key]
    ctx = context(A, U)
    if ctx.U2.rank == 0:
        out = [_terminal(ctx, d, rng) for d in sh_data_for(ctx, _trivial_phi(ctx))]
    else:
        out = _clifford(ctx, rng, cache)
    total = sum(c.degree ** 2 for c in out)
    if total != ctx.G.order:
        raise SumOfSquaresMismatch(f"sum of squared degrees {total} != |G| = {ctx.G.order}")
    cache[key] = out
    return out


def _trivial_phi(ctx: SHContext) -> LinearCharacter:
    return LinearCharacter(ctx.QH, (0,) * len(ctx.QH.orders))


def _terminal(ctx: SHContext, d: SHDatum, rng) -> IrrepChain:
    choice = 0 if rng is None else int(rng.integers(1 << 30))
    return IrrepChain(ctx, sh_character(d, rng=rng, choice=choice), terminal=d)


class _HAction:
    """Conjugation action of G on class functions of H, through coset reps of G/H."""

    def __init__(self, ctx: SHContext):
        G, H = ctx.G, ctx.H
        self.ctx = ctx
        labels, n = coset_labels(G, H.generators)
        reps = np.full(n, G.order, dtype=np.int64)
        np.minimum.at(reps, labels, np.arange(G.order))
        self.labels, self.reps = labels, reps
        hel = H.elements
        # perm[c, i] = index of x_c^-1 h_i x_c, so (x.psi)(h) = psi(x^-1 h x)
        xs = G.elements[reps]
        xinv = G.inv(xs)
        self.perm = np.stack([H.index(G.conj(hel, xi)) for xi in xinv])
        gens = G.generators
        ginv = G.inv(gens) if gens.shape[0] else gens
        self.gen_perm = np.stack([H.index(G.conj(hel, gi)) for gi in ginv]) if gens.shape[0] else np.zeros((0, hel.shape[0]), dtype=np.int64)


def _clifford(ctx: SHContext, rng, cache) -> list[IrrepChain]:
    A = ctx.A
    inner_irreps = _enumerate(A, ctx.U2, rng, cache)
    keys = {_key(c.character.at_level(ctx.level)): i for i, c in enumerate(inner_irreps)}
    act = _HAction(ctx)
    # orbits of G on Irr(H) through the generator action
    n = len(inner_irreps)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    vals = [c.character.at_level(ctx.level).values for c in inner_irreps]
    for i in range(n):
        for perm in act.gen_perm:
            j = keys[vals[i][perm].tobytes()]
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    orbits: dict[int, list[int]] = {}
    for i in range(n):
        orbits.setdefault(find(i), []).append(i)
    out: list[IrrepChain] = []
    for root in sorted(orbits):
        members = orbits[root]
        i = members[0] if rng is None else members[int(rng.integers(len(members)))]
        psi = inner_irreps[i]
        out.extend(_over_psi(ctx, act, psi, vals[i], rng, cache))
    return out


def stabilizer_subspace(ctx: SHContext, act: _HAction, psi_vals: np.ndarray) -> Subspace:
    ok_cos = np.array([np.array_equal(psi_vals[p], psi_vals) for p in act.perm])
    stab = ctx.G.elements[ok_cos[act.labels]]
    return _as_algebra_subgroup(ctx.A, stab, "stabilizer of an irreducible character of 1+U^2")


def _over_psi(ctx: SHContext, act: _HAction, psi: IrrepChain, psi_vals, rng, cache) -> list[IrrepChain]:
    A = ctx.A
    V = stabilizer_subspace(ctx, act, psi_vals)
    if V == ctx.U:
        if psi.degree != 1:
            raise InvariantNotLinear("G-invariant irreducible character of 1+U^2 is not linear",
                                     witness={"degree": psi.degree, "U": ctx.U.to_json()})
        phi = linear_from_class_function(ctx.QH, psi.character.at_level(ctx.level))
        return [_terminal(ctx, d, rng) for d in sh_data_for(ctx, phi)]
    sub = _enumerate(A, V, rng, cache)
    psi_f = psi.character.at_level(ctx.level)
    out = []
    for theta in sub:
        m = inner_product(restrict(theta.character, ctx.H), psi_f)
        if m == 0:
            continue
        f = induce(theta.character, ctx.G)
        out.append(IrrepChain(ctx, f, V=V, psi=psi, inner=theta))
    return out


def verify_completeness(chains: Sequence[IrrepChain]) -> tuple[bool, object]:
    """Sum of squares equals |G| and the characters are orthonormal."""
    if not chains:
        return False, "no characters"
    G = chains[0].ctx.G
    total = sum(c.degree ** 2 for c in chains)
    if total != G.order:
        return False, {"sum_of_squares": total, "order": G.order}
    Gm = gram_matrix([c.character for c in chains])
    if not np.array_equal(Gm, np.eye(len(chains), dtype=np.int64)):
        i, j = map(int, np.argwhere(Gm != np.eye(len(chains), dtype=np.int64))[0])
        return False, {"pair": [i, j], "inner_product": int(Gm[i, j])}
    return True, None


# ---------------------------------------------------------------------------
# reduction step and monomialization

@dataclass
class ReductionData:
    G1: Subspace
    psi: IrrepChain
    constituents: list[int]
    multiplicity: int
    single_orbit: bool


def reduction_step(rho: IrrepChain | ClassFunction, A: NilpotentAlgebra | None = None,
                   U: Subspace | None = None) -> ReductionData:
    """Isotypic decomposition of the restriction to 1+U^2, at the character level."""
    if isinstance(rho, IrrepChain):
        f, ctx = rho.character, rho.ctx
    else:
        f = rho
        ctx = context(rho.group.A, rho.group.U)
    if inner_product(f, f) != 1:
        raise NotIrreducible("character is not irreducible")
    inner_irreps = enumerate_irreps(ctx.A, ctx.U2)
    res = restrict(f, ctx.H)
    mults = [inner_product(res, c.character) for c in inner_irreps]
    cons = [i for i, m in enumerate(mults) if m]
    act = _HAction(ctx)
    vals = [inner_irreps[i].character.at_level(ctx.level).values for i in cons]
    first = vals[0]
    orbit = {first[p].tobytes() for p in act.perm}
    single = {v.tobytes() for v in vals} == orbit and len({mults[i] for i in cons}) == 1
    psi = inner_irreps[cons[0]]
    V = stabilizer_subspace(ctx, act, psi.character.at_level(ctx.level).values)
    return ReductionData(V, psi, cons, mults[cons[0]], single)


def monomialize(rho: IrrepChain, verify: bool = True) -> tuple[Subspace, LinearCharacter]:
    """(B, lambda) with rho = Ind_{1+B}^{G} lambda and B a subalgebra."""
    d = rho.innermost.terminal
    B, lam = sh_inducing_pair(d)
    if verify:
        if not is_subalgebra(rho.ctx.A, B):
            raise AssertionError("monomial subgroup is not an algebra subgroup")
        f = induce(ClassFunction.from_linear(lam, rho.ctx.level), rho.ctx.G)
        if f != rho.character:
            raise AssertionError("induced monomial character differs from the irreducible")
    return B, lam


# ---------------------------------------------------------------------------
# base change

def base_change(rho: IrrepChain, n: int, verify: bool = True, rng: np.random.Generator | None = None) -> IrrepChain:
    """The base change of rho to A' = k' (x) A, [k':k] = n."""
    if n == 1:
        return rho
    ctx = rho.ctx
    A = ctx.A
    Ae = extend_scalars(A, n)
    ctx_e = context(Ae, extend_subspace(ctx.U, Ae))
    if rho.terminal is not None:
        d_e = sh_base_change(rho.terminal, n)
        choice = 0 if rng is None else int(rng.integers(1 << 30))
        f = sh_character(d_e, rng=rng, choice=choice, verify=False)
        out = IrrepChain(ctx_e, f, terminal=d_e)
    else:
        V_e = extend_subspace(rho.V, Ae)
        psi_e = base_change(rho.psi, n, verify=verify, rng=rng)
        inner_e = base_change(rho.inner, n, verify=verify, rng=rng)
        f = induce(inner_e.character, ctx_e.G)
        out = IrrepChain(ctx_e, f, V=V_e, psi=psi_e, inner=inner_e)
        if verify:
            _check_reduction_compatibility(ctx_e, out)
    if verify:
        if inner_product(out.character, out.character) != 1:
            raise NotIrreducibleAfterBaseChange("base-changed character is reducible",
                                                witness=rho.summary())
        q = A.field.q
        if not is_galois_invariant(out.character, q):
            raise NotGaloisInvariant("base-changed character is not Galois invariant",
                                     witness=rho.summary())
    return out


def _check_reduction_compatibility(ctx_e: SHContext, rho_e: IrrepChain) -> None:
    psi_f = rho_e.psi.character.at_level(ctx_e.level)
    res = restrict(rho_e.character, ctx_e.H)
    if inner_product(res, psi_f) == 0:
        raise ReductionMismatch("base-changed psi is not a constituent of the restriction",
                                witness={"degree": rho_e.degree})
    act = _HAction(ctx_e)
    V = stabilizer_subspace(ctx_e, act, psi_f.values)
    if V != rho_e.V:
        raise ReductionMismatch("stabilizer of the base-changed psi is not the extended stabilizer",
                                witness={"stabilizer": V.to_json(), "expected": rho_e.V.to_json()})
    inner_res = restrict(rho_e.inner.character, ctx_e.H)
    m = rho_e.inner.degree // rho_e.psi.degree
    if inner_res != psi_f.scale(m):
        raise ReductionMismatch("restriction of the inner character is not psi-isotypic",
                                witness={"degree": rho_e.degree})


def galois_permutation(G: AlgebraGroup, q: int) -> np.ndarray:
    A = G.A
    if A.defined_over is not None:
        from .nilalg import _check_frobenius
        _check_frobenius(A, q)
    return frobenius_permutation(G, q)


def galois_act(f: ClassFunction, q: int) -> ClassFunction:
    """(Fr.f)(g) = f(Fr^-1 g)."""
    perm = galois_permutation(f.group, q)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.size)
    return f.permuted(inv)


def galois_orbit(f: ClassFunction, q: int) -> list[ClassFunction]:
    orbit = [f]
    cur = galois_act(f, q)
    while cur != f:
        orbit.append(cur)
        cur = galois_act(cur, q)
    return orbit


def is_galois_invariant(f: ClassFunction, q: int) -> bool:
    return galois_act(f, q) == f


def iso_test(r1, r2) -> bool:
    f1 = r1.character if isinstance(r1, IrrepChain) else r1
    f2 = r2.character if isinstance(r2, IrrepChain) else r2
    return f1 == f2
