"""Verification harness: base change, norm and surjectivity experiments.

Every check returns :class:`CheckResult` records.  Theorem violations are
caught and turned into failing records; internal inconsistencies propagate.
"""
from __future__ import annotations

import time
from typing import Callable, Sequence

import numpy as np

from .algrp import AlgebraGroup, _commutator_codes, _generating_set, conjugacy_classes, coset_labels
from .cyclo import inner_product, restrict
from .errors import TheoremViolation, TooLarge
from .heis import balance_check, sh_base_change, sh_character, sh_galois_invariant
from .irred import (
    IrrepChain,
    base_change,
    enumerate_irreps,
    galois_act,
    gram_matrix,
    is_galois_invariant,
    is_power_of,
    monomialize,
)
from .k1norm import CheckResult, frobenius_permutation, verify_norm_properties
from .nilalg import (
    NilpotentAlgebra,
    Subspace,
    extend_scalars,
    extend_subspace,
    full_space,
    power_ideal,
    subspaces_between,
)

GROUP_LIMIT = 2 ** 20       # group enumeration
IRREP_LIMIT = 8192          # enumeration of irreducibles of the extended group
BALANCE_LIMIT = 2 ** 10     # exhaustive (a, b, lambda) sweep

ALL_CHECKS = ("norms", "injectivity", "transitivity", "equivariance", "orders", "surjectivity",
              "conditional", "restriction", "isaacs", "gutkin", "halasi", "commutator-balance",
              "sh-base-change", "restriction-compatibility", "invariants")


def _skip(check: str, params: dict) -> CheckResult:
    return CheckResult(check, True, "skipped: size", params)


def _violation(check: str, e: TheoremViolation, params: dict) -> CheckResult:
    return CheckResult(check, False, {"violation": e.check, "message": str(e), "data": e.witness}, params)


def _ext_order(A: NilpotentAlgebra, n: int) -> int:
    return A.q ** (n * A.dim)


def _index_of(chains: Sequence[IrrepChain]) -> dict:
    return {c.character.values.tobytes(): i for i, c in enumerate(chains)}


def _find(chains: Sequence[IrrepChain], f) -> int:
    for i, c in enumerate(chains):
        if c.character == f:
            return i
    return -1


def middle_subspaces(A: NilpotentAlgebra) -> list[Subspace]:
    """All U with A^2 <= U <= A; each 1+U is an algebra subgroup (U^2 <= A^2 <= U)."""
    return subspaces_between(power_ideal(A, 2), full_space(A.field, A.dim))


# ---------------------------------------------------------------------------
# orders equality |G^ab| = |(G'^ab)^Gal|

def ab_order(A: NilpotentAlgebra, U: Subspace | None = None, bound: int = GROUP_LIMIT) -> int:
    T = AlgebraGroup(A, U, bound)
    return T.order // _commutator_codes(T, T).size


def fixed_ab_order(A: NilpotentAlgebra, n: int, U: Subspace | None = None, bound: int = GROUP_LIMIT) -> int:
    """|((1+U')^ab)^Gal| for U' = k' (x) U, counting Frobenius-fixed cosets of the
    commutator subgroup (Frobenius permutes the cosets)."""
    Ae = extend_scalars(A, n)
    Ue = None if U is None else extend_subspace(U, Ae)
    T = AlgebraGroup(Ae, Ue, bound)
    D = _commutator_codes(T, T)
    labels, m = coset_labels(T, _generating_set(T, D))
    reps = np.full(m, T.order, dtype=np.int64)
    np.minimum.at(reps, labels, np.arange(T.order))
    perm = frobenius_permutation(T, A.field.q)
    return int(np.count_nonzero(labels[perm[reps]] == np.arange(m)))


def orders_records(A: NilpotentAlgebra, n: int, bound: int = GROUP_LIMIT) -> list[CheckResult]:
    out = []
    full = full_space(A.field, A.dim)
    spaces = [full] + [U for U in middle_subspaces(A) if U != full]
    for U in spaces:
        params = {"ext": n, "subgroup": "A" if U == full else U.to_json()}
        if A.q ** (n * U.rank) > bound:
            out.append(_skip("orders", params))
            continue
        lhs = ab_order(A, U, bound)
        rhs = fixed_ab_order(A, n, U, bound)
        ok = lhs == rhs
        params.update(ab_order=lhs, fixed_order=rhs)
        w = None if ok else {"subgroup": U.to_json(), "ab_order": lhs, "fixed_order": rhs, "ext": n}
        out.append(CheckResult("orders", ok, w, params))
    return out


# ---------------------------------------------------------------------------
# base change checks

def base_change_all(A: NilpotentAlgebra, n: int, chains=None, rng=None) -> tuple[list[IrrepChain], list[IrrepChain]]:
    chains = enumerate_irreps(A) if chains is None else chains
    return chains, [base_change(c, n, rng=rng) for c in chains]


def check_injectivity(A, n) -> list[CheckResult]:
    params = {"ext": n}
    chains, imgs = base_change_all(A, n)
    seen: dict[bytes, int] = {}
    for i, c in enumerate(imgs):
        k = c.character.values.tobytes()
        if k in seen:
            return [CheckResult("injectivity", False, {"irreps": [seen[k], i]}, params)]
        seen[k] = i
    bad = [i for i, (c, d) in enumerate(zip(chains, imgs)) if (c.fdim, c.sh) != (d.fdim, d.sh)]
    out = [CheckResult("injectivity", True, None, dict(params, irreps=len(imgs)))]
    out.append(CheckResult("fdim-sh", not bad,
                           None if not bad else {"irrep": bad[0], "before": chains[bad[0]].summary(),
                                                 "after": imgs[bad[0]].summary()}, params))
    return out


def check_transitivity(A, n1: int, n2: int) -> CheckResult:
    params = {"ext": [n1, n2]}
    chains = enumerate_irreps(A)
    for i, c in enumerate(chains):
        direct = base_change(c, n2)
        step = base_change(base_change(c, n1), n2 // n1)
        if direct.character != step.character:
            return CheckResult("transitivity", False, {"irrep": i}, params)
    return CheckResult("transitivity", True, None, dict(params, irreps=len(chains)))


def check_equivariance(A, n) -> CheckResult:
    q0 = A.defined_over
    params = {"ext": n, "q": q0}
    if q0 is None or q0 == A.field.q:
        return CheckResult("equivariance", True, None, dict(params, note="no proper field of definition"))
    chains = enumerate_irreps(A)
    imgs = [base_change(c, n) for c in chains]
    for i, c in enumerate(chains):
        j = _find(chains, galois_act(c.character, q0))
        if j < 0:
            return CheckResult("equivariance", False, {"irrep": i, "reason": "Fr image not irreducible"}, params)
        if imgs[j].character != galois_act(imgs[i].character, q0):
            return CheckResult("equivariance", False, {"irrep": i, "fr_irrep": j}, params)
    return CheckResult("equivariance", True, None, params)


def _invariant_irreps(A, n) -> tuple[NilpotentAlgebra, list[IrrepChain], list[int]]:
    Ae = extend_scalars(A, n)
    ext = enumerate_irreps(Ae)
    q = A.field.q
    inv = [i for i, c in enumerate(ext) if is_galois_invariant(c.character, q)]
    return Ae, ext, inv


def fixed_class_count(A: NilpotentAlgebra, n: int, bound: int = GROUP_LIMIT) -> int:
    """Number of conjugacy classes of G' = 1+A' fixed by Fr_|k|.  Frobenius is
    an automorphism of G', so by Brauer's permutation lemma this is also the
    number of Gal(k'/k)-invariant irreducibles of G'."""
    cc = conjugacy_classes(extend_scalars(A, n), bound=bound)
    perm = frobenius_permutation(cc.group, A.field.q)
    return int(np.count_nonzero(cc.labels[perm[cc.reps]] == np.arange(len(cc))))


def check_surjectivity(A, n, method: str = "count") -> CheckResult:
    """Every Gal-invariant irreducible of G' is a base-change image.

    ``count``: images are distinct invariant irreducibles, so equality with the
    number of invariant irreducibles (counted on classes) proves surjectivity;
    on a mismatch the irreducibles of G' are enumerated to name a missing one.
    ``enumerate``: always compare against the enumerated invariant irreducibles.
    """
    if method not in ("count", "enumerate"):
        raise ValueError(f"unknown method {method!r}")
    params = {"ext": n}
    _, imgs = base_change_all(A, n)
    if method == "count":
        q = A.field.q
        distinct = len({c.character.values.tobytes() for c in imgs}) == len(imgs)
        invariant = all(is_galois_invariant(c.character, q) for c in imgs)
        fixed = fixed_class_count(A, n)
        if distinct and invariant and fixed == len(imgs):
            return CheckResult("surjectivity", True, None,
                               dict(params, invariant=fixed, images=len(imgs), method="count"))
    _, ext, inv = _invariant_irreps(A, n)
    idx = _index_of(ext)
    hit = {idx.get(c.character.at_level(ext[0].character.level).values.tobytes(), -1) for c in imgs}
    missing = [i for i in inv if i not in hit]
    params.update(invariant=len(inv), images=len(imgs), method="enumerate")
    if missing or -1 in hit:
        w = {"missing_irrep": missing[0] if missing else None,
             "degree": ext[missing[0]].degree if missing else None, "ext": n}
        return CheckResult("surjectivity", False, w, params)
    return CheckResult("surjectivity", True, None, params)


def check_restriction(A, n) -> list[CheckResult]:
    """Every Gal-invariant irreducible of G' restricts to each H' (1+A^2 <= H)
    with a Gal-invariant irreducible summand."""
    Ae, ext, inv = _invariant_irreps(A, n)
    q = A.field.q
    out = []
    for U in middle_subspaces(A):
        Ue = extend_subspace(U, Ae)
        params = {"ext": n, "subgroup": U.to_json()}
        sub = enumerate_irreps(Ae, Ue)
        sub_inv = np.array([is_galois_invariant(c.character, q) for c in sub])
        H = sub[0].ctx.G
        bad = None
        for i in inv:
            res = restrict(ext[i].character, H)
            m = np.array([inner_product(res, c.character) for c in sub])
            if not np.any((m > 0) & sub_inv):
                bad = i
                break
        out.append(CheckResult("restriction", bad is None, None if bad is None else {"irrep": bad, "subgroup": U.to_json()}, params))
    return out


def check_sh_base_change(A, n) -> list[CheckResult]:
    """Base change of strongly Heisenberg irreducibles: injective, fdim
    preserving, Galois invariant, compatible with restriction to every
    1+U containing 1+A^2; the radical check runs inside the base change."""
    params = {"ext": n}
    q = A.field.q
    sh = [c for c in enumerate_irreps(A) if c.sh == 0]
    data = [c.terminal for c in sh]
    img = [sh_base_change(d, n) for d in data]
    img_chars = [sh_character(d, verify=False) for d in img]
    out = []
    keys = [f.values.tobytes() for f in img_chars]
    dup = len(set(keys)) != len(keys)
    out.append(CheckResult("sh-injectivity", not dup, None if not dup else {"count": len(keys), "distinct": len(set(keys))}, params))
    bad = [i for i, (d, e) in enumerate(zip(data, img)) if d.fdim != e.fdim]
    out.append(CheckResult("sh-fdim", not bad, None if not bad else {"irrep": bad[0]}, params))
    bad = [i for i, e in enumerate(img) if not sh_galois_invariant(e, q)]
    out.append(CheckResult("sh-galois", not bad, None if not bad else {"irrep": bad[0]}, params))
    out.append(CheckResult("sh-radical", True, None, params))
    # restriction compatibility
    Ae = img[0].ctx.A if img else extend_scalars(A, n)
    witness = None
    for U in middle_subspaces(A):
        sub = enumerate_irreps(A, U)
        H = sub[0].ctx.G
        He = None
        for i, c in enumerate(sh):
            res = restrict(c.character, H)
            for j, psi in enumerate(sub):
                if inner_product(res, psi.character) == 0:
                    continue
                if psi.sh != 0:
                    witness = {"irrep": i, "subgroup": U.to_json(), "summand": j, "reason": "summand not SH"}
                    break
                psi_e = sh_character(sh_base_change(psi.terminal, n), verify=False)
                He = psi_e.group
                if inner_product(restrict(img_chars[i], He), psi_e) == 0:
                    witness = {"irrep": i, "subgroup": U.to_json(), "summand": j}
                    break
            if witness:
                break
        if witness:
            break
    out.append(CheckResult("sh-restriction", witness is None, witness, params))
    return out


def check_restriction_compatibility(A, n) -> CheckResult:
    """psi a summand of rho|K implies T(psi) a summand of T(rho)|K'."""
    params = {"ext": n}
    chains, imgs = base_change_all(A, n)
    for U in middle_subspaces(A):
        sub = enumerate_irreps(A, U)
        H = sub[0].ctx.G
        sub_imgs = None
        for i, c in enumerate(chains):
            res = restrict(c.character, H)
            for j, psi in enumerate(sub):
                if inner_product(res, psi.character) == 0:
                    continue
                if sub_imgs is None:
                    sub_imgs = [base_change(s, n) for s in sub]
                pe = sub_imgs[j].character
                if inner_product(restrict(imgs[i].character, pe.group), pe) == 0:
                    return CheckResult("restriction-compatibility", False,
                                       {"irrep": i, "subgroup": U.to_json(), "summand": j}, params)
    return CheckResult("restriction-compatibility", True, None, params)


# ---------------------------------------------------------------------------
# structural checks on G itself

def check_isaacs(A) -> CheckResult:
    chains = enumerate_irreps(A)
    bad = [c.degree for c in chains if not is_power_of(c.degree, A.q)]
    return CheckResult("isaacs", not bad, None if not bad else {"degree": bad[0], "q": A.q},
                       {"irreps": len(chains)})


def check_gutkin(A) -> CheckResult:
    chains = enumerate_irreps(A)
    for c in chains:
        monomialize(c)
    return CheckResult("gutkin", True, None, {"irreps": len(chains)})


def check_halasi(A) -> CheckResult:
    chains = enumerate_irreps(A)
    return CheckResult("halasi", True, None, {"irreps": len(chains)})


def check_completeness(A) -> CheckResult:
    chains = enumerate_irreps(A)
    total = sum(c.degree ** 2 for c in chains)
    Gm = gram_matrix([c.character for c in chains])
    eye = np.eye(len(chains), dtype=np.int64)
    ok = total == A.q ** A.dim and np.array_equal(Gm, eye)
    w = None
    if not ok:
        w = {"sum_of_squares": total}
        if not np.array_equal(Gm, eye):
            i, j = map(int, np.argwhere(Gm != eye)[0])
            w["pair"] = [i, j]
    return CheckResult("completeness", ok, w, {"irreps": len(chains)})


# ---------------------------------------------------------------------------
# driver

def _timed(fn: Callable, *args) -> tuple[list[CheckResult], int]:
    t0 = time.perf_counter()
    r = fn(*args)
    ms = int(round((time.perf_counter() - t0) * 1000))
    return (r if isinstance(r, list) else [r]), ms


def run_checks(A: NilpotentAlgebra, exts: Sequence[int], checks: Sequence[str]) -> list[tuple[CheckResult, int]]:
    """Run the named checks; returns (record, runtime_ms) pairs in a fixed order."""
    exts = list(exts)
    order = A.q ** A.dim
    out: list[tuple[CheckResult, int]] = []
    memo: dict = {}         # results shared between checks of one call

    def orders_for(n: int) -> list[CheckResult]:
        if ("orders", n) not in memo:
            memo["orders", n] = orders_records(A, n)
        return memo["orders", n]

    def surjectivity_for(n: int) -> CheckResult:
        if ("surjectivity", n) not in memo:
            memo["surjectivity", n] = check_surjectivity(A, n)
        return memo["surjectivity", n]

    def emit(name: str, fn: Callable, *args, params: dict | None = None):
        try:
            recs, ms = _timed(fn, *args)
        except TheoremViolation as e:
            out.append((_violation(name, e, params or {}), 0))
            return
        except TooLarge:
            out.append((_skip(name, params or {}), 0))
            return
        out.extend((r, ms) for r in recs)

    def small(n: int) -> bool:
        return order <= IRREP_LIMIT and _ext_order(A, n) <= IRREP_LIMIT

    for name in checks:
        if name not in ALL_CHECKS:
            raise ValueError(f"unknown check {name!r}")
        if name in ("isaacs", "gutkin", "halasi", "invariants"):
            if order > IRREP_LIMIT:
                out.append((_skip(name, {}), 0))
                continue
            if name == "invariants":
                emit("completeness", check_completeness, A)
            else:
                emit(name, {"isaacs": check_isaacs, "gutkin": check_gutkin, "halasi": check_halasi}[name], A)
            continue
        if name == "commutator-balance":
            for n in [1] + [e for e in exts if e != 1]:
                p = {"ext": n}
                if _ext_order(A, n) > BALANCE_LIMIT:
                    out.append((_skip(name, p), 0))
                    continue

                def bal(n=n, p=p):
                    ok, w = balance_check(extend_scalars(A, n) if n > 1 else A)
                    return CheckResult(name, ok, w, p)
                emit(name, bal, params=p)
            continue
        if name == "norms":
            for n in exts:
                if _ext_order(A, n) > GROUP_LIMIT:
                    out.append((_skip("norms", {"ext": n}), 0))
                    continue
                emit(name, lambda n=n: verify_norm_properties(A, [n]), params={"ext": n})
            tower = sorted(set(exts))
            if len(tower) > 1 and _ext_order(A, tower[-1]) <= GROUP_LIMIT:
                emit(name, lambda: [r for r in verify_norm_properties(A, tower, functoriality=False)
                                    if r.check == "norm-transitivity"], params={"ext": tower})
            continue
        if name == "orders":
            for n in exts:
                emit(name, orders_for, n, params={"ext": n})
            continue
        if name == "transitivity":
            tower = sorted(set(exts))
            pairs = [(a, b) for a, b in zip(tower, tower[1:]) if b % a == 0]
            if not pairs:
                out.append((CheckResult(name, True, "skipped: needs a tower of two degrees", {"ext": tower}), 0))
            for a, b in pairs:
                p = {"ext": [a, b]}
                if small(b):
                    emit(name, check_transitivity, A, a, b, params=p)
                else:
                    out.append((_skip(name, p), 0))
            continue
        per_ext = {
            "injectivity": check_injectivity,
            "equivariance": check_equivariance,
            "surjectivity": check_surjectivity,
            "restriction": None,
            "conditional": None,
            "sh-base-change": check_sh_base_change,
            "restriction-compatibility": check_restriction_compatibility,
        }
        for n in exts:
            p = {"ext": n}
            if not small(n):
                out.append((_skip(name, p), 0))
                continue
            if name == "conditional":
                emit(name, lambda n=n: check_conditional(A, n, orders_for(n), surjectivity_for(n)), params=p)
            elif name == "restriction":
                emit(name, lambda n=n: check_restriction_if_orders(A, n, orders_for(n)), params=p)
            elif name == "surjectivity":
                emit(name, surjectivity_for, n, params=p)
            else:
                emit(name, per_ext[name], A, n, params=p)
    return out


def _orders_hold(A, n, orders: list[CheckResult] | None = None) -> bool:
    return all(r.passed for r in (orders if orders is not None else orders_records(A, n)))


def check_conditional(A, n, orders: list[CheckResult] | None = None,
                      surjectivity: CheckResult | None = None) -> CheckResult:
    """If the orders equality holds for every 1+U >= 1+A^2, full surjectivity must hold."""
    hyp = _orders_hold(A, n, orders)
    s = surjectivity if surjectivity is not None else check_surjectivity(A, n)
    ok = (not hyp) or s.passed
    return CheckResult("conditional", ok, None if ok else s.witness,
                       {"ext": n, "orders_hold": hyp, "surjective": s.passed})


def check_restriction_if_orders(A, n, orders: list[CheckResult] | None = None) -> list[CheckResult]:
    if not _orders_hold(A, n, orders):
        return [CheckResult("restriction", True, "skipped: hypothesis fails", {"ext": n})]
    return check_restriction(A, n)
