from __future__ import annotations

from collections import Counter

import numpy as np
import pytest

from algroups.algrp import AlgebraGroup
from algroups.cyclo import ClassFunction, induce, inner_product
from algroups.gf import make_field
from algroups.irred import (
    base_change,
    enumerate_irreps,
    galois_orbit,
    gram_matrix,
    iso_test,
    log_q,
    monomialize,
    reduction_step,
    verify_completeness,
)
from algroups.nilalg import builtin_algebra, full_space, is_subalgebra, span
from tests.oracles import all_ut, brute_class_sizes, complex_values, trace_oracle


def test_log_q():
    assert log_q(1, 2) == 0 and log_q(8, 2) == 3 and log_q(81, 9) == 2
    with pytest.raises(ValueError):
        log_q(6, 2)


def test_x2(x2):
    chains = enumerate_irreps(x2)
    assert sorted(c.degree for c in chains) == [1, 1]


def test_u3(u3):
    chains = enumerate_irreps(u3)
    assert sorted(c.degree for c in chains) == [1, 1, 1, 1, 2]
    assert {(c.degree, c.fdim, c.sh) for c in chains} == {(1, 0, 0), (2, 1, 0)}
    assert verify_completeness(chains) == (True, None)


@pytest.mark.parametrize("n,p,m", [(3, 2, 1), (3, 3, 1), (4, 2, 1), (3, 2, 2)])
def test_count_equals_classes(n, p, m):
    """Independent oracle: number of irreducibles = number of conjugacy classes
    (classes counted with explicit matrices)."""
    F = make_field(p, m)
    A = builtin_algebra("upper_triangular", F, n)
    chains = enumerate_irreps(A)
    assert len(chains) == len(brute_class_sizes(F, all_ut(F, n)))
    # column orthogonality in complex numbers
    X = np.stack([complex_values(c.character) for c in chains])
    G = X.conj().T @ X
    assert abs(G[0, 0] - X.shape[1]) < 1e-6


def test_u4(u4):
    chains = enumerate_irreps(u4)
    degs = Counter(c.degree for c in chains)
    assert sum(d * d * k for d, k in degs.items()) == 64
    assert set(degs) <= {1, 2, 4, 8}
    # [G : Z(G)] = 64 / 2
    assert all(c.degree ** 2 <= 32 for c in chains)
    assert any(c.sh >= 1 for c in chains)
    ok, w = verify_completeness(chains)
    assert ok, w


def test_gram_identity(u4):
    chains = enumerate_irreps(u4)
    assert np.array_equal(gram_matrix([c.character for c in chains]), np.eye(len(chains), dtype=np.int64))


def test_reduction_step_sh(u3):
    big = [c for c in enumerate_irreps(u3) if c.degree == 2][0]
    r = reduction_step(big)
    assert r.single_orbit and len(r.constituents) == 1 and r.multiplicity == 2
    assert r.G1 == full_space(u3.field, 3)
    assert r.psi.degree == 1 and not np.all(r.psi.character.values[:, 0] == 1)


def test_reduction_step_linear(u3):
    lin = [c for c in enumerate_irreps(u3) if c.degree == 1]
    for c in lin:
        r = reduction_step(c)
        assert r.single_orbit and len(r.constituents) == 1 and r.multiplicity == 1
        assert r.G1 == full_space(u3.field, 3)


def test_reduction_step_u4_moving(u4):
    """Irreducibles over psi with psi(1+e14) = -1 and psi nontrivial on 1+e13."""
    e13, e14 = np.array([[0, 0, 0, 1, 0, 0]]), np.array([[0, 0, 0, 0, 0, 1]])
    inner = None
    found = 0
    for c in enumerate_irreps(u4):
        r = reduction_step(c)
        if inner is None:
            inner = enumerate_irreps(u4, c.ctx.U2)
        H = r.psi.character.group
        i13, i14 = H.index(e13)[0], H.index(e14)[0]
        for k in r.constituents:
            v = inner[k].character.values
            if v[i14, 0] == -1 and v[i13, 0] == -1:
                assert len(r.constituents) >= 2 and r.single_orbit
                assert r.G1.rank < 6 and c.sh >= 1
                found += 1
                break
    assert found


def test_monomialize_u3(u3, F2):
    big = [c for c in enumerate_irreps(u3) if c.degree == 2][0]
    B, lam = monomialize(big)
    assert B == span(F2, 3, [[1, 0, 0], [0, 0, 1]])
    assert lam.exponent_of([[0, 0, 1]])[0] != 0 and lam.exponent_of([[1, 0, 0]])[0] == 0


def test_monomialize_linear(u3, t3):
    for A in (u3, t3):
        for c in enumerate_irreps(A):
            if c.degree == 1:
                B, lam = monomialize(c)
                assert B == full_space(A.field, A.dim)
                assert ClassFunction.from_linear(lam, c.character.level) == c.character


def test_monomialize_u4(u4):
    for c in enumerate_irreps(u4):
        B, lam = monomialize(c)
        assert is_subalgebra(u4, B)
        assert 2 ** (6 - B.rank) == c.degree
        if c.degree == 4:
            assert B.rank == 4
        assert induce(ClassFunction.from_linear(lam, c.character.level), c.ctx.G) == c.character


def test_base_change_examples(u3, x2):
    chains = enumerate_irreps(u3)
    for c in chains:
        assert base_change(c, 1) is c
    big = [c for c in chains if c.degree == 2][0]
    e = base_change(big, 2)
    assert (e.degree, e.fdim, e.sh) == (4, 1, 0)
    # x2: nontrivial character goes to alpha -> (-1)^Tr(alpha)
    nt = [c for c in enumerate_irreps(x2) if c.character.values[1, 0] == -1][0]
    e = base_change(nt, 2)
    F4 = make_field(2, 2)
    G = e.character.group
    for i, (a,) in enumerate(G.elements.tolist()):
        assert e.character.values[i, 0] == (-1) ** trace_oracle(F4, a, 2)


def test_galois_orbits_x2_f4():
    F4 = make_field(2, 2)
    X = builtin_algebra("truncated_poly", F4, 2, defined_over=2)
    chains = enumerate_irreps(X)
    G = chains[0].character.group
    sizes = {}
    for c in chains:
        v = c.character.values[:, 0]
        key = tuple(int(v[G.index(np.array([[a]]))[0]]) for a in range(4))
        sizes[key] = len(galois_orbit(c.character, 2))
    # trivial and the trace character are fixed; the other two swap
    assert sizes[(1, 1, 1, 1)] == 1
    assert sizes[(1, 1, -1, -1)] == 1          # (-1)^Tr: trivial on 1, nontrivial on t
    assert sizes[(1, -1, 1, -1)] == 2          # trivial on the line F_2 t
    assert sizes[(1, -1, -1, 1)] == 2


def test_galois_orbit_base_field(u3):
    for c in enumerate_irreps(u3):
        assert len(galois_orbit(c.character, 2)) == 1


def test_iso_test(u3):
    chains = enumerate_irreps(u3)
    assert iso_test(chains[0], chains[0])
    assert not iso_test(chains[0], chains[1])


@pytest.mark.parametrize("n,p", [(3, 2), (4, 2), (3, 3)])
def test_choice_independence(n, p):
    A = builtin_algebra("upper_triangular", make_field(p), n)
    base = {c.character.values.tobytes() for c in enumerate_irreps(A)}
    imgs = {base_change(c, 2).character.values.tobytes() for c in enumerate_irreps(A)}
    for s in range(3):
        rng = np.random.default_rng(s)
        chains = enumerate_irreps(A, rng=rng)
        assert {c.character.values.tobytes() for c in chains} == base
        assert {base_change(c, 2, rng=rng).character.values.tobytes() for c in chains} == imgs


def test_transitivity_tower(x2):
    for c in enumerate_irreps(x2):
        assert base_change(c, 4).character == base_change(base_change(c, 2), 2).character
