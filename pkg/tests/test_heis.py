from __future__ import annotations

import numpy as np
import pytest

from algroups.algrp import LinearCharacter
from algroups.cyclo import ClassFunction, inner_product, induce
from algroups.errors import NotInvariant
from algroups.gf import make_field
from algroups.heis import (
    balance_check,
    commutator_pairing,
    context,
    invariant_central_characters,
    is_invariant,
    maximal_isotropic,
    radical_g_phi,
    sh_base_change,
    sh_character,
    sh_classify,
    sh_galois_invariant,
    sh_inducing_pair,
)
from algroups.nilalg import builtin_algebra, extend_scalars, full_space, power_ideal, span


def _nontrivial(A):
    return [c for c in invariant_central_characters(A) if not c.is_trivial()]


def test_invariant_characters(u3, t3, u4):
    assert len(invariant_central_characters(u3)) == 2
    assert len(invariant_central_characters(t3)) == 2
    inv = invariant_central_characters(u4)
    assert len(inv) < 8
    ctx = context(u4)
    assert all(is_invariant(ctx, c, full=True) for c in inv)


def test_pairing_u3(u3):
    (phi,) = _nontrivial(u3)
    P = commutator_pairing(u3, phi)
    assert P.entries.tolist() == [[0, 1], [1, 0]] and P.is_alternating()
    triv = [c for c in invariant_central_characters(u3) if c.is_trivial()][0]
    assert not np.any(commutator_pairing(u3, triv).entries)


def test_pairing_rejects_noninvariant(u4):
    ctx = context(u4)
    from algroups.algrp import character_group
    bad = [c for c in character_group(ctx.QH) if not is_invariant(ctx, c)]
    assert bad
    with pytest.raises(NotInvariant):
        commutator_pairing(u4, bad[0])


def test_radical_and_isotropic(u3, F2):
    (phi,) = _nontrivial(u3)
    assert radical_g_phi(u3, phi) == span(F2, 3, [[0, 0, 1]])
    assert maximal_isotropic(u3, phi) == span(F2, 3, [[1, 0, 0], [0, 0, 1]])
    triv = [c for c in invariant_central_characters(u3) if c.is_trivial()][0]
    assert radical_g_phi(u3, triv) == full_space(F2, 3)
    assert maximal_isotropic(u3, triv) == full_space(F2, 3)


def test_radical_direct_sum(F2):
    u3 = builtin_algebra("upper_triangular", F2, 3)
    x2 = builtin_algebra("truncated_poly", F2, 2)
    A = builtin_algebra("direct_sum", F2, u3, x2)
    # phi nontrivial on 1+b3; A^2 = span(b3)
    (phi,) = _nontrivial(A)
    assert radical_g_phi(A, phi) == span(F2, 4, [[0, 0, 1, 0], [0, 0, 0, 1]])


def test_u3_over_f4(u3):
    U = extend_scalars(u3, 2)
    phis = _nontrivial(U)
    assert len(phis) == 3
    for phi in phis:
        P = commutator_pairing(U, phi)
        assert P.dim == 4 and P.is_alternating()
        from algroups.linalg import nullspace_mod
        assert nullspace_mod(P.entries, 2).shape[0] == 0
        Lt = maximal_isotropic(U, phi)
        assert Lt.rank == 2
    ok, w = balance_check(U)
    assert ok, w


def test_sh_classify_u3(u3):
    data = sh_classify(u3)
    assert len(data) == 5
    assert sorted(d.degree for d in data) == [1, 1, 1, 1, 2]
    big = [d for d in data if d.degree == 2][0]
    f = sh_character(big)
    vals = sorted(int(v[0]) for _, v in f.class_view())
    assert vals == [-2, 0, 0, 0, 2]
    assert big.fdim == 1


def test_sh_classify_x2(x2):
    assert [d.degree for d in sh_classify(x2)] == [1, 1]


def test_inducing_pair(u3, F2):
    big = [d for d in sh_classify(u3) if d.degree == 2][0]
    Lt, psi = sh_inducing_pair(big)
    assert Lt == span(F2, 3, [[1, 0, 0], [0, 0, 1]])
    assert psi.exponent_of([[0, 0, 1]])[0] != 0 and psi.exponent_of([[1, 0, 0]])[0] == 0


@pytest.mark.parametrize("name,n,q,ext", [("upper_triangular", 3, 2, 2), ("upper_triangular", 4, 3, 1),
                                          ("upper_triangular", 3, 3, 2), ("truncated_poly", 4, 2, 2),
                                          ("upper_triangular", 3, 2, 3)])
def test_balance(name, n, q, ext):
    A = builtin_algebra(name, make_field(q), n)
    ok, w = balance_check(extend_scalars(A, ext) if ext > 1 else A)
    assert ok, w


def test_sh_base_change_u3(u3, F2):
    big = [d for d in sh_classify(u3) if d.degree == 2][0]
    e = sh_base_change(big, 2)
    assert e.degree == 4 and e.fdim == 1
    assert e.g_phi == power_ideal(e.A, 2)
    assert sh_galois_invariant(e, 2)
    assert sh_base_change(big, 1) is big


def test_sh_base_change_values_trace(u3):
    """Values of the base-changed central character equal phi o Tr on 1+A'^2."""
    from tests.oracles import trace_oracle
    big = [d for d in sh_classify(u3) if d.degree == 2][0]
    e = sh_base_change(big, 2)
    F4 = make_field(2, 2)
    E = 4
    for g in range(4):
        lhs = e.phi.exponent_of([[0, 0, g]])[0] * (E // e.phi.level)
        rhs = big.phi.exponent_of([[0, 0, trace_oracle(F4, g, 2)]])[0] * (E // big.phi.level)
        assert lhs % E == rhs % E


def test_linear_datum_base_change(u3):
    data = [d for d in sh_classify(u3) if d.degree == 1]
    imgs = [sh_base_change(d, 2) for d in data]
    chars = [sh_character(d) for d in imgs]
    assert all(f.degree == 1 for f in chars)
    assert len({f.values.tobytes() for f in chars}) == 4
