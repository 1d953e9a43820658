from __future__ import annotations

import numpy as np
import pytest

from algroups.algrp import (
    AlgebraGroup,
    LinearCharacter,
    abelianize,
    character_group,
    commutator_subgroup,
    conjugacy_classes,
    enumerate_group,
    group_arith,
    stabilizer_of_character,
)
from algroups.errors import TooLarge
from algroups.gf import make_field
from algroups.nilalg import builtin_algebra, extend_scalars, full_space, power_ideal
from tests.oracles import all_ut, brute_class_sizes, brute_derived, ut_matrix


def test_group_arith_examples(u3):
    assert group_arith("mul", u3, [1, 0, 0], [0, 1, 0]).tolist() == [1, 1, 1]
    assert group_arith("commutator", u3, [1, 0, 0], [0, 1, 0]).tolist() == [0, 0, 1]
    assert group_arith("inv", u3, [1, 1, 0]).tolist() == [1, 1, 1]
    g = np.array([1, 1, 0])
    assert group_arith("mul", u3, g, group_arith("inv", u3, g)).tolist() == [0, 0, 0]


def test_enumerate_examples(x2, u3, F4):
    assert enumerate_group(x2).tolist() == [[0], [1]]
    assert enumerate_group(u3).shape == (8, 3)
    assert enumerate_group(builtin_algebra("upper_triangular", F4, 3)).shape == (64, 3)
    with pytest.raises(TooLarge):
        AlgebraGroup(u3, bound=4)


def test_commutator_subgroup_examples(u3, t3):
    assert commutator_subgroup(u3).tolist() == [[0, 0, 0], [0, 0, 1]]
    assert commutator_subgroup(t3).tolist() == [[0, 0]]
    assert commutator_subgroup(u3, None, power_ideal(u3, 2)).tolist() == [[0, 0, 0]]


@pytest.mark.parametrize("n,p,m", [(3, 2, 1), (3, 3, 1), (4, 2, 1), (3, 2, 2)])
def test_derived_matches_brute_force(n, p, m):
    F = make_field(p, m)
    A = builtin_algebra("upper_triangular", F, n)
    mats = all_ut(F, n)
    want = brute_derived(F, mats)
    got = {ut_matrix(F, n, v) for v in commutator_subgroup(A)}
    assert got == want


@pytest.mark.parametrize("n,p,m", [(3, 2, 1), (3, 3, 1), (4, 2, 1)])
def test_classes_match_brute_force(n, p, m):
    F = make_field(p, m)
    A = builtin_algebra("upper_triangular", F, n)
    cc = conjugacy_classes(A)
    assert sorted(cc.sizes.tolist()) == brute_class_sizes(F, all_ut(F, n))


def test_class_examples(u3, t3, x2):
    assert sorted(s for _, s in conjugacy_classes(u3).as_list()) == [1, 1, 2, 2, 2]
    assert conjugacy_classes(t3).sizes.tolist() == [1, 1, 1, 1]
    assert len(conjugacy_classes(x2)) == 2


def test_abelianize_examples(u3, t3, x2):
    Q = abelianize(u3)
    assert Q.orders == (2, 2) and Q.size == 4
    gens = {tuple(g) for g in Q.generators.tolist()}
    assert gens == {(1, 0, 0), (0, 1, 0)}
    Qt = abelianize(t3)
    assert Qt.orders == (4,)
    assert Qt.generators.tolist() == [[1, 0]]
    assert abelianize(x2).orders == (2,)


@pytest.mark.parametrize("name,n,q", [("upper_triangular", 4, 2), ("upper_triangular", 3, 3),
                                      ("truncated_poly", 4, 3), ("upper_triangular", 3, 4)])
def test_log_is_homomorphism(name, n, q):
    F = make_field(2, 2) if q == 4 else make_field(q)
    A = builtin_algebra(name, F, n)
    Q = abelianize(A)
    G = Q.ambient
    el = G.elements
    orders = np.array(Q.orders)
    rng = np.random.default_rng(0)
    i, j = rng.integers(0, G.order, 400), rng.integers(0, G.order, 400)
    lhs = Q.log_of(G.mul(el[i], el[j]))
    rhs = (Q.log[i] + Q.log[j]) % orders
    assert np.array_equal(lhs, rhs)
    assert np.prod(orders) * Q.derived.size == G.order
    zero = np.all(Q.log == 0, axis=1)
    assert np.array_equal(np.flatnonzero(zero), np.sort(G.index(Q.elements_of_derived())))


def test_linear_character_values(x2, u3):
    Q = abelianize(x2)
    chis = character_group(Q)
    assert [c.values.tolist() for c in chis] == [[0, 0], [0, 1]]
    assert len(character_group(abelianize(u3))) == 4


def test_stabilizer_examples(u3, u4, F2):
    H2 = power_ideal(u3, 2)
    QH = abelianize(u3, H2)
    chi = LinearCharacter(QH, (1,))
    assert stabilizer_of_character(u3, chi) == full_space(F2, 3)
    assert stabilizer_of_character(u3, LinearCharacter(QH, (0,))) == full_space(F2, 3)
    # u4: characters of 1+A^2 nontrivial on e14
    Q4 = abelianize(u4, power_ideal(u4, 2))
    G = AlgebraGroup(u4)
    e14 = np.array([[0, 0, 0, 0, 0, 1]])
    proper = 0
    for c in character_group(Q4):
        if c.exponent_of(e14)[0]:
            V = stabilizer_of_character(u4, c, G)
            assert V.rank < 6
            proper += 1
    assert proper == 4


def test_conjugation_by_e34_moves_character(u4):
    Q4 = abelianize(u4, power_ideal(u4, 2))
    e13 = np.array([[0, 0, 0, 1, 0, 0]])
    e34 = np.array([0, 0, 1, 0, 0, 0])
    G = AlgebraGroup(u4)
    moved = G.conj(e13, e34)
    assert moved.tolist() == [[0, 0, 0, 1, 0, 1]]


def test_extended_group_order(u3):
    U = extend_scalars(u3, 2)
    assert AlgebraGroup(U).order == 64
