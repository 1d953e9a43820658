from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from algroups.algrp import AlgebraGroup, LinearCharacter, abelianize, character_group
from algroups.cyclo import (
    ClassFunction,
    CyclotomicInteger,
    character_value,
    cyclo_arith,
    group_level,
    induce,
    inner_product,
    is_irreducible,
    phi,
    restrict,
)
from algroups.nilalg import span
from tests.oracles import complex_inner, complex_values


def test_cyclo_examples():
    z = CyclotomicInteger.zeta(4)
    assert (z + z.conj()) == CyclotomicInteger.integer(4, 0)
    assert CyclotomicInteger.zeta(2) == CyclotomicInteger.integer(2, -1)
    assert z * z == CyclotomicInteger.integer(4, -1)
    assert cyclo_arith("mul", z, z) == CyclotomicInteger.integer(4, -1)


@pytest.mark.parametrize("E", [2, 3, 4, 8, 9, 16, 27])
def test_zeta_powers(E):
    for k in range(2 * E):
        a = CyclotomicInteger.zeta(E, k)
        b = CyclotomicInteger.zeta(E, k % E)
        assert a == b
        v = complex(np.exp(2j * np.pi * k / E))
        got = sum(c * np.exp(2j * np.pi * i / E) for i, c in enumerate(a.array))
        assert abs(got - v) < 1e-9
    assert phi(E) == sum(1 for k in range(E) if np.gcd(k, E) == 1)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=4, max_size=4),
       st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_mul_matches_complex(a, b):
    E = 8
    x, y = CyclotomicInteger.from_array(E, a), CyclotomicInteger.from_array(E, b)
    z = np.exp(2j * np.pi / E)
    ev = lambda c: sum(v * z ** i for i, v in enumerate(c.array))
    assert abs(ev(x * y) - ev(x) * ev(y)) < 1e-9
    assert abs(ev(x.conj()) - np.conj(ev(x))) < 1e-9


def test_character_value_examples(x2, t3):
    Qx = abelianize(x2)
    chi = LinearCharacter(Qx, (1,))
    assert character_value(chi, [1], 2) == CyclotomicInteger.integer(2, -1)
    assert character_value(LinearCharacter(Qx, (0,)), [1], 4) == CyclotomicInteger.integer(4, 1)
    Qt = abelianize(t3)
    chi = LinearCharacter(Qt, (1,))
    assert character_value(chi, [1, 0], 4) == CyclotomicInteger.zeta(4)


def test_level(u3, u4, t3):
    assert group_level(u3) == 4
    assert group_level(u4) == 4
    assert group_level(t3) == 4


def _u3_two_dim(u3, F2):
    H = span(F2, 3, [[1, 0, 0], [0, 0, 1]])
    QH = abelianize(u3, H)
    # lambda(1+b3) = -1, lambda(1+b1) = 1
    for c in character_group(QH):
        if c.exponent_of([[0, 0, 1]])[0] and not c.exponent_of([[1, 0, 0]])[0]:
            return c
    raise AssertionError


def test_induce_u3(u3, F2):
    lam = _u3_two_dim(u3, F2)
    f = induce(ClassFunction.from_linear(lam, 4), AlgebraGroup(u3))
    vals = {r: int(v[0]) for r, v in f.class_view()}
    assert vals[(0, 0, 0)] == 2 and vals[(0, 0, 1)] == -2
    assert sorted(vals.values()) == [-2, 0, 0, 0, 2]
    assert inner_product(f, f) == 1 and is_irreducible(f)
    assert abs(complex_inner(f, f) - 1) < 1e-9
    assert f.is_class_function()


def test_induce_trivial_degree(u3, F2):
    H = span(F2, 3, [[0, 0, 1]])
    triv = ClassFunction.trivial(AlgebraGroup(u3, H), 4)
    f = induce(triv, AlgebraGroup(u3))
    assert f.degree == 4
    G = AlgebraGroup(u3)
    g = ClassFunction.trivial(G, 4)
    assert induce(g, G) == g
    assert inner_product(g, g) == 1


def test_orthogonality_linear(u3):
    Q = abelianize(u3)
    fs = [ClassFunction.from_linear(c, 4) for c in character_group(Q)]
    for i, a in enumerate(fs):
        for j, b in enumerate(fs):
            assert inner_product(a, b) == (i == j)


def test_frobenius_reciprocity(u4, F2):
    from algroups.irred import enumerate_irreps
    G = AlgebraGroup(u4)
    H = span(F2, 6, [[1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]])
    Hs = enumerate_irreps(u4, H)
    Gs = enumerate_irreps(u4)
    for psi in Hs[:5]:
        ind = induce(psi.character, G)
        for rho in Gs[::3]:
            assert inner_product(ind, rho.character) == inner_product(psi.character, restrict(rho.character, psi.character.group))


def test_complex_values_real_for_real_characters(u3):
    f = ClassFunction.trivial(AlgebraGroup(u3), 4)
    assert np.allclose(complex_values(f), 1)
