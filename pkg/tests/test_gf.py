from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from algroups.errors import DivisionByZero, NotPrime, ReducibleModulus, TooLarge
from algroups.gf import (
    coeffs,
    embed,
    embedding_table,
    field_arith,
    frobenius,
    from_coeffs,
    is_irreducible,
    make_field,
    subfield_elements,
    tables,
)
from tests.oracles import trace_oracle


def test_make_field_examples():
    F2 = make_field(2)
    assert (F2.p, F2.m, F2.modulus) == (2, 1, (0, 1))
    assert make_field(2, 2).modulus == (1, 1, 1)
    with pytest.raises(ReducibleModulus):
        make_field(2, 2, [0, 1, 1])
    with pytest.raises(NotPrime):
        make_field(4)
    with pytest.raises(TooLarge):
        make_field(2, 11)


def test_canonical_moduli():
    assert make_field(2, 3).modulus == (1, 1, 0, 1)
    assert make_field(2, 4).modulus == (1, 1, 0, 0, 1)
    assert make_field(3, 2).modulus == (1, 0, 1)


def test_same_field_requires_same_modulus():
    a = make_field(2, 3)
    b = make_field(2, 3, [1, 0, 1, 1])
    assert a != b


def test_arith_examples():
    F4 = make_field(2, 2)
    t = 2
    assert field_arith(F4, "mul", t, t) == 3
    assert field_arith(F4, "trace_to_subfield", t, 2) == 1
    with pytest.raises(DivisionByZero):
        field_arith(make_field(2), "inv", 0)


def test_frobenius_examples():
    F4 = make_field(2, 2)
    assert frobenius(F4, 2, 2) == 3
    assert frobenius(F4, 3, 2) == 2
    F2 = make_field(2)
    assert [frobenius(F2, x, 2) for x in (0, 1)] == [0, 1]


def test_embed_examples():
    F2, F4 = make_field(2), make_field(2, 2)
    assert embed(F2, F4, 1) == 1
    assert embed(F2, F4, 0) == 0
    assert embed(F4, F4, 2) == 2


@pytest.mark.parametrize("p,chain", [(2, (1, 2, 4)), (2, (1, 3, 6)), (3, (1, 2, 4))])
def test_embedding_tower_compatible(p, chain):
    a, b, c = (make_field(p, m) for m in chain)
    ab, bc, ac = embedding_table(a, b), embedding_table(b, c), embedding_table(a, c)
    assert np.array_equal(bc[ab], ac)


@pytest.mark.parametrize("p,m,n", [(2, 1, 2), (2, 2, 4), (3, 1, 2), (2, 1, 3)])
def test_embedding_is_ring_homomorphism(p, m, n):
    a, b = make_field(p, m), make_field(p, n)
    e = embedding_table(a, b)
    Ta, Tb = tables(a), tables(b)
    x = np.arange(a.q)
    X, Y = np.meshgrid(x, x)
    assert np.array_equal(e[Ta.add[X, Y]], Tb.add[e[X], e[Y]])
    assert np.array_equal(e[Ta.mul[X, Y]], Tb.mul[e[X], e[Y]])
    assert set(e.tolist()) == set(subfield_elements(b, a.q).tolist())


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (2, 4), (3, 2), (5, 2)])
def test_field_axioms(p, m):
    F = make_field(p, m)
    T = tables(F)
    x = np.arange(F.q)
    assert np.all(T.mul[x[1:], T.inv[x[1:]]] == 1)
    X, Y = np.meshgrid(x, x)
    assert np.array_equal(T.mul[X, Y], T.mul[Y, X])
    assert np.all(T.add[x, T.neg[x]] == 0)
    # x^q = x
    assert all(T.pow(int(v), F.q) == v for v in x)


@pytest.mark.parametrize("m,q", [(2, 2), (4, 2), (4, 4), (2, 2)])
def test_trace_matches_oracle(m, q):
    F = make_field(2, m)
    for x in range(F.q):
        assert field_arith(F, "trace_to_subfield", x, q) == trace_oracle(F, x, q)


def test_irreducibility_counts():
    # number of monic irreducibles of degree 4 over F_2 is 3
    from itertools import product
    polys = [list(c) + [1] for c in product(range(2), repeat=4)]
    assert sum(is_irreducible(c, 2) for c in polys) == 3


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 15), st.integers(0, 15), st.integers(0, 15))
def test_distributive_f16(a, b, c):
    F = make_field(2, 4)
    lhs = field_arith(F, "mul", a, field_arith(F, "add", b, c))
    rhs = field_arith(F, "add", field_arith(F, "mul", a, b), field_arith(F, "mul", a, c))
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 80))
def test_coeff_roundtrip(x):
    F = make_field(3, 4)
    assert from_coeffs(F, coeffs(F, x)) == x
