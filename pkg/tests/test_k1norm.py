from __future__ import annotations

import numpy as np
import pytest

from algroups.algrp import abelianize
from algroups.errors import NotInvertible
from algroups.gf import make_field
from algroups.k1norm import (
    HullElement,
    dieudonne_det,
    hull_add,
    hull_mul,
    norm_map,
    ordinary_det,
    unit_class,
    verify_norm_properties,
)
from algroups.nilalg import builtin_algebra, extend_scalars
from tests.oracles import hull_matmul, random_hull_matrix, trace_oracle


def H(s, *nil):
    return HullElement(s, tuple(nil))


def test_examples(x2):
    Q = abelianize(x2)
    assert dieudonne_det(x2, [[H(1, 1)]], Q) == unit_class(x2, H(1, 1), Q)
    I = [[H(1, 0), H(0, 0)], [H(0, 0), H(1, 0)]]
    d = dieudonne_det(x2, I, Q)
    assert (d.scalar_part, d.unipotent_class) == (1, (0,))
    M = [[H(1, 0), H(0, 1)], [H(0, 1), H(1, 0)]]
    d = dieudonne_det(x2, M, Q)
    assert (d.scalar_part, d.unipotent_class) == (1, (0,))


def test_singular_raises(x2):
    with pytest.raises(NotInvertible):
        dieudonne_det(x2, [[H(0, 1)]])


COMMUTATIVE = [("truncated_poly", 3, 3, 1), ("truncated_poly", 4, 2, 1), ("truncated_poly", 2, 2, 2),
               ("truncated_poly", 3, 2, 2)]


@pytest.mark.parametrize("kind,n,p,m", COMMUTATIVE)
def test_matches_ordinary_det(kind, n, p, m):
    A = builtin_algebra(kind, make_field(p, m), n)
    Q = abelianize(A)
    rng = np.random.default_rng(7)
    for size in (2, 3):
        for _ in range(25):
            M = random_hull_matrix(A, size, rng)
            assert dieudonne_det(A, M, Q) == unit_class(A, ordinary_det(A, M), Q)


def test_multiplicative_noncommutative(u3):
    Q = abelianize(u3)
    rng = np.random.default_rng(3)
    for _ in range(30):
        X, Y = random_hull_matrix(u3, 2, rng), random_hull_matrix(u3, 2, rng)
        lhs = dieudonne_det(u3, hull_matmul(u3, X, Y), Q)
        rhs = dieudonne_det(u3, X, Q).mul(dieudonne_det(u3, Y, Q), u3.field, Q.orders)
        assert lhs == rhs


def test_pivot_invariance(u3):
    Q = abelianize(u3)
    rng = np.random.default_rng(11)
    M = random_hull_matrix(u3, 3, rng)
    base = dieudonne_det(u3, M, Q)
    for s in range(10):
        assert dieudonne_det(u3, M, Q, rng=np.random.default_rng(s)) == base


def test_norm_identity(u3):
    Nt = norm_map(u3, 1)
    assert np.array_equal(Nt.table, Nt.dst.log)


def test_norm_x2_is_trace(x2):
    Nt = norm_map(x2, 2)
    F4 = make_field(2, 2)
    for (a,), img in zip(Nt.src.ambient.elements.tolist(), Nt.images.tolist()):
        assert img == [trace_oracle(F4, a, 2)]
    # N(1 + t b1) = 1 + b1
    assert Nt.images[Nt.src.ambient.index(np.array([[2]]))[0]].tolist() == [1]


@pytest.mark.parametrize("n", [2, 3])
def test_norm_x2_matches_ordinary_det(x2, n):
    """Oracle: ordinary determinant of the n x n multiplication matrix of a' = sum t^i a_i."""
    from algroups.k1norm import _tau_data
    K, coords, P = _tau_data(x2.field, n)
    Nt = norm_map(x2, n)
    for (a,), img in zip(Nt.src.ambient.elements.tolist(), Nt.images.tolist()):
        comp = coords[a]
        nil = [[sum(int(P[i, r, c]) * int(comp[i]) for i in range(n)) % 2 for c in range(n)] for r in range(n)]
        M = [[H(1 if r == c else 0, nil[r][c]) for c in range(n)] for r in range(n)]
        d = ordinary_det(x2, M)
        assert d.scalar == 1 and list(d.nil) == img


def test_norm_u3_surjective(u3):
    Nt = norm_map(u3, 2)
    assert Nt.image_size() == 4 == Nt.dst.size


@pytest.mark.parametrize("name,n,q,tower", [("truncated_poly", 2, 2, (2, 4)), ("upper_triangular", 3, 2, (2,)),
                                            ("upper_triangular", 3, 3, (2,)), ("truncated_poly", 3, 2, (2, 4))])
def test_verify_norm_properties(name, n, q, tower):
    A = builtin_algebra(name, make_field(q), n)
    res = verify_norm_properties(A, tower)
    assert res and all(r.passed for r in res), [r for r in res if not r.passed]
    checks = {r.check for r in res}
    assert {"norm-homomorphism", "norm-surjectivity", "norm-functoriality"} <= checks
    if len(tower) > 1:
        assert "norm-transitivity" in checks


def test_norm_equivariance_defined_over(F4):
    A = builtin_algebra("upper_triangular", F4, 3, defined_over=2)
    res = verify_norm_properties(A, [2])
    eq = [r for r in res if r.check == "norm-equivariance"]
    assert eq and eq[0].passed and eq[0].params["q"] == 2
