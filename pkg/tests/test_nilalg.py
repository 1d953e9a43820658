from __future__ import annotations

import numpy as np
import pytest

from algroups.errors import NotAssociative, NotNilpotent
from algroups.gf import make_field
from algroups.nilalg import (
    algebra_from_constants,
    annihilator_ideal,
    builtin_algebra,
    extend_scalars,
    extend_subspace,
    frobenius_on_algebra,
    full_space,
    is_subalgebra,
    power_ideal,
    span,
    subalgebra_closure,
    subspaces_between,
    zero_space,
)


def _u3_table():
    sc = np.zeros((3, 3, 3), dtype=np.int64)
    sc[0, 1, 2] = 1
    return sc


def test_from_constants_examples(F2):
    A = algebra_from_constants(F2, 3, _u3_table())
    assert A.nclass == 3
    with pytest.raises(NotNilpotent):
        algebra_from_constants(F2, 1, np.ones((1, 1, 1), dtype=np.int64))
    sc = np.zeros((2, 2, 2), dtype=np.int64)
    sc[0, 0, 1] = 1
    assert algebra_from_constants(F2, 2, sc).nclass == 3


def test_non_associative_has_witness(F2):
    sc = np.zeros((2, 2, 2), dtype=np.int64)
    sc[0, 0, 1] = 1
    sc[0, 1, 1] = 1      # b1(b1 b1) = b1 b2 = b2 but (b1 b1) b1 = b2 b1 = 0
    with pytest.raises((NotAssociative, NotNilpotent)) as e:
        algebra_from_constants(F2, 2, sc)
    if isinstance(e.value, NotAssociative):
        assert len(e.value.witness) == 3


def test_builtin_examples(F2, u3, x2, t3):
    assert (u3.dim, u3.nclass) == (3, 3)
    assert x2.dim == 1 and x2.sc[0, 0, 0] == 0
    assert t3.dim == 2 and np.array_equal(t3.sc, t3.sc.transpose(1, 0, 2))
    # b1 b2 = b3 in the graded basis
    e = np.eye(3, dtype=np.int64)
    assert np.array_equal(u3.mul(e[0], e[1]), e[2])
    assert not np.any(u3.mul(e[1], e[0]))


def test_u4_matches_matrix_product(F2, u4):
    from tests.oracles import mat_mul, ut_matrix
    rng = np.random.default_rng(1)
    for _ in range(30):
        x, y = rng.integers(0, 2, 6), rng.integers(0, 2, 6)
        # (1+x)(1+y) = 1 + x + y + xy
        prod = mat_mul(F2, ut_matrix(F2, 4, x), ut_matrix(F2, 4, y))
        xy = u4.mul(x, y)
        want = ut_matrix(F2, 4, (x + y + xy) % 2)
        assert prod == want


def test_power_ideals(u3, t3, u4):
    assert power_ideal(u3, 2).basis == ((0, 0, 1),)
    assert power_ideal(u3, 3).rank == 0
    assert power_ideal(t3, 2).basis == ((0, 1),)
    assert [power_ideal(u4, k).rank for k in (1, 2, 3, 4)] == [6, 3, 1, 0]


def test_extend_scalars(x2, u3, F2):
    X = extend_scalars(x2, 2)
    assert X.field.q == 4 and X.defined_over == 2 and X.dim == 1
    assert extend_scalars(u3, 1).defined_over == 2
    U = extend_scalars(u3, 2)
    assert U.nclass == 3 and U.field.q == 4


def test_frobenius_on_algebra(x2, u3):
    X = extend_scalars(x2, 2)
    assert frobenius_on_algebra(X, 2, [2]).tolist() == [3]
    U = extend_scalars(u3, 2)
    assert frobenius_on_algebra(U, 2, [2, 0, 1]).tolist() == [3, 0, 1]
    assert frobenius_on_algebra(u3, 2, [1, 0, 1]).tolist() == [1, 0, 1]


def test_closure_and_subalgebra(u3, F2):
    assert subalgebra_closure(u3, [[1, 0, 0]]).basis == ((1, 0, 0),)
    assert subalgebra_closure(u3, [[1, 1, 0]]) == span(F2, 3, [[1, 1, 0], [0, 0, 1]])
    assert not is_subalgebra(u3, span(F2, 3, [[1, 0, 0], [0, 1, 0]]))


def test_annihilator(u3, t3, x2, F2):
    assert annihilator_ideal(u3) == span(F2, 3, [[0, 0, 1]])
    assert annihilator_ideal(t3) == span(F2, 2, [[0, 1]])
    assert annihilator_ideal(x2) == full_space(F2, 1)


def test_subspaces_between_counts(u3, F2):
    A2 = power_ideal(u3, 2)
    # subspaces of F_2^2 : 1 + 3 + 1
    assert len(subspaces_between(A2, full_space(F2, 3))) == 5
    F3 = make_field(3)
    A = builtin_algebra("upper_triangular", F3, 3)
    assert len(subspaces_between(power_ideal(A, 2), full_space(F3, 3))) == 6


def test_extend_subspace(u3):
    U = extend_scalars(u3, 2)
    S = extend_subspace(power_ideal(u3, 2), U)
    assert S == power_ideal(U, 2)
    assert extend_subspace(zero_space(u3.field, 3), U).rank == 0


def test_json_roundtrip(u3):
    from algroups.catalog import CatalogEntry, entry_from_json
    e = CatalogEntry("u3_f2", u3)
    assert entry_from_json(e.to_json()).algebra == u3
