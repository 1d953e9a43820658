from __future__ import annotations

import pytest

from algroups import experiments as ex
from algroups.gf import make_field
from algroups.irred import enumerate_irreps
from algroups.nilalg import builtin_algebra


def _all_pass(records):
    return all(r.passed for r, _ in records), [r for r, _ in records if not r.passed]


def test_u3_f2_ext2(u3):
    recs = ex.run_checks(u3, [2], ["norms", "injectivity", "orders", "surjectivity", "sh-base-change",
                                   "restriction-compatibility", "isaacs", "gutkin", "halasi",
                                   "commutator-balance", "invariants", "conditional", "restriction"])
    ok, bad = _all_pass(recs)
    assert ok, bad
    names = {r.check for r, _ in recs}
    assert {"injectivity", "fdim-sh", "surjectivity", "sh-injectivity", "sh-radical", "completeness"} <= names


def test_orders_u3_f2(u3):
    rec = ex.orders_records(u3, 2)[0]
    assert rec.params["subgroup"] == "A"
    assert rec.params["ab_order"] == 4 and rec.params["fixed_order"] == 4
    assert ex.ab_order(u3) == 4


def test_orders_all_subgroups(u3):
    # A/A^2 is F_2^2, which has 1 + 3 + 1 subspaces
    recs = ex.orders_records(u3, 3)
    assert len(recs) == 5 and all(r.passed for r in recs)


def test_surjectivity_u3_f3():
    A = builtin_algebra("upper_triangular", make_field(3), 3)
    r = ex.check_surjectivity(A, 2)
    assert r.passed, r.witness
    assert r.params["invariant"] == r.params["images"] == 11
    assert ex.check_surjectivity(A, 2, method="enumerate").params["invariant"] == 11


@pytest.mark.parametrize("name", ["u3_f2", "t3_f2", "x2+u3_f2", "u3_f4", "t4_f3"])
def test_fixed_class_count_matches_enumeration(name):
    """Brauer's permutation lemma, checked against the enumerated irreducibles."""
    from algroups.catalog import builtin_catalog
    from algroups.irred import is_galois_invariant
    from algroups.nilalg import extend_scalars
    A = next(e.algebra for e in builtin_catalog() if e.name == name)
    for n in (2, 3):
        if A.q ** (n * A.dim) > 4096:
            continue
        ext = enumerate_irreps(extend_scalars(A, n))
        inv = sum(is_galois_invariant(c.character, A.field.q) for c in ext)
        assert ex.fixed_class_count(A, n) == inv


def test_transitivity_x2_tower(x2):
    r = ex.check_transitivity(x2, 2, 4)
    assert r.passed and r.params["irreps"] == 2


def test_transitivity_t3_tower(t3):
    assert ex.check_transitivity(t3, 2, 4).passed


def test_equivariance_u3_f4():
    A = builtin_algebra("upper_triangular", make_field(2, 2), 3, defined_over=2)
    r = ex.check_equivariance(A, 2)
    assert r.passed and r.params["q"] == 2


def test_equivariance_trivial_without_subfield(u3):
    assert ex.check_equivariance(u3, 2).params.get("note")


def test_skip_records_are_explicit():
    A = builtin_algebra("upper_triangular", make_field(2, 2), 4, defined_over=2)
    recs = ex.run_checks(A, [3], ["surjectivity"])
    assert [(r.check, r.passed, r.witness) for r, _ in recs] == [("surjectivity", True, "skipped: size")]


def test_unknown_check(u3):
    with pytest.raises(ValueError):
        ex.run_checks(u3, [2], ["nope"])


def test_violation_becomes_record(u3, monkeypatch):
    from algroups.errors import TheoremViolation

    def boom(A, n):
        raise TheoremViolation("forced", {"x": 1})
    monkeypatch.setattr(ex, "check_injectivity", boom)
    (r, _), = ex.run_checks(u3, [2], ["injectivity"])
    assert not r.passed and r.witness["data"] == {"x": 1}
