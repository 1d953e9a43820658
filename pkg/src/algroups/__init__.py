"""Finite algebra groups 1+A over finite fields: characters, norm maps and base change."""
from __future__ import annotations

from .errors import AlgroupsError, TheoremViolation
from .gf import make_field, field_arith, embed, frobenius
from .nilalg import (
    NilpotentAlgebra,
    Subspace,
    algebra_from_constants,
    builtin_algebra,
    extend_scalars,
    power_ideal,
    span,
)
from .algrp import AlgebraGroup, abelianize, commutator_subgroup, conjugacy_classes, group_arith
from .cyclo import ClassFunction, CyclotomicInteger, induce, inner_product, restrict
from .k1norm import dieudonne_det, norm_map, verify_norm_properties
from .heis import balance_check, commutator_pairing, maximal_isotropic, sh_base_change, sh_classify
from .irred import base_change, enumerate_irreps, galois_orbit, iso_test, monomialize, reduction_step
from .catalog import CatalogEntry, builtin_catalog, ingest_catalog
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "AlgroupsError", "TheoremViolation", "make_field", "field_arith", "embed", "frobenius",
    "NilpotentAlgebra", "Subspace", "algebra_from_constants", "builtin_algebra", "extend_scalars",
    "power_ideal", "span", "AlgebraGroup", "abelianize", "commutator_subgroup", "conjugacy_classes",
    "group_arith", "ClassFunction", "CyclotomicInteger", "induce", "inner_product", "restrict",
    "dieudonne_det", "norm_map", "verify_norm_properties", "balance_check", "commutator_pairing",
    "maximal_isotropic", "sh_base_change", "sh_classify", "base_change", "enumerate_irreps",
    "galois_orbit", "iso_test", "monomialize", "reduction_step", "CatalogEntry", "builtin_catalog",
    "ingest_catalog", "BACKEND",
]
