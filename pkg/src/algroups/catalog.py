"""Catalog entries: JSON files on disk or the generated builtin grid."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field as dc_field
from itertools import combinations_with_replacement
from pathlib import Path

import numpy as np

from .errors import AlgroupsError, ParseError, ValidationError
from .gf import FieldDescriptor, from_coeffs, make_field
from .nilalg import NilpotentAlgebra, algebra_from_constants, builtin_algebra

BUILTIN = "builtin"


@dataclass
class CatalogEntry:
    name: str
    algebra: NilpotentAlgebra
    tags: tuple[str, ...] = dc_field(default_factory=tuple)

    def to_json(self) -> dict:
        out = {"name": self.name}
        out.update(self.algebra.to_json())
        if self.tags:
            out["tags"] = list(self.tags)
        return out

    def __eq__(self, other):
        return (isinstance(other, CatalogEntry) and self.name == other.name
                and self.algebra == other.algebra and tuple(self.tags) == tuple(other.tags))


def auto_tags(A: NilpotentAlgebra) -> tuple[str, ...]:
    tags = []
    if np.array_equal(A.sc, A.sc.transpose(1, 0, 2)):
        tags.append("commutative")
    # group nilpotence class: 1 if abelian, at most nclass - 1 in general
    bound = 1 if tags else A.nclass - 1
    if bound < A.field.p:
        tags.append("class<p")
    return tuple(tags)


def _suffix(F: FieldDescriptor) -> str:
    return f"f{F.q}"


def builtin_catalog() -> list[CatalogEntry]:
    """upper_triangular(3,4) and truncated_poly(2,3,4) over F_2, F_3, F_4, plus
    pairwise direct sums of x2, t3, u3 over F_2 and F_3."""
    out = []
    fields = [make_field(2), make_field(3), make_field(2, 2)]
    for F in fields:
        d_over = F.p if F.m > 1 else None
        fam = [builtin_algebra("upper_triangular", F, n, defined_over=d_over) for n in (3, 4)]
        fam += [builtin_algebra("truncated_poly", F, n, defined_over=d_over) for n in (2, 3, 4)]
        out += [CatalogEntry(f"{A.name}_{_suffix(F)}", A) for A in fam]
    for F in fields[:2]:
        small = [builtin_algebra("truncated_poly", F, 2), builtin_algebra("truncated_poly", F, 3),
                 builtin_algebra("upper_triangular", F, 3)]
        for a, b in combinations_with_replacement(small, 2):
            A = builtin_algebra("direct_sum", F, a, b)
            out.append(CatalogEntry(f"{A.name}_{_suffix(F)}", A))
    out = [CatalogEntry(e.name, e.algebra, auto_tags(e.algebra)) for e in out]
    return sorted(out, key=lambda e: e.name)


def _require(obj: dict, key: str, kind, path):
    if key not in obj:
        raise ParseError(f"missing field {key!r}", path=path, field=key)
    v = obj[key]
    if kind is int and (not isinstance(v, int) or isinstance(v, bool)):
        raise ParseError(f"field {key!r} must be an integer", path=path, field=key)
    if kind is not int and not isinstance(v, kind):
        raise ParseError(f"field {key!r} has the wrong type", path=path, field=key)
    return v


def entry_from_json(obj, path=None) -> CatalogEntry:
    if not isinstance(obj, dict):
        raise ParseError("entry must be a JSON object", path=path)
    name = _require(obj, "name", str, path)
    fj = _require(obj, "field", dict, path)
    dim = _require(obj, "dim", int, path)
    sc = _require(obj, "sc", list, path)
    try:
        F = FieldDescriptor.from_json(fj)
    except (KeyError, TypeError) as e:
        raise ParseError(f"bad field spec: {e}", path=path, field="field") from e
    except AlgroupsError as e:
        raise ValidationError(f"invalid field: {e}", witness=fj) from e
    try:
        arr = np.array([[[from_coeffs(F, c) for c in row] for row in mat] for mat in sc], dtype=np.int64)
    except (TypeError, ValueError) as e:
        raise ParseError(f"bad structure constants: {e}", path=path, field="sc") from e
    if arr.shape != (dim, dim, dim):
        raise ParseError(f"structure constants have shape {arr.shape}, expected {(dim,) * 3}", path=path, field="sc")
    d_over = obj.get("defined_over")
    if d_over is not None and (not isinstance(d_over, int) or isinstance(d_over, bool)):
        raise ParseError("field 'defined_over' must be an integer", path=path, field="defined_over")
    tags = obj.get("tags", [])
    if not isinstance(tags, list) or not all(isinstance(t, str) for t in tags):
        raise ParseError("field 'tags' must be a list of strings", path=path, field="tags")
    try:
        A = algebra_from_constants(F, dim, arr, d_over, name=name.split("_")[0])
    except AlgroupsError as e:
        raise ValidationError(f"{name}: {e}", witness=getattr(e, "witness", None)) from e
    return CatalogEntry(name, A, tuple(tags))


def load_entry(path: str | os.PathLike) -> CatalogEntry:
    path = Path(path)
    text = path.read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, path=str(path), line=e.lineno) from e
    return entry_from_json(obj, path=str(path))


def ingest_catalog(path: str | os.PathLike) -> list[CatalogEntry]:
    """Validated entries of a catalog directory (``*.json``) in name order;
    ``"builtin"`` generates the builtin grid."""
    if str(path) == BUILTIN:
        return builtin_catalog()
    p = Path(path)
    if not p.is_dir():
        raise FileNotFoundError(f"catalog directory {p} does not exist")
    entries = [load_entry(f) for f in sorted(p.glob("*.json"))]
    names: dict[str, int] = {}
    for e in entries:
        if e.name in names:
            raise ValidationError(f"duplicate entry name {e.name!r}", witness={"name": e.name})
        names[e.name] = 1
    return sorted(entries, key=lambda e: e.name)


def write_catalog(entries, directory: str | os.PathLike) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for e in entries:
        (d / f"{e.name}.json").write_text(json.dumps(e.to_json(), indent=1) + "\n")


def resolve_entry(spec: str, catalog: str | None = None) -> CatalogEntry:
    """A JSON file path, a name in ``catalog``, or a builtin name."""
    p = Path(spec)
    if p.suffix == ".json" or p.is_file():
        return load_entry(p)
    pool = ingest_catalog(catalog) if catalog else builtin_catalog()
    for e in pool:
        if e.name == spec:
            return e
    raise FileNotFoundError(f"no catalog entry named {spec!r}")
