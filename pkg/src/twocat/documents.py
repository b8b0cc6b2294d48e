"""Flat JSON-shaped document format for named structures.

A document declares a ground field, an optional grading group, and a table of
named entities (algebras, modules, bimodules, balanced morphisms).  Scalar
entries are literals like ``"1/2*z^3 - 2"`` parsed under the declared
conductor; 2-morphisms are serialized block by block with explicit ``"s t"``
index keys so goldens diff cleanly.  A bare catalog entry (a JSON object with
a ``kind`` key) is also a valid document with a single entity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from .ambient import (
    OneMorphism,
    TwoMorphism,
    TwoObject,
    box1,
    box_object,
    compose1,
    generator,
    identity1,
)
from .scalars import FieldSpec, ScalarMatrix
from .structures import (
    AlgebraObject,
    Balanced1Morphism,
    Bimodule,
    LeftModule,
    MalformedData,
    RightModule,
    catalog_entry,
    end_rank2_algebra,
    internal_algebra_from_entry,
    left_module_from_internal_algebra,
    load_fusion_algebra,
    module_from_internal_algebra,
    regular_bimodule,
    regular_left_module,
    regular_right_module,
    serialize_fusion_algebra,
)
from .morita import column_bimodule, row_bimodule

__all__ = [
    "Document",
    "DocumentError",
    "Resolver",
    "parse_document",
    "print_document",
    "serialize_balanced",
    "serialize_bimodule",
    "serialize_left_module",
    "serialize_right_module",
]


class DocumentError(ValueError):
    """Parse or resolution failure, with line/column when syntactic."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


@dataclass
class Document:
    """Parsed document: declared field, optional ambient data, raw entities."""

    field: FieldSpec
    entities: dict = dc_field(default_factory=dict)
    ambient: dict | None = None

    def __eq__(self, other):
        return (isinstance(other, Document)
                and (self.field, self.entities, self.ambient)
                == (other.field, other.entities, other.ambient))


def _parse_field_entry(data) -> FieldSpec:
    try:
        return FieldSpec(data["kind"], int(data["conductor"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"bad field spec: {exc}") from exc


def parse_document(text: str) -> Document:
    """Parse and validate document text; every entity is resolved eagerly so
    unresolved references and malformed scalar literals fail here."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, exc.lineno, exc.colno) from exc
    if not isinstance(data, dict):
        raise DocumentError("document must be a JSON object")
    if "entities" not in data and "kind" in data:
        # a bare catalog-style entry is a one-entity document
        name = data.get("name") or "main"
        fld = data.get("field")
        if fld is None and "base" in data:
            # module entries inherit the ground field of their base algebra
            try:
                fld = catalog_entry(data["base"]).get("field")
            except MalformedData:
                fld = None
        if fld is None:
            raise DocumentError("entry document missing 'field'")
        data = {"field": fld, "entities": {name: data}}
    if "field" not in data:
        raise DocumentError("document missing 'field'")
    entities = data.get("entities", {})
    if not isinstance(entities, dict):
        raise DocumentError("'entities' must be an object")
    doc = Document(_parse_field_entry(data["field"]), dict(entities),
                   data.get("ambient"))
    resolver = Resolver(doc)
    for name, entry in doc.entities.items():
        if not isinstance(entry, dict) or "kind" not in entry:
            raise DocumentError(f"entity {name!r} has no 'kind'")
        resolver.resolve(name)
    return doc


def print_document(doc: Document) -> str:
    """Canonical text form; parse(print(doc)) == doc."""
    out = {"field": {"kind": doc.field.kind, "conductor": doc.field.conductor},
           "entities": doc.entities}
    if doc.ambient is not None:
        out["ambient"] = doc.ambient
    return json.dumps(out, indent=2, sort_keys=True) + "\n"


# block (de)serialization ----------------------------------------------------

def _dump_blocks(field: FieldSpec, cell: TwoMorphism) -> dict:
    out = {}
    for (s, t) in sorted(cell.blocks):
        blk = cell.blocks[(s, t)]
        out[f"{s} {t}"] = [[field.format(blk[r, c]) for c in range(blk.cols)]
                           for r in range(blk.rows)]
    return out


def _load_cell(field: FieldSpec, src: OneMorphism, tgt: OneMorphism,
               data: dict, label: str) -> TwoMorphism:
    blocks = {}
    for key, rows in data.items():
        parts = key.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise DocumentError(f"bad block key {key!r} in {label}")
        s, t = int(parts[0]), int(parts[1])
        try:
            mat = ScalarMatrix(
                field, [[field.parse(lit) for lit in row] for row in rows],
                src.n_paths(s, t))
        except ValueError as exc:
            raise DocumentError(f"{label} block {key!r}: {exc}") from exc
        blocks[(s, t)] = mat
    try:
        return TwoMorphism(src, tgt, blocks)
    except (AssertionError, ValueError) as exc:
        raise DocumentError(f"{label}: malformed blocks: {exc}") from exc


def _generator_dims(u: OneMorphism, label: str):
    if len(u.layers) != 1 or len(u.layers[0]) != 1:
        raise DocumentError(f"{label}: only generator 1-morphisms serialize")
    gen = u.layers[0][0]
    return [list(row) for row in u.dims], gen.name


def _load_object(amb, grades, label) -> TwoObject:
    try:
        return TwoObject(amb, tuple(int(g) for g in grades))
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"{label}: bad carrier grades: {exc}") from exc


# entity serializers ---------------------------------------------------------

def serialize_right_module(mod: RightModule, algebra_ref: str) -> dict:
    field = mod.algebra.A.ambient.field
    dims, name = _generator_dims(mod.n, "right module action")
    return {"kind": "right_module", "algebra": algebra_ref,
            "carrier": list(mod.M.grades),
            "action": {"dims": dims, "name": name},
            "cells": {"nu": _dump_blocks(field, mod.nu),
                      "rho_m": _dump_blocks(field, mod.rho_m)}}


def serialize_left_module(mod: LeftModule, algebra_ref: str) -> dict:
    field = mod.algebra.A.ambient.field
    dims, name = _generator_dims(mod.l, "left module action")
    return {"kind": "left_module", "algebra": algebra_ref,
            "carrier": list(mod.M.grades),
            "action": {"dims": dims, "name": name},
            "cells": {"lambda_m": _dump_blocks(field, mod.lambda_m),
                      "kappa": _dump_blocks(field, mod.kappa)}}


def serialize_bimodule(bim: Bimodule, left_ref: str, right_ref: str) -> dict:
    field = bim.left.algebra.A.ambient.field
    return {"kind": "bimodule", "left": left_ref, "right": right_ref,
            "beta": _dump_blocks(field, bim.beta)}


def serialize_balanced(bal: Balanced1Morphism, right_ref: str,
                       left_ref: str) -> dict:
    field = bal.right.algebra.A.ambient.field
    dims, name = _generator_dims(bal.f, "balanced morphism")
    return {"kind": "balanced", "right": right_ref, "left": left_ref,
            "target": list(bal.C.grades),
            "morphism": {"dims": dims, "name": name},
            "beta_f": _dump_blocks(field, bal.beta_f)}


# resolution -----------------------------------------------------------------

class Resolver:
    """Resolves entity names to constructed structures.

    Names are looked up in the document first, then in the catalog.  The
    shorthand ``regular:ALG`` names the regular module/bimodule of an
    algebra without declaring it.  A field override (from the command line)
    rebuilds catalog and document algebras over that field.
    """

    def __init__(self, doc: Document | None = None,
                 field: FieldSpec | None = None):
        self.doc = doc
        self.field_override = field
        self._cache = {}

    def _entry(self, name: str) -> dict:
        if self.doc is not None and name in self.doc.entities:
            return self.doc.entities[name]
        try:
            return catalog_entry(name)
        except MalformedData as exc:
            raise DocumentError(f"unresolved reference {name!r}") from exc

    def resolve(self, name: str):
        entry = self._entry(name)
        kind = entry.get("kind")
        loaders = {"fusion_algebra": self.algebra,
                   "internal_algebra_module": self.right_module,
                   "right_module": self.right_module,
                   "left_module": self.left_module,
                   "bimodule": self.bimodule,
                   "balanced": self.balanced}
        if kind not in loaders:
            raise DocumentError(f"entity {name!r}: unknown kind {kind!r}")
        return loaders[kind](name)

    def _memo(self, kind, name, build):
        key = (kind, name)
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def _field_for(self, entry: dict) -> FieldSpec:
        if self.field_override is not None:
            return self.field_override
        if "field" in entry:
            return _parse_field_entry(entry["field"])
        if self.doc is not None:
            return self.doc.field
        raise DocumentError("no field declared for entity")

    def algebra(self, name: str) -> AlgebraObject:
        def build():
            entry = self._entry(name)
            if entry.get("kind") != "fusion_algebra":
                raise DocumentError(f"{name!r} is not an algebra")
            preset = entry.get("preset")
            if preset == "end_rank2":
                return end_rank2_algebra(self._field_for(entry))
            if preset is not None:
                raise DocumentError(
                    f"{name!r}: unknown algebra preset {preset!r}")
            try:
                return load_fusion_algebra(entry, self._field_for(entry),
                                           validate=False)
            except (MalformedData, ValueError) as exc:
                raise DocumentError(f"algebra {name!r}: {exc}") from exc
        return self._memo("algebra", name, build)

    def right_module(self, name: str) -> RightModule:
        def build():
            if name.startswith("regular:"):
                return regular_right_module(self.algebra(name[8:]))
            entry = self._entry(name)
            kind = entry.get("kind")
            if kind == "internal_algebra_module":
                alg = self.algebra(entry["base"])
                b = internal_algebra_from_entry(alg, entry)
                if entry.get("side", "right") == "left":
                    raise DocumentError(f"{name!r} is a left module")
                return module_from_internal_algebra(alg, b)
            if kind != "right_module":
                raise DocumentError(f"{name!r} is not a right module")
            return self._explicit_right(name, entry)
        return self._memo("right_module", name, build)

    def left_module(self, name: str) -> LeftModule:
        def build():
            if name.startswith("regular:"):
                return regular_left_module(self.algebra(name[8:]))
            entry = self._entry(name)
            kind = entry.get("kind")
            if kind == "internal_algebra_module":
                alg = self.algebra(entry["base"])
                b = internal_algebra_from_entry(alg, entry)
                return left_module_from_internal_algebra(alg, b)
            if kind != "left_module":
                raise DocumentError(f"{name!r} is not a left module")
            return self._explicit_left(name, entry)
        return self._memo("left_module", name, build)

    def _explicit_right(self, name, entry) -> RightModule:
        alg = self.algebra(entry["algebra"])
        amb = alg.A.ambient
        M = _load_object(amb, entry["carrier"], name)
        act = entry["action"]
        n = generator(box_object(M, alg.A), M, act["dims"],
                      act.get("name", "n"))
        idM, idA = identity1(M), identity1(alg.A)
        cells = entry["cells"]
        nu = _load_cell(amb.field, compose1(n, box1(n, idA)),
                        compose1(n, box1(idM, alg.m)), cells["nu"],
                        f"{name}.nu")
        rho_m = _load_cell(amb.field, compose1(n, box1(idM, alg.i)), idM,
                           cells["rho_m"], f"{name}.rho_m")
        return RightModule(alg, M, n, nu, rho_m)

    def _explicit_left(self, name, entry) -> LeftModule:
        alg = self.algebra(entry["algebra"])
        amb = alg.A.ambient
        M = _load_object(amb, entry["carrier"], name)
        act = entry["action"]
        l = generator(box_object(alg.A, M), M, act["dims"],
                      act.get("name", "l"))
        idM, idA = identity1(M), identity1(alg.A)
        cells = entry["cells"]
        lambda_m = _load_cell(amb.field, compose1(l, box1(alg.i, idM)), idM,
                              cells["lambda_m"], f"{name}.lambda_m")
        kappa = _load_cell(amb.field, compose1(l, box1(alg.m, idM)),
                           compose1(l, box1(idA, l)), cells["kappa"],
                           f"{name}.kappa")
        return LeftModule(alg, M, l, lambda_m, kappa)

    def bimodule(self, name: str) -> Bimodule:
        def build():
            if name.startswith("regular:"):
                return regular_bimodule(self.algebra(name[8:]))
            entry = self._entry(name)
            if entry.get("kind") != "bimodule":
                raise DocumentError(f"{name!r} is not a bimodule")
            preset = entry.get("preset")
            if preset == "regular":
                return regular_bimodule(self.algebra(entry["algebra"]))
            if preset in ("column", "row"):
                E = self.algebra(entry["matrix_algebra"])
                V = self.algebra(entry["base_algebra"])
                return (column_bimodule(E, V) if preset == "column"
                        else row_bimodule(V, E))
            if preset is not None:
                raise DocumentError(
                    f"{name!r}: unknown bimodule preset {preset!r}")
            left = self.left_module(entry["left"])
            right = self.right_module(entry["right"])
            if left.M != right.M:
                raise DocumentError(
                    f"{name!r}: left and right carriers differ")
            field = left.algebra.A.ambient.field
            src = compose1(right.n, box1(left.l, identity1(right.algebra.A)))
            tgt = compose1(left.l, box1(identity1(left.algebra.A), right.n))
            beta = _load_cell(field, src, tgt, entry["beta"], f"{name}.beta")
            return Bimodule(left, right, beta)
        return self._memo("bimodule", name, build)

    def balanced(self, name: str) -> Balanced1Morphism:
        def build():
            entry = self._entry(name)
            if entry.get("kind") != "balanced":
                raise DocumentError(f"{name!r} is not a balanced morphism")
            right = self.right_module(entry["right"])
            left = self.left_module(entry["left"])
            amb = right.algebra.A.ambient
            C = _load_object(amb, entry["target"], name)
            mor = entry["morphism"]
            f = generator(box_object(right.M, left.M), C, mor["dims"],
                          mor.get("name", "f"))
            src = compose1(f, box1(right.n, identity1(left.M)))
            tgt = compose1(f, box1(identity1(right.M), left.l))
            beta_f = _load_cell(amb.field, src, tgt, entry["beta_f"],
                                f"{name}.beta_f")
            return Balanced1Morphism(right, left, C, f, beta_f)
        return self._memo("balanced", name, build)


def document_for_algebra(alg: AlgebraObject, name: str | None = None
                         ) -> Document:
    """Wrap one algebra as a single-entity document."""
    entry = serialize_fusion_algebra(alg)
    key = name or entry.get("name") or "main"
    return Document(alg.A.ambient.field, {key: entry})
