"""JSON forms of every object, plus canonical serialization for certificates.

Complex numbers are ``[re, im]`` pairs; matrices are
``{"rows": n, "cols": m, "data": [[re, im], ...]}`` in row-major order.
Documents are checked against the schemas below before decoding.
"""
from __future__ import annotations

import hashlib
import json

import jsonschema
import numpy as np

from . import classical as cl
from . import vnalg
from .matkernel import DEFAULT_TOL, OperatorSubspace, Tolerances, orthonormalize
from .qfun import DilationIsometry, Homomorphism, PartialIsometryFamily, homomorphism_from_values
from .qrel import QuantumRelation


class SchemaError(ValueError):
    """A document does not match the expected JSON schema."""


_COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

MATRIX_SCHEMA = {
    "type": "object",
    "required": ["rows", "cols", "data"],
    "properties": {
        "rows": {"type": "integer", "minimum": 1},
        "cols": {"type": "integer", "minimum": 1},
        "data": {"type": "array", "items": _COMPLEX},
    },
}

SUBSPACE_SCHEMA = {
    "type": "object",
    "required": ["domain_dim", "codomain_dim", "basis"],
    "properties": {
        "domain_dim": {"type": "integer", "minimum": 1},
        "codomain_dim": {"type": "integer", "minimum": 1},
        "basis": {"type": "array", "items": MATRIX_SCHEMA},
    },
}

ALGEBRA_SCHEMA = {
    "oneOf": [
        {
            "type": "object",
            "required": ["blocks"],
            "properties": {
                "blocks": {
                    "type": "array", "minItems": 1,
                    "items": {
                        "type": "object", "required": ["n", "m"],
                        "properties": {"n": {"type": "integer", "minimum": 1},
                                       "m": {"type": "integer", "minimum": 1}},
                    },
                },
                "label": {"type": "string"},
            },
        },
        {
            "type": "object",
            "required": ["dim", "generators"],
            "properties": {
                "dim": {"type": "integer", "minimum": 1},
                "generators": {"type": "array", "items": MATRIX_SCHEMA},
                "label": {"type": "string"},
            },
        },
    ],
}

RELATION_SCHEMA = {
    "type": "object",
    "required": ["source", "target", "space"],
    "properties": {"source": ALGEBRA_SCHEMA, "target": ALGEBRA_SCHEMA, "space": SUBSPACE_SCHEMA},
}

HOMOMORPHISM_SCHEMA = {
    "type": "object",
    "required": ["source", "target", "images"],
    "properties": {"source": ALGEBRA_SCHEMA, "target": ALGEBRA_SCHEMA,
                   "images": {"type": "array", "items": MATRIX_SCHEMA}},
}

FAMILY_SCHEMA = {
    "type": "object",
    "required": ["members"],
    "properties": {"members": {"type": "array", "items": MATRIX_SCHEMA}},
}

ISOMETRY_SCHEMA = {
    "type": "object",
    "required": ["w", "index_size"],
    "properties": {"w": MATRIX_SCHEMA, "index_size": {"type": "integer", "minimum": 1}},
}

CLASSICAL_RELATION_SCHEMA = {
    "type": "object",
    "required": ["x_size", "y_size", "pairs"],
    "properties": {
        "x_size": {"type": "integer", "minimum": 1},
        "y_size": {"type": "integer", "minimum": 1},
        "pairs": {"type": "array", "items": {"type": "array", "items": {"type": "integer"},
                                             "minItems": 2, "maxItems": 2}},
    },
}

CLASSICAL_FUNCTION_SCHEMA = {
    "type": "object",
    "required": ["x_size", "y_size", "map"],
    "properties": {
        "x_size": {"type": "integer", "minimum": 1},
        "y_size": {"type": "integer", "minimum": 1},
        "map": {"type": "array", "items": {"type": "integer", "minimum": 0}},
    },
}


def check(doc, schema, what: str):
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"invalid {what} at {where}: {exc.message}") from None


# -- matrices and subspaces ---------------------------------------------------------

def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]),
            "data": [[float(z.real), float(z.imag)] for z in m.ravel()]}


def matrix_from_json(doc) -> np.ndarray:
    check(doc, MATRIX_SCHEMA, "matrix")
    rows, cols, data = doc["rows"], doc["cols"], doc["data"]
    if len(data) != rows * cols:
        raise SchemaError(f"matrix data has {len(data)} entries, expected {rows * cols}")
    a = np.array([complex(re, im) for re, im in data], dtype=complex).reshape(rows, cols)
    if not np.all(np.isfinite(a)):
        raise SchemaError("matrix entries must be finite")
    return a


def subspace_to_json(s: OperatorSubspace) -> dict:
    return {"domain_dim": s.domain_dim, "codomain_dim": s.codomain_dim,
            "basis": [matrix_to_json(b) for b in s.basis]}


def subspace_from_json(doc, tol: Tolerances = DEFAULT_TOL) -> OperatorSubspace:
    """Decode and re-orthonormalize, so non-orthonormal spanning sets are accepted."""
    check(doc, SUBSPACE_SCHEMA, "operator subspace")
    shape = (doc["codomain_dim"], doc["domain_dim"])
    mats = [matrix_from_json(b) for b in doc["basis"]]
    for m in mats:
        if m.shape != shape:
            raise SchemaError(f"basis matrix of shape {m.shape} in a {shape} subspace")
    return orthonormalize(mats, shape=shape, tol=tol)


# -- algebras -----------------------------------------------------------------------

def algebra_to_json(m: vnalg.VonNeumannAlgebra) -> dict:
    if m.blocks is not None:
        doc = {"blocks": [{"n": n, "m": k} for n, k in m.blocks]}
    else:
        doc = {"dim": m.hilbert_dim, "generators": [matrix_to_json(b) for b in m.algebra.basis]}
    if m.label:
        doc["label"] = m.label
    return doc


def _algebra_elements(doc, tol):
    """Decode an algebra and the element list its serialized form enumerates."""
    check(doc, ALGEBRA_SCHEMA, "algebra")
    label = doc.get("label")
    if "blocks" in doc:
        alg = vnalg.from_blocks([(b["n"], b["m"]) for b in doc["blocks"]], label=label)
        return alg, alg.algebra.basis
    d = doc["dim"]
    gens = [matrix_from_json(g) for g in doc["generators"]]
    for g in gens:
        if g.shape != (d, d):
            raise SchemaError(f"generator of shape {g.shape} is not {d}x{d}")
    alg = vnalg.from_generators(gens, d, label=label, tol=tol)
    return alg, np.array(gens).reshape(-1, d, d)


def algebra_from_json(doc, tol: Tolerances = DEFAULT_TOL) -> vnalg.VonNeumannAlgebra:
    return _algebra_elements(doc, tol)[0]


# -- relations, homomorphisms, families, isometries ----------------------------------

def relation_to_json(r: QuantumRelation) -> dict:
    return {"source": algebra_to_json(r.source), "target": algebra_to_json(r.target),
            "space": subspace_to_json(r.space)}


def relation_from_json(doc, tol: Tolerances = DEFAULT_TOL) -> QuantumRelation:
    """Decode a relation; its bimodule property is *not* assumed, callers re-validate."""
    check(doc, RELATION_SCHEMA, "relation")
    source = algebra_from_json(doc["source"], tol)
    target = algebra_from_json(doc["target"], tol)
    space = subspace_from_json(doc["space"], tol)
    if space.shape != (target.hilbert_dim, source.hilbert_dim):
        raise SchemaError(f"space shape {space.shape} does not match algebras "
                          f"({target.hilbert_dim}x{source.hilbert_dim})")
    return QuantumRelation(source, target, space)


def hom_to_json(pi: Homomorphism) -> dict:
    """Images are listed against the source's serialized element order."""
    return {"source": algebra_to_json(pi.source), "target": algebra_to_json(pi.target),
            "images": [matrix_to_json(x) for x in pi.images]}


def hom_from_json(doc, tol: Tolerances = DEFAULT_TOL) -> Homomorphism:
    """Decode a homomorphism; images pair index-by-index with the source's serialized elements.

    Validity as a unital *-homomorphism is not assumed; callers re-validate.
    """
    check(doc, HOMOMORPHISM_SCHEMA, "homomorphism")
    source, elements = _algebra_elements(doc["source"], tol)
    target = algebra_from_json(doc["target"], tol)
    images = [matrix_from_json(x) for x in doc["images"]]
    if len(images) != len(elements):
        raise SchemaError(f"{len(images)} images for {len(elements)} source elements")
    h = target.hilbert_dim
    for x in images:
        if x.shape != (h, h):
            raise SchemaError(f"image of shape {x.shape} is not {h}x{h}")
    return homomorphism_from_values(source, target, elements, images, tol)


def family_to_json(f: PartialIsometryFamily) -> dict:
    return {"members": [matrix_to_json(u) for u in f.members]}


def family_from_json(doc) -> PartialIsometryFamily:
    check(doc, FAMILY_SCHEMA, "partial isometry family")
    members = [matrix_from_json(u) for u in doc["members"]]
    if not members:
        raise SchemaError("family must have at least one member")
    shapes = {u.shape for u in members}
    if len(shapes) != 1:
        raise SchemaError("family members have different shapes")
    k, h = shapes.pop()
    return PartialIsometryFamily(np.array(members), h, k)


def isometry_to_json(w: DilationIsometry) -> dict:
    return {"w": matrix_to_json(w.w), "index_size": w.index_size}


def isometry_from_json(doc) -> DilationIsometry:
    check(doc, ISOMETRY_SCHEMA, "dilation isometry")
    return DilationIsometry(matrix_from_json(doc["w"]), doc["index_size"])


def classical_relation_to_json(f: cl.ClassicalRelation) -> dict:
    return {"x_size": f.x_size, "y_size": f.y_size, "pairs": [list(p) for p in sorted(f.pairs)]}


def classical_relation_from_json(doc) -> cl.ClassicalRelation:
    check(doc, CLASSICAL_RELATION_SCHEMA, "classical relation")
    try:
        return cl.ClassicalRelation(doc["x_size"], doc["y_size"], frozenset(tuple(p) for p in doc["pairs"]))
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def classical_function_to_json(f: cl.ClassicalFunction) -> dict:
    return {"x_size": f.x_size, "y_size": f.y_size, "map": list(f.map)}


def classical_function_from_json(doc) -> cl.ClassicalFunction:
    check(doc, CLASSICAL_FUNCTION_SCHEMA, "classical function")
    try:
        return cl.ClassicalFunction(doc["x_size"], doc["y_size"], tuple(doc["map"]))
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


# -- canonical form -------------------------------------------------------------------

def canonical_dumps(doc, pretty: bool = False) -> str:
    """Sorted keys and shortest round-trip floats; NaN/inf are rejected."""
    if pretty:
        return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False)
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), allow_nan=False)


def digest(*docs) -> str:
    h = hashlib.sha256()
    for d in docs:
        h.update(canonical_dumps(d).encode())
        h.update(b"\n")
    return "sha256:" + h.hexdigest()
