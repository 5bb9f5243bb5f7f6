"""Reading and writing the self-describing JSON document family.

Every document carries a top-level "kind" tag: poset, cocycle,
holonomy, group, matrix, lift-problem or gerbe.  Complex scalars are
[re, im] pairs and matrices are row-major nested arrays of such pairs.
"""
from __future__ import annotations

import json

import numpy as np

from .errors import ParseError
from .lifting import LiftProblem, ScalarPhasesFiber
from .netbundle import Cocycle, HolonomyRep
from .poset import Poset, Simplex1, close_order, pi1_presentation
from .unitary import (
    DEFAULT_EPS,
    FiniteMatrixGroup,
    ScalarFiber,
    SpecialFiber,
    group_closure,
)


def complex_to_data(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_data(data) -> complex:
    try:
        re, im = data
        return complex(float(re), float(im))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad complex entry {data!r}") from exc


def matrix_to_data(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[complex_to_data(z) for z in row] for row in m]


def matrix_from_data(data) -> np.ndarray:
    try:
        rows = [[complex_from_data(z) for z in row] for row in data]
    except TypeError as exc:
        raise ParseError(f"bad matrix literal") from exc
    if not rows:
        raise ParseError("empty matrix literal")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ParseError("ragged matrix literal")
    return np.array(rows, dtype=complex)


def load_document(path) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ParseError(f"{path} lacks a top-level 'kind' tag")
    return doc


def _expect(doc, kind):
    if doc.get("kind") != kind:
        raise ParseError(f"expected a {kind!r} document, got {doc.get('kind')!r}")


def poset_from_data(doc) -> Poset:
    _expect(doc, "poset")
    try:
        elements = list(doc["elements"])
        covers = [tuple(p) for p in doc.get("covers", [])]
    except (KeyError, TypeError) as exc:
        raise ParseError("poset document needs 'elements' and 'covers'") from exc
    if any(len(p) != 2 for p in covers):
        raise ParseError("cover pairs must have exactly two entries")
    try:
        return close_order(elements, covers)
    except KeyError as exc:
        raise ParseError(str(exc)) from exc


def poset_to_data(poset: Poset) -> dict:
    strict = sorted((a, b) for (a, b) in poset._leq if a != b)
    return {"kind": "poset", "elements": list(poset.elements), "covers": [list(p) for p in strict]}


def _resolve_poset(field) -> Poset:
    """Accept either an inline poset object or a path to a poset file."""
    if isinstance(field, str):
        return poset_from_data(load_document(field))
    if isinstance(field, dict):
        return poset_from_data({**field, "kind": "poset"})
    raise ParseError("poset must be inline or a file reference")


def _edge_from_data(data, poset) -> Simplex1:
    try:
        b = Simplex1(data["d0"], data["d1"], data["support"])
    except (KeyError, TypeError) as exc:
        raise ParseError("edge needs d0, d1 and support") from exc
    if b not in set(poset.simplices1()):
        raise ParseError(f"{b} is not a 1-simplex of the poset")
    return b


def _edge_to_data(b: Simplex1) -> dict:
    return {"d0": b.d0, "d1": b.d1, "support": b.support}


def cocycle_from_data(doc) -> Cocycle:
    _expect(doc, "cocycle")
    poset = _resolve_poset(doc.get("poset"))
    try:
        dimension = int(doc["dimension"])
        entries = doc.get("entries", [])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("cocycle document needs 'poset' and 'dimension'") from exc
    assignment = {}
    for entry in entries:
        b = _edge_from_data(entry.get("edge", {}), poset)
        assignment[b] = matrix_from_data(entry.get("matrix"))
    return Cocycle(poset, dimension, assignment)


def cocycle_to_data(cocycle: Cocycle) -> dict:
    return {
        "kind": "cocycle",
        "poset": poset_to_data(cocycle.poset),
        "dimension": cocycle.dimension,
        "entries": [
            {"edge": _edge_to_data(b), "matrix": matrix_to_data(m)}
            for b, m in sorted(cocycle.assignment.items())
        ],
    }


def holonomy_from_data(doc) -> HolonomyRep:
    _expect(doc, "holonomy")
    poset = _resolve_poset(doc.get("poset"))
    try:
        base = doc["base"]
        dimension = int(doc["dimension"])
        image_entries = doc["images"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("holonomy document needs base, dimension, images") from exc
    pres = pi1_presentation(poset, base)
    images = {}
    for entry in image_entries:
        try:
            position = int(entry["generator"])
            g = pres.alive[position]
        except (KeyError, ValueError, IndexError) as exc:
            raise ParseError(f"bad generator index in {entry!r}") from exc
        images[g] = matrix_from_data(entry.get("matrix"))
    return HolonomyRep(pres, images, dimension)


def holonomy_to_data(rep: HolonomyRep) -> dict:
    pres = rep.presentation
    return {
        "kind": "holonomy",
        "poset": poset_to_data(pres.poset),
        "base": pres.base,
        "dimension": rep.dimension,
        "images": [
            {"generator": j, "matrix": matrix_to_data(rep.image(g))}
            for j, g in enumerate(pres.alive)
        ],
    }


def group_from_data(doc, eps: float = DEFAULT_EPS) -> FiniteMatrixGroup:
    _expect(doc, "group")
    try:
        generators = [matrix_from_data(m) for m in doc["generators"]]
        bound = int(doc.get("bound", 1024))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("group document needs 'generators'") from exc
    return group_closure(generators, bound, eps)


def group_to_data(group: FiniteMatrixGroup) -> dict:
    return {
        "kind": "group",
        "dimension": group.dimension,
        "bound": max(len(group), 1),
        "generators": [matrix_to_data(g) for g in group.elements],
    }


def matrix_doc_from_data(doc) -> np.ndarray:
    _expect(doc, "matrix")
    return matrix_from_data(doc.get("matrix"))


def fiber_from_data(data, eps: float = DEFAULT_EPS):
    try:
        kind = data["type"]
    except (KeyError, TypeError) as exc:
        raise ParseError("fiber needs a 'type'") from exc
    if kind == "group":
        return group_from_data({**data, "kind": "group"}, eps)
    if kind == "special":
        return SpecialFiber(int(data["dimension"]))
    if kind == "scalar":
        return ScalarFiber(int(data["dimension"]))
    if kind == "scalar-phases":
        return ScalarPhasesFiber(int(data["dimension"]), int(data["n"]))
    raise ParseError(f"unknown fiber type {kind!r}")


def lift_problem_from_data(doc, eps: float = DEFAULT_EPS) -> LiftProblem:
    _expect(doc, "lift-problem")
    try:
        num = int(doc["generators"])
        relators = [tuple(int(x) for x in w) for w in doc.get("relators", [])]
        fiber = fiber_from_data(doc["fiber"], eps)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("lift-problem document is malformed") from exc
    raw = doc.get("images", [])
    if isinstance(fiber, SpecialFiber):
        images = [complex_from_data(z) for z in raw]
    else:
        images = [matrix_from_data(m) for m in raw]
    return LiftProblem(num, relators, images, fiber)


def gerbe_from_data(doc, eps: float = DEFAULT_EPS):
    from .gerbe import GerbeCochain

    _expect(doc, "gerbe")
    poset = _resolve_poset(doc.get("poset"))
    try:
        dimension = int(doc["dimension"])
        fiber = fiber_from_data(doc["fiber"], eps)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("gerbe document needs poset, dimension, fiber") from exc
    values = {}
    for entry in doc.get("entries", []):
        b = _edge_from_data(entry.get("edge", {}), poset)
        values[b] = matrix_from_data(entry.get("matrix"))
    return GerbeCochain(poset, dimension, fiber, values)


def gerbe_to_data(cochain) -> dict:
    fiber = cochain.fiber
    if isinstance(fiber, SpecialFiber):
        fiber_data = {"type": "special", "dimension": fiber.dimension}
    elif isinstance(fiber, ScalarFiber):
        fiber_data = {"type": "scalar", "dimension": fiber.dimension}
    else:
        fiber_data = {**group_to_data(fiber)}
        fiber_data.pop("kind")
        fiber_data["type"] = "group"
    return {
        "kind": "gerbe",
        "poset": poset_to_data(cochain.poset),
        "dimension": cochain.dimension,
        "fiber": fiber_data,
        "entries": [
            {"edge": _edge_to_data(b), "matrix": matrix_to_data(m)}
            for b, m in sorted(cochain.values.items())
        ],
    }
