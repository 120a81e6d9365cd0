"""JSON documents.  Rationals travel as strings "p/q" (or plain integers)."""

from __future__ import annotations

import json

from . import linalg as la
from .groups import AffineElement, FlatGroup, GroupElement, SingleMorphism, trivial_morphism
from .morphism import NvMorphism, SemidirectElement
from .oracle import AffineMap, AffineNValuedMap


class ParseError(ValueError):
    pass


def rat(x) -> str:
    return str(x)


def rat_matrix(A) -> list:
    return [[rat(x) for x in row] for row in A]


def _require(doc, key, where):
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(f"{where}: missing key {key!r}")
    return doc[key]


def _matrix(rows, where):
    try:
        A = la.matrix(rows)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{where}: {exc}") from None
    if A and len({len(r) for r in A}) != 1:
        raise ParseError(f"{where}: ragged matrix")
    return A


def _vector(entries, where):
    try:
        return la.vector(entries)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{where}: {exc}") from None


# ---------------------------------------------------------------- groups

def group_to_json(G: FlatGroup) -> dict:
    out = {"dimension": G.dimension}
    if not G.is_torus:
        out["holonomy"] = [{"rotation": rat_matrix(h.rotation), "translation": [rat(x) for x in h.translation]}
                           for h in G.holonomy]
    return out


def group_from_json(doc) -> FlatGroup:
    d = _require(doc, "dimension", "group")
    if not isinstance(d, int) or d < 1:
        raise ParseError("group: dimension must be a positive integer")
    hol = []
    for k, h in enumerate(doc.get("holonomy") or []):
        A = _matrix(_require(h, "rotation", f"holonomy[{k}]"), f"holonomy[{k}].rotation")
        a = _vector(_require(h, "translation", f"holonomy[{k}]"), f"holonomy[{k}].translation")
        if la.shape(A) != (d, d) or len(a) != d:
            raise ParseError(f"holonomy[{k}]: wrong shape for dimension {d}")
        hol.append(AffineElement(A, a))
    try:
        return FlatGroup(d, hol)
    except ValueError as exc:
        raise ParseError(f"group: {exc}") from None


def element_to_json(x: GroupElement) -> dict:
    return {"holonomy": x.holonomy, "translation": list(x.translation)}


def element_from_json(doc, G: FlatGroup, where="element") -> GroupElement:
    j = doc.get("holonomy", 0) if isinstance(doc, dict) else None
    t = _require(doc, "translation", where)
    if not isinstance(j, int) or not 0 <= j < G.order:
        raise ParseError(f"{where}: holonomy index out of range")
    try:
        t = la.int_vector(t)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: {exc}") from None
    if len(t) != G.dimension:
        raise ParseError(f"{where}: translation has the wrong length")
    return G.element(j, t)


def single_to_json(psi: SingleMorphism) -> dict:
    return {"lattice_images": [element_to_json(x) for x in psi.lattice_images],
            "holonomy_images": [element_to_json(x) for x in psi.holonomy_images]}


def single_from_json(doc, source: FlatGroup, target: FlatGroup) -> SingleMorphism:
    if doc is None:
        return trivial_morphism(source, target)
    lat = [element_from_json(x, target, f"psi.lattice_images[{k}]")
           for k, x in enumerate(_require(doc, "lattice_images", "psi"))]
    hol = [element_from_json(x, target, f"psi.holonomy_images[{k}]")
           for k, x in enumerate(doc.get("holonomy_images") or [])]
    try:
        return SingleMorphism(source, target, lat, hol)
    except ValueError as exc:
        raise ParseError(f"psi: {exc}") from None


def semidirect_to_json(x: SemidirectElement) -> dict:
    return {"tuple": [element_to_json(c) for c in x.components], "perm": [p + 1 for p in x.perm]}


def semidirect_from_json(doc, n: int, target: FlatGroup, where) -> SemidirectElement:
    comps = tuple(element_from_json(c, target, f"{where}.tuple[{k}]")
                  for k, c in enumerate(_require(doc, "tuple", where)))
    perm = _require(doc, "perm", where)
    if len(comps) != n or sorted(perm) != list(range(1, n + 1)):
        raise ParseError(f"{where}: expected {n} components and a permutation of 1..{n}")
    return SemidirectElement(comps, tuple(p - 1 for p in perm))


def nv_to_json(phi: NvMorphism) -> dict:
    return {"n": phi.n,
            "lattice_images": [semidirect_to_json(x) for x in phi.lattice_images],
            "holonomy_images": [semidirect_to_json(x) for x in phi.holonomy_images]}


def nv_from_json(doc, source: FlatGroup, target: FlatGroup) -> NvMorphism:
    n = _require(doc, "n", "phi")
    if not isinstance(n, int) or n < 1:
        raise ParseError("phi: n must be a positive integer")
    lat = [semidirect_from_json(x, n, target, f"phi.lattice_images[{k}]")
           for k, x in enumerate(_require(doc, "lattice_images", "phi"))]
    hol = [semidirect_from_json(x, n, target, f"phi.holonomy_images[{k}]")
           for k, x in enumerate(doc.get("holonomy_images") or [])]
    try:
        return NvMorphism(n, source, target, lat, hol)
    except ValueError as exc:
        raise ParseError(f"phi: {exc}") from None


# ---------------------------------------------------------------- documents

def problem_to_json(phi: NvMorphism, psi: SingleMorphism | None) -> dict:
    return {"source": group_to_json(phi.source), "target": group_to_json(phi.target),
            "phi": nv_to_json(phi), "psi": None if psi is None else single_to_json(psi)}


def problem_from_json(doc):
    source = group_from_json(_require(doc, "source", "problem"))
    target = group_from_json(_require(doc, "target", "problem"))
    phi = nv_from_json(_require(doc, "phi", "problem"), source, target)
    psi = single_from_json(doc.get("psi"), source, target)
    return phi, psi


def affine_to_json(f: AffineNValuedMap, g: AffineMap) -> dict:
    return {"dimension": f.dimension, "n": f.n,
            "branches": [{"linear": rat_matrix(M), "offset": [rat(x) for x in c]} for M, c in f.branches],
            "g": {"linear": rat_matrix(g.linear), "offset": [rat(x) for x in g.offset]}}


def affine_from_json(doc):
    d = _require(doc, "dimension", "affine map")
    branches = []
    for k, b in enumerate(_require(doc, "branches", "affine map")):
        M = _matrix(_require(b, "linear", f"branches[{k}]"), f"branches[{k}].linear")
        c = _vector(_require(b, "offset", f"branches[{k}]"), f"branches[{k}].offset")
        if la.shape(M) != (d, d) or len(c) != d:
            raise ParseError(f"branches[{k}]: wrong shape for dimension {d}")
        branches.append((M, c))
    if doc.get("n", len(branches)) != len(branches):
        raise ParseError("affine map: n does not match the number of branches")
    gdoc = _require(doc, "g", "affine map")
    G = _matrix(_require(gdoc, "linear", "g"), "g.linear")
    b = _vector(_require(gdoc, "offset", "g"), "g.offset")
    if la.shape(G) != (d, d) or len(b) != d:
        raise ParseError(f"g: wrong shape for dimension {d}")
    try:
        return AffineNValuedMap(d, branches), AffineMap(G, b)
    except ValueError as exc:
        raise ParseError(f"g: {exc}") from None


def document_kind(doc) -> str:
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    if "branches" in doc:
        return "affine"
    if "phi" in doc:
        return "problem"
    if "dimension" in doc:
        return "group"
    raise ParseError("unrecognized document: expected a group, a problem or an affine map")


def load(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
