"""Flat-manifold fundamental groups given by a translation lattice and holonomy table.

An element ``translation(t) * h_j`` acts on R^d as ``x -> A_j x + a_j + t``.
Holonomy representative 0 is always the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import linalg as la
from .errors import GroupMismatch, ImageNotTranslation, InvalidGroup


@dataclass(frozen=True)
class AffineElement:
    rotation: tuple
    translation: tuple

    @classmethod
    def identity(cls, d: int) -> "AffineElement":
        return cls(la.matrix(la.identity(d)), la.vector((0,) * d))

    def __mul__(self, other: "AffineElement") -> "AffineElement":
        return AffineElement(la.matmul(self.rotation, other.rotation),
                             la.vec_add(la.matvec(self.rotation, other.translation), self.translation))

    def inverse(self) -> "AffineElement":
        Ainv = la.inverse(self.rotation)
        return AffineElement(Ainv, la.vec_neg(la.matvec(Ainv, self.translation)))

    def __call__(self, x):
        return la.vec_add(la.matvec(self.rotation, x), self.translation)


def matrix_order(A, bound: int = 64) -> int | None:
    I = la.identity(len(A))
    P = A
    for r in range(1, bound + 1):
        if all(P[i][j] == I[i][j] for i in range(len(A)) for j in range(len(A))):
            return r
        P = la.matmul(P, A)
    return None


@dataclass
class ValidationReport:
    valid: bool = True
    failures: list = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)

    def fail(self, check: str, message: str, witness=None):
        self.valid = False
        self.failures.append(f"{check}: {message}")
        if witness is not None:
            self.witnesses[check] = witness

    def __bool__(self):
        return self.valid

    def to_json(self):
        return {"valid": self.valid, "failures": list(self.failures),
                "witnesses": {k: _jsonable(v) for k, v in self.witnesses.items()}}


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (tuple, list)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


class FlatGroup:
    """Crystallographic group with lattice Z^d and holonomy representatives h_0 = id, h_1, ..."""

    def __init__(self, dimension: int, holonomy=None):
        self.dimension = dimension
        d = dimension
        reps = [AffineElement(la.matrix(h.rotation), la.vector(h.translation)) for h in (holonomy or ())]
        if not reps:
            reps = [AffineElement.identity(d)]
        first = reps[0]
        if first.rotation != la.matrix(la.identity(d)) or any(x != 0 for x in first.translation):
            raise InvalidGroup("holonomy representative 0 must be the identity")
        self.holonomy = tuple(reps)

    @classmethod
    def torus(cls, d: int) -> "FlatGroup":
        return cls(d)

    @property
    def order(self) -> int:
        """Holonomy order [Pi : Z^d]."""
        return len(self.holonomy)

    @property
    def is_torus(self) -> bool:
        return self.order == 1

    def rotation(self, j: int) -> tuple:
        return self.holonomy[j].rotation

    def rotation_index(self, A) -> int | None:
        A = la.matrix(A)
        for j, h in enumerate(self.holonomy):
            if h.rotation == A:
                return j
        return None

    @cached_property
    def table(self):
        """(m, v): h_i h_j = translation(v[i][j]) h_{m[i][j]}; raises InvalidGroup if not closed."""
        k = self.order
        m = [[0] * k for _ in range(k)]
        v = [[None] * k for _ in range(k)]
        for i in range(k):
            for j in range(k):
                prod = self.holonomy[i] * self.holonomy[j]
                r = self.rotation_index(prod.rotation)
                if r is None:
                    raise InvalidGroup(f"h_{i} h_{j} has a rotation part outside the holonomy")
                t = la.vec_sub(prod.translation, self.holonomy[r].translation)
                if any(x.denominator != 1 for x in t):
                    raise InvalidGroup(f"cocycle v_{i}{j} = {t} is not integral")
                m[i][j] = r
                v[i][j] = tuple(int(x) for x in t)
        return tuple(map(tuple, m)), tuple(map(tuple, v))

    def element(self, holonomy: int = 0, translation=None) -> "GroupElement":
        t = (0,) * self.dimension if translation is None else la.int_vector(translation)
        return GroupElement(self, holonomy, t)

    def identity(self) -> "GroupElement":
        return self.element()

    def translation(self, t) -> "GroupElement":
        return self.element(0, t)

    def generator(self, kind: str, index: int) -> "GroupElement":
        if kind == "t":
            return self.translation(tuple(int(a == index) for a in range(self.dimension)))
        return self.element(index)

    def generators(self):
        """Canonical generating set: lattice basis then holonomy representatives 1.. ."""
        gens = [("t", a) for a in range(self.dimension)]
        gens += [("g", j) for j in range(1, self.order)]
        return gens

    def from_affine(self, x: AffineElement) -> "GroupElement":
        j = self.rotation_index(x.rotation)
        if j is None:
            raise GroupMismatch("rotation part is not in the holonomy")
        t = la.vec_sub(x.translation, self.holonomy[j].translation)
        if any(Fraction(c).denominator != 1 for c in t):
            raise GroupMismatch("translation is off the lattice coset")
        return GroupElement(self, j, tuple(int(c) for c in t))

    def __eq__(self, other):
        return (isinstance(other, FlatGroup) and self.dimension == other.dimension
                and self.holonomy == other.holonomy)

    def __hash__(self):
        return hash((self.dimension, self.holonomy))

    def __repr__(self):
        return f"FlatGroup(dimension={self.dimension}, holonomy_order={self.order})"


@dataclass(frozen=True)
class GroupElement:
    group: FlatGroup = field(compare=False, repr=False)
    holonomy: int
    translation: tuple

    def _check(self, other):
        if not isinstance(other, GroupElement) or self.group != other.group:
            raise GroupMismatch("elements belong to different groups")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        m, v = self.group.table
        j, k = self.holonomy, other.holonomy
        A = self.group.rotation(j)
        t = tuple(int(x + y + z) for x, y, z in
                  zip(self.translation, la.matvec(A, other.translation), v[j][k]))
        return GroupElement(self.group, m[j][k], t)

    def inverse(self) -> "GroupElement":
        return self.group.from_affine(self.affine().inverse())

    def __pow__(self, k: int) -> "GroupElement":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = self.group.identity()
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def affine(self) -> AffineElement:
        h = self.group.holonomy[self.holonomy]
        return AffineElement(h.rotation, la.vec_add(h.translation, self.translation))

    @property
    def rotation(self) -> tuple:
        return self.group.rotation(self.holonomy)

    @property
    def is_translation(self) -> bool:
        return self.holonomy == 0

    def __repr__(self):
        t = ",".join(map(str, self.translation))
        return f"t({t})" if self.holonomy == 0 else f"t({t})h{self.holonomy}"


# ---------------------------------------------------------------- validation

def validate_flat_group(G: FlatGroup) -> ValidationReport:
    report = ValidationReport()
    d = G.dimension
    for j, h in enumerate(G.holonomy):
        if not la.is_integral(h.rotation) or abs(la.det(h.rotation)) != 1:
            report.fail("rotation", f"A_{j} is not an integer unimodular matrix", j)
            return report
        if matrix_order(h.rotation) is None:
            report.fail("rotation", f"A_{j} has infinite order", j)
            return report
    rots = [h.rotation for h in G.holonomy]
    if len(set(rots)) != len(rots):
        report.fail("faithful", "two holonomy representatives share a rotation part")
        return report
    try:
        m, _ = G.table
    except InvalidGroup as exc:
        report.fail("closure", str(exc))
        return report
    for i in range(G.order):
        if 0 not in m[i]:
            report.fail("closure", f"h_{i} has no inverse in the holonomy", i)
    for j, h in enumerate(G.holonomy):
        if la.det(h.rotation) != 1:
            report.fail("orientability", f"det A_{j} = {la.det(h.rotation)}", j)
    for j in range(1, G.order):
        A = la.to_int(G.rotation(j))
        r = matrix_order(A)
        N = la.zeros(d, d)
        P = la.identity(d)
        for _ in range(r):
            N = la.mat_add(N, P)
            P = la.matmul(P, A)
        Na = la.matvec(N, G.holonomy[j].translation)
        t = la.solve_integer(N, la.vec_neg(Na))
        if t is not None:
            witness = G.element(j, t)
            report.fail("torsion", f"{witness!r} has order {r}", {"holonomy": j, "translation": t})
    return report


# ---------------------------------------------------------------- presentation

def _lattice_word(v, sign: int = 1):
    return tuple(("t", a, sign * c) for a, c in enumerate(v) if c)


def relators(G: FlatGroup) -> list:
    """Relators as words of (kind, index, exponent) letters; kind is "t" or "g"."""
    d = G.dimension
    words = []
    for a in range(d):
        for b in range(a + 1, d):
            words.append((("t", a, 1), ("t", b, 1), ("t", a, -1), ("t", b, -1)))
    if G.order == 1:
        return words
    m, v = G.table
    for j in range(1, G.order):
        A = la.to_int(G.rotation(j))
        for a in range(d):
            image = tuple(A[r][a] for r in range(d))
            words.append((("g", j, 1), ("t", a, 1), ("g", j, -1)) + _lattice_word(image, -1))
    for i in range(1, G.order):
        for j in range(1, G.order):
            word = [("g", i, 1), ("g", j, 1)]
            if m[i][j]:
                word.append(("g", m[i][j], -1))
            words.append(tuple(word) + _lattice_word(v[i][j], -1))
    return words


def evaluate_word(word, image, identity):
    """Multiply out a word, given image(kind, index) and the target identity."""
    result = identity
    for kind, index, exp in word:
        x = image(kind, index)
        result = result * (x ** exp)
    return result


# ---------------------------------------------------------------- morphisms

class SingleMorphism:
    """Homomorphism between flat groups fixed by images of the canonical generators."""

    def __init__(self, source: FlatGroup, target: FlatGroup, lattice_images, holonomy_images=()):
        self.source = source
        self.target = target
        self.lattice_images = tuple(lattice_images)
        self.holonomy_images = tuple(holonomy_images)
        if len(self.lattice_images) != source.dimension:
            raise GroupMismatch("need one image per lattice generator")
        if len(self.holonomy_images) != source.order - 1:
            raise GroupMismatch("need one image per non-identity holonomy representative")
        for x in self.lattice_images + self.holonomy_images:
            if x.group != target:
                raise GroupMismatch("generator image lies outside the target group")

    def image(self, kind: str, index: int) -> GroupElement:
        if kind == "t":
            return self.lattice_images[index]
        return self.holonomy_images[index - 1]

    def __call__(self, x: GroupElement) -> GroupElement:
        if x.group != self.source:
            raise GroupMismatch("argument is not in the source group")
        result = self.target.identity()
        for a, c in enumerate(x.translation):
            if c:
                result = result * (self.lattice_images[a] ** c)
        if x.holonomy:
            result = result * self.holonomy_images[x.holonomy - 1]
        return result

    def __eq__(self, other):
        return (isinstance(other, SingleMorphism) and self.source == other.source
                and self.target == other.target and self.lattice_images == other.lattice_images
                and self.holonomy_images == other.holonomy_images)


def verify_single_morphism(psi: SingleMorphism) -> bool:
    e = psi.target.identity()
    return all(evaluate_word(w, psi.image, e) == e for w in relators(psi.source))


def trivial_morphism(source: FlatGroup, target: FlatGroup) -> SingleMorphism:
    e = target.identity()
    return SingleMorphism(source, target, [e] * source.dimension, [e] * (source.order - 1))


def identity_morphism(G: FlatGroup) -> SingleMorphism:
    return SingleMorphism(G, G, [G.generator("t", a) for a in range(G.dimension)],
                          [G.element(j) for j in range(1, G.order)])


def torus_matrix_morphism(F, source: FlatGroup | None = None, target: FlatGroup | None = None) -> SingleMorphism:
    """Torus morphism sending e_a to translation by column a of the integer matrix F."""
    F = la.int_matrix(F)
    d_out, d_in = la.shape(F)
    source = source or FlatGroup.torus(d_in)
    target = target or FlatGroup.torus(d_out)
    return SingleMorphism(source, target, [target.translation(c) for c in la.columns(F)])


def translation_images_matrix(images, d: int):
    cols = []
    for x in images:
        if not x.is_translation:
            raise ImageNotTranslation(f"image {x!r} is not a pure translation")
        cols.append(x.translation)
    return la.from_columns(cols, d)


def lie_matrix(psi: SingleMorphism, sublattice: la.Lattice | None = None, multiplier: int | None = None):
    """Linear part psi_* read off the pure-translation images of multiplier * sublattice.

    The multiplier defaults to the target holonomy order, which makes every
    image a translation.
    """
    d = psi.source.dimension
    L = sublattice or la.Lattice.full(d)
    m = psi.target.order if multiplier is None else multiplier
    basis = [tuple(m * x for x in c) for c in L.basis]
    images = [psi(psi.source.translation(b)) for b in basis]
    T = translation_images_matrix(images, psi.target.dimension)
    B = la.from_columns(basis, d)
    return la.matmul(la.matrix(T), la.inverse(B))


def holonomy_transversal(G: FlatGroup) -> list:
    return [(j, G.rotation(j)) for j in range(G.order)]


def lattice_determinant(X, sublattice: la.Lattice) -> Fraction:
    """Determinant of X measured from the given source lattice basis to the standard target basis."""
    return la.det(la.matmul(X, sublattice.matrix()))
