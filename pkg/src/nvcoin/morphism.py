"""Morphisms into the wreath-type product Delta^n x| Sigma_n and their permutation analysis.

Permutations are tuples of 0-based images.  Composition ``(s * t)(i) = s[t[i]]``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from . import linalg as la
from .errors import (ArityMismatch, GroupMismatch, ImageNotTranslation, MismatchDetected,
                     TargetHasHolonomy)
from .groups import FlatGroup, GroupElement, SingleMorphism, evaluate_word, relators


# ---------------------------------------------------------------- permutations

def perm_compose(s, t) -> tuple:
    return tuple(s[x] for x in t)


def perm_inverse(s) -> tuple:
    inv = [0] * len(s)
    for i, x in enumerate(s):
        inv[x] = i
    return tuple(inv)


def perm_identity(n: int) -> tuple:
    return tuple(range(n))


def perm_closure(generators, n: int) -> set:
    """All elements of the permutation group generated by the given permutations."""
    e = perm_identity(n)
    seen = {e}
    queue = deque([e])
    while queue:
        p = queue.popleft()
        for g in generators:
            q = perm_compose(g, p)
            if q not in seen:
                seen.add(q)
                queue.append(q)
    return seen


# ---------------------------------------------------------------- semidirect product

@dataclass(frozen=True)
class SemidirectElement:
    components: tuple
    perm: tuple

    @property
    def n(self) -> int:
        return len(self.components)

    @classmethod
    def identity(cls, group: FlatGroup, n: int) -> "SemidirectElement":
        e = group.identity()
        return cls((e,) * n, perm_identity(n))

    def __mul__(self, other: "SemidirectElement") -> "SemidirectElement":
        return semidirect_multiply(self, other)

    def inverse(self) -> "SemidirectElement":
        return SemidirectElement(tuple(self.components[self.perm[j]].inverse() for j in range(self.n)),
                                 perm_inverse(self.perm))

    def __pow__(self, k: int) -> "SemidirectElement":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = SemidirectElement.identity(self.components[0].group, self.n)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __repr__(self):
        comps = ", ".join(map(repr, self.components))
        return f"({comps}; {[p + 1 for p in self.perm]})"


def semidirect_multiply(x: SemidirectElement, y: SemidirectElement) -> SemidirectElement:
    if x.n != y.n:
        raise ArityMismatch(f"cannot multiply elements of arity {x.n} and {y.n}")
    inv = perm_inverse(x.perm)
    comps = tuple(x.components[i] * y.components[inv[i]] for i in range(x.n))
    return SemidirectElement(comps, perm_compose(x.perm, y.perm))


# ---------------------------------------------------------------- morphism

class NvMorphism:
    """phi = (phi_1, ..., phi_n; sigma) given on the canonical generators of the source."""

    def __init__(self, n: int, source: FlatGroup, target: FlatGroup, lattice_images, holonomy_images=()):
        self.n = n
        self.source = source
        self.target = target
        self.lattice_images = tuple(lattice_images)
        self.holonomy_images = tuple(holonomy_images)
        if len(self.lattice_images) != source.dimension:
            raise GroupMismatch("need one image per lattice generator")
        if len(self.holonomy_images) != source.order - 1:
            raise GroupMismatch("need one image per non-identity holonomy representative")
        for x in self.lattice_images + self.holonomy_images:
            if x.n != n or sorted(x.perm) != list(range(n)):
                raise ArityMismatch("generator image has the wrong arity or an invalid permutation")
            if any(c.group != target for c in x.components):
                raise GroupMismatch("generator image component lies outside the target group")

    @classmethod
    def from_single(cls, psi: SingleMorphism) -> "NvMorphism":
        wrap = lambda x: SemidirectElement((x,), (0,))
        return cls(1, psi.source, psi.target, [wrap(x) for x in psi.lattice_images],
                   [wrap(x) for x in psi.holonomy_images])

    def image(self, kind: str, index: int) -> SemidirectElement:
        if kind == "t":
            return self.lattice_images[index]
        return self.holonomy_images[index - 1]

    def identity(self) -> SemidirectElement:
        return SemidirectElement.identity(self.target, self.n)

    def __call__(self, x: GroupElement) -> SemidirectElement:
        if x.group != self.source:
            raise GroupMismatch("argument is not in the source group")
        result = self.identity()
        for a, c in enumerate(x.translation):
            if c:
                result = result * (self.lattice_images[a] ** c)
        if x.holonomy:
            result = result * self.holonomy_images[x.holonomy - 1]
        return result

    def sigma(self, x: GroupElement) -> tuple:
        return self(x).perm

    def branch(self, i: int, x: GroupElement) -> GroupElement:
        return self(x).components[i]

    def __eq__(self, other):
        return (isinstance(other, NvMorphism) and self.n == other.n and self.source == other.source
                and self.target == other.target and self.lattice_images == other.lattice_images
                and self.holonomy_images == other.holonomy_images)


def verify_nv_morphism(phi: NvMorphism) -> bool:
    e = phi.identity()
    return all(evaluate_word(w, phi.image, e) == e for w in relators(phi.source))


# ---------------------------------------------------------------- sigma analysis

@dataclass
class Stabilizer:
    branch: int
    lattice: la.Lattice                  # S_i intersected with Z^d
    holonomy_reps: dict                  # holonomy index j -> element t h_j of S_i
    index_in_source: int                 # [Pi : S_i], the orbit size
    index_over_splitting: int            # [S_i : S]

    def generators(self, group: FlatGroup) -> list:
        gens = [group.translation(b) for b in self.lattice.basis]
        return gens + [x for j, x in sorted(self.holonomy_reps.items()) if j]


@dataclass
class SigmaAnalysis:
    n: int
    image_order: int                     # [Pi : S]
    image: frozenset
    orbits: list                         # sorted lists of branch indices; rep = smallest
    stabilizers: list                    # one Stabilizer per branch
    splitting_lattice: la.Lattice        # S intersected with Z^d
    splitting_holonomy: dict             # holonomy index j -> element t h_j of S
    lattice_index_of_splitting: int      # [Z^d : L_S]
    transporters: dict = field(default_factory=dict)  # branch j -> gamma with sigma_gamma(rep) = j

    def orbit_of(self, i: int) -> list:
        return next(o for o in self.orbits if i in o)

    def representative(self, i: int) -> int:
        return self.orbit_of(i)[0]

    def splitting_generators(self, group: FlatGroup) -> list:
        gens = [group.translation(b) for b in self.splitting_lattice.basis]
        return gens + [x for j, x in sorted(self.splitting_holonomy.items()) if j]

    def to_json(self):
        return {
            "index_of_splitting": self.image_order,
            "orbits": [[i + 1 for i in o] for o in self.orbits],
            "splitting_lattice": [list(c) for c in self.splitting_lattice.basis],
            "stabilizers": [{"branch": s.branch + 1,
                             "lattice": [list(c) for c in s.lattice.basis],
                             "index_in_source": s.index_in_source,
                             "index_over_splitting": s.index_over_splitting} for s in self.stabilizers],
        }


def _lattice_orbit(gen_perms, i: int, d: int):
    """BFS of branch i under the lattice; returns {p: v(p)} with sigma(t^v(p))(i) = p."""
    vec = {i: (0,) * d}
    queue = deque([i])
    while queue:
        p = queue.popleft()
        for k, g in enumerate(gen_perms):
            q = g[p]
            if q not in vec:
                vec[q] = tuple(x + (a == k) for a, x in enumerate(vec[p]))
                queue.append(q)
    return vec


def _lattice_image_group(gen_perms, n: int, d: int):
    """The image of Z^d in Sigma_n, each permutation with a lattice vector realizing it."""
    e = perm_identity(n)
    vec = {e: (0,) * d}
    queue = deque([e])
    while queue:
        p = queue.popleft()
        for k, g in enumerate(gen_perms):
            q = perm_compose(g, p)
            if q not in vec:
                vec[q] = tuple(x + (a == k) for a, x in enumerate(vec[p]))
                queue.append(q)
    return vec


def sigma_analysis(phi: NvMorphism) -> SigmaAnalysis:
    G = phi.source
    n, d = phi.n, G.dimension
    lattice_perms = [x.perm for x in phi.lattice_images]
    holonomy_perms = [phi.identity().perm] + [x.perm for x in phi.holonomy_images]
    image = perm_closure(lattice_perms + holonomy_perms[1:], n)
    order = len(image)

    orbits = []
    seen = set()
    for i in range(n):
        if i in seen:
            continue
        orbit = sorted({p[i] for p in image})
        seen.update(orbit)
        orbits.append(orbit)

    transporters = {}
    for orbit in orbits:
        rep = orbit[0]
        for j in orbit:
            transporters[j] = _transporter(phi, lattice_perms, holonomy_perms, rep, j)

    stabilizers = []
    for i in range(n):
        vec = _lattice_orbit(lattice_perms, i, d)
        gens = []
        for p, vp in vec.items():
            for k, g in enumerate(lattice_perms):
                q = g[p]
                gens.append(tuple(a + (c == k) - b for c, (a, b) in enumerate(zip(vp, vec[q]))))
        L = la.Lattice.from_generators(gens, d)
        reps = {}
        for j in range(G.order):
            p = holonomy_perms[j][i]
            if p in vec:
                reps[j] = G.element(j, la.vec_neg(vec[p]))
        orbit_size = len(next(o for o in orbits if i in o))
        lattice_idx = la.lattice_index(la.Lattice.full(d), L)
        if orbit_size * len(reps) != G.order * lattice_idx:
            raise MismatchDetected(f"[Pi:S_{i + 1}]", orbit_size, f"{G.order // len(reps)} * {lattice_idx}")
        for x in reps.values():
            if phi.sigma(x)[i] != i:
                raise MismatchDetected(f"stabilizer representative of branch {i + 1}", i, phi.sigma(x)[i])
        stabilizers.append(Stabilizer(i, L, reps, orbit_size, order // orbit_size))

    LS = stabilizers[0].lattice
    for s in stabilizers[1:]:
        LS = la.lattice_intersect(LS, s.lattice)
    ls_index = la.lattice_index(la.Lattice.full(d), LS)

    lattice_image = _lattice_image_group(lattice_perms, n, d)
    if len(lattice_image) != ls_index:
        raise MismatchDetected("[Z^d : S cap Z^d]", len(lattice_image), ls_index)
    splitting = {}
    for j in range(G.order):
        undo = perm_inverse(holonomy_perms[j])
        if undo in lattice_image:
            splitting[j] = G.element(j, lattice_image[undo])
    if order * len(splitting) != G.order * ls_index:
        raise MismatchDetected("[Pi:S]", order, f"{G.order // len(splitting)} * {ls_index}")
    return SigmaAnalysis(n, order, frozenset(image), orbits, stabilizers, LS, splitting, ls_index,
                         transporters)


def _transporter(phi, lattice_perms, holonomy_perms, rep: int, j: int) -> GroupElement:
    """Some gamma in the source with sigma_gamma(rep) = j, found by BFS on generators."""
    G = phi.source
    gens = [(G.generator("t", k), p) for k, p in enumerate(lattice_perms)]
    gens += [(G.element(h), holonomy_perms[h]) for h in range(1, G.order)]
    best = {rep: G.identity()}
    queue = deque([rep])
    while queue:
        p = queue.popleft()
        if p == j:
            break
        for x, perm in gens:
            q = perm[p]
            if q not in best:
                best[q] = x * best[p]
                queue.append(q)
    gamma = best[j]
    assert phi.sigma(gamma)[rep] == j
    return gamma


# ---------------------------------------------------------------- linear parts

def branch_lie_matrix(phi: NvMorphism, i: int, sublattice: la.Lattice | None = None,
                      multiplier: int | None = None, analysis: SigmaAnalysis | None = None):
    """(phi_i)_* read from pure-translation images of multiplier * (a sublattice of S_i cap Z^d)."""
    analysis = analysis or sigma_analysis(phi)
    Li = analysis.stabilizers[i].lattice
    L = Li if sublattice is None else sublattice
    if not Li.contains_lattice(L):
        raise ValueError("sublattice must lie in the stabilizer lattice")
    m = phi.target.order if multiplier is None else multiplier
    d = phi.source.dimension
    basis = [tuple(m * x for x in c) for c in L.basis]
    cols = []
    for b in basis:
        y = phi.branch(i, phi.source.translation(b))
        if not y.is_translation:
            raise ImageNotTranslation(f"branch {i + 1} image of t{b} is {y!r}")
        cols.append(y.translation)
    T = la.from_columns(cols, phi.target.dimension)
    return la.matmul(la.matrix(T), la.inverse(la.from_columns(basis, d)))


def conjugated_branch_lie_matrix(phi: NvMorphism, i: int, alpha: GroupElement,
                                 analysis: SigmaAnalysis | None = None):
    """Linear part of gamma -> alpha phi_i(gamma) alpha^-1, computed from images directly."""
    analysis = analysis or sigma_analysis(phi)
    L = analysis.stabilizers[i].lattice
    m = phi.target.order
    ainv = alpha.inverse()
    basis = [tuple(m * x for x in c) for c in L.basis]
    cols = []
    for b in basis:
        y = alpha * phi.branch(i, phi.source.translation(b)) * ainv
        if not y.is_translation:
            raise ImageNotTranslation(f"conjugated image of t{b} is {y!r}")
        cols.append(y.translation)
    T = la.from_columns(cols, phi.target.dimension)
    return la.matmul(la.matrix(T), la.inverse(la.from_columns(basis, phi.source.dimension)))


# ---------------------------------------------------------------- Reidemeister classes

@dataclass
class ClassTransversal:
    branch: int
    count: object                # int or math.inf
    lattice: la.Lattice          # alpha ~ beta iff alpha - beta lies here
    representatives: list        # canonical, sorted; empty when count is infinite

    def label(self, alpha) -> tuple:
        return la.canonical_rep(alpha, self.lattice)


def _require_torus_target(phi, psi):
    if not phi.target.is_torus:
        raise TargetHasHolonomy("class representatives are only enumerated for torus targets")
    if psi.source != phi.source or psi.target != phi.target:
        raise GroupMismatch("phi and psi must share source and target")


def twisted_difference(phi: NvMorphism, psi: SingleMorphism, i: int, gamma: GroupElement) -> tuple:
    """psi(gamma) - phi_i(gamma) in Z^d, for gamma fixing branch i (torus target)."""
    return la.vec_sub(psi(gamma).translation, phi.branch(i, gamma).translation)


def reidemeister_classes_torus(phi: NvMorphism, i: int, psi: SingleMorphism,
                               restrict_to_splitting: bool = False,
                               analysis: SigmaAnalysis | None = None) -> ClassTransversal:
    """Classes of Z^d modulo {psi(g) - phi_i(g)}, g over S_i (or over S when restricted)."""
    _require_torus_target(phi, psi)
    analysis = analysis or sigma_analysis(phi)
    if restrict_to_splitting:
        gens = analysis.splitting_generators(phi.source)
    else:
        gens = analysis.stabilizers[i].generators(phi.source)
    d = phi.target.dimension
    lattice = la.Lattice.from_generators([twisted_difference(phi, psi, i, g) for g in gens], d)
    full = la.Lattice.full(d)
    count = la.lattice_index(full, lattice)
    reps = [] if count == la.INF else la.quotient_transversal(full, lattice)
    return ClassTransversal(i, count, lattice, reps)


def transport_class(phi: NvMorphism, psi: SingleMorphism, alpha: GroupElement, gamma: GroupElement, i: int):
    """(alpha^gamma, j) with alpha^gamma = psi(gamma)^-1 alpha phi_i(gamma) and sigma_gamma(j) = i."""
    j = perm_inverse(phi.sigma(gamma))[i]
    return psi(gamma).inverse() * alpha * phi.branch(i, gamma), j


# ---------------------------------------------------------------- coincidence groups

@dataclass
class CoinFiber:
    branch: int
    kernel: la.Lattice          # lattice part of coin(tau_alpha phi_i, psi)
    image_size: int             # |u_i(coin)| in S_i / S
    fiber: int                  # [S_i : S] / image_size
    contained: bool             # coin subset of S

    def to_json(self):
        return {"branch": self.branch + 1, "kernel": [list(c) for c in self.kernel.basis],
                "image_size": self.image_size, "fiber": self.fiber, "contained": self.contained}


def coin_and_fiber(phi: NvMorphism, psi: SingleMorphism, i: int, alpha: GroupElement,
                   analysis: SigmaAnalysis | None = None, branch_matrix=None, psi_matrix=None) -> CoinFiber:
    from .groups import lie_matrix

    analysis = analysis or sigma_analysis(phi)
    stab = analysis.stabilizers[i]
    Mi = branch_matrix if branch_matrix is not None else branch_lie_matrix(phi, i, analysis=analysis)
    P = psi_matrix if psi_matrix is not None else lie_matrix(psi)
    X = la.mat_sub(P, la.matmul(la.matrix(alpha.rotation), Mi))
    K = la.kernel_lattice(X, stab.lattice)
    coin_gens = [phi.source.translation(b) for b in K.basis]

    if phi.target.is_torus and phi.source.order > 1:
        # non-lattice part: t^r s_j with (psi_* - M_i) r = phi_i(s_j) - psi(s_j), r in L_i
        B = stab.lattice.matrix()
        D = la.to_int(la.matmul(la.mat_sub(P, Mi), B))
        for j, s in sorted(stab.holonomy_reps.items()):
            if not j:
                continue
            rhs = la.vec_neg(twisted_difference(phi, psi, i, s))
            coords = la.solve_integer(D, rhs)
            if coords is not None:
                r = la.matvec(B, coords)
                coin_gens.append(phi.source.translation(r) * s)

    image = perm_closure([phi.sigma(g) for g in coin_gens], phi.n)
    size = len(image)
    if phi.source.order == 1:
        lattice_size = la.lattice_index(la.lattice_sum(K, analysis.splitting_lattice), analysis.splitting_lattice)
        if lattice_size != size:
            raise MismatchDetected(f"|u_{i + 1}(coin)|", lattice_size, size)
    fiber, rem = divmod(stab.index_over_splitting, size)
    if rem:
        raise MismatchDetected(f"fiber size over branch {i + 1}", "integer", f"{stab.index_over_splitting}/{size}")
    return CoinFiber(i, K, size, fiber, size == 1)
