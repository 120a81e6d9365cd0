"""Brute-force ground truth on tori: affine n-valued lifts, their coincidence points, and cross-checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg as la
from .errors import DegenerateBranch, MismatchDetected, NotEquivariant, NotNValued
from .groups import FlatGroup, SingleMorphism, ValidationReport
from .invariants import class_label, compute_invariants
from .morphism import (NvMorphism, SemidirectElement, reidemeister_classes_torus, sigma_analysis,
                       transport_class)


@dataclass(frozen=True)
class AffineNValuedMap:
    """Branch lifts x -> M_i x + c_i of an n-valued torus map."""

    dimension: int
    branches: tuple  # of (M, c)

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple((la.matrix(M), la.vector(c)) for M, c in self.branches))

    @property
    def n(self) -> int:
        return len(self.branches)

    def __call__(self, i: int, x):
        M, c = self.branches[i]
        return la.vec_add(la.matvec(M, x), c)


@dataclass(frozen=True)
class AffineMap:
    """Lift x -> G x + b of a single-valued torus map; G must be integral."""

    linear: tuple
    offset: tuple

    def __post_init__(self):
        object.__setattr__(self, "linear", la.matrix(self.linear))
        object.__setattr__(self, "offset", la.vector(self.offset))
        if not la.is_integral(self.linear):
            raise ValueError("the single-valued map needs an integer linear part")

    def __call__(self, x):
        return la.vec_add(la.matvec(self.linear, x), self.offset)


def _integral(v) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def equivariance_data(f: AffineNValuedMap):
    """Per lattice generator: (perm, shifts) with f_i(x + e) = shifts[i] + f_{perm^-1(i)}(x)."""
    d, n = f.dimension, f.n
    data = []
    for k in range(d):
        e = tuple(int(a == k) for a in range(d))
        inv = [None] * n
        shifts = [None] * n
        for i, (Mi, ci) in enumerate(f.branches):
            moved = la.vec_add(la.matvec(Mi, e), ci)
            for j, (Mj, cj) in enumerate(f.branches):
                if Mi == Mj and _integral(la.vec_sub(moved, cj)):
                    inv[i] = j
                    shifts[i] = tuple(int(x) for x in la.vec_sub(moved, cj))
                    break
            if inv[i] is None:
                raise NotEquivariant(f"f_{i + 1}(x + e_{k + 1}) is not an integer shift of any branch",
                                     generator=k, branch=i)
        if sorted(inv) != list(range(n)):
            raise NotEquivariant(f"translation by e_{k + 1} does not permute the branches", generator=k)
        perm = [0] * n
        for i, j in enumerate(inv):
            perm[j] = i
        data.append((tuple(perm), tuple(shifts)))
    return data


def check_n_valued(f: AffineNValuedMap):
    for i in range(f.n):
        for j in range(i + 1, f.n):
            (Mi, ci), (Mj, cj) = f.branches[i], f.branches[j]
            D, c = la.mat_sub(Mi, Mj), la.vec_sub(ci, cj)
            x = la.affine_lattice_witness(D, c)
            if x is not None:
                raise NotNValued(f"branches {i + 1} and {j + 1} meet on the torus", pair=(i, j), point=x)


def validate_map(f: AffineNValuedMap, strict: bool = True) -> ValidationReport:
    """Pairwise disjointness, then equivariance; raises unless strict is False."""
    report = ValidationReport()
    try:
        check_n_valued(f)
    except NotNValued as exc:
        if strict:
            raise
        report.fail("n-valued", str(exc), {"pair": [p + 1 for p in exc.pair], "point": exc.point})
    try:
        equivariance_data(f)
    except NotEquivariant as exc:
        if strict:
            raise
        report.fail("equivariance", str(exc), {"generator": exc.generator, "branch": exc.branch})
    return report


def derive_morphism(f: AffineNValuedMap, g: AffineMap):
    check_n_valued(f)
    T = FlatGroup.torus(f.dimension)
    images = [SemidirectElement(tuple(T.translation(s) for s in shifts), perm)
              for perm, shifts in equivariance_data(f)]
    phi = NvMorphism(f.n, T, T, images)
    psi = SingleMorphism(T, T, [T.translation(c) for c in la.columns(la.to_int(g.linear))])
    return phi, psi


# ---------------------------------------------------------------- enumeration

@dataclass(frozen=True)
class CoincidencePoint:
    point: tuple
    branch: int
    alpha: tuple
    label: tuple   # (orbit representative, canonical alpha)
    index: int

    def to_json(self):
        return {"point": [str(x) for x in self.point], "branch": self.branch + 1,
                "alpha": list(self.alpha), "label": class_label(*self.label), "index": self.index}


@dataclass
class CoincidenceSet:
    points: list

    def __len__(self):
        return len(self.points)

    def classes(self) -> dict:
        out = {}
        for p in self.points:
            out.setdefault(p.label, []).append(p)
        return out

    def to_json(self):
        return [p.to_json() for p in self.points]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def enumerate_coincidences(f: AffineNValuedMap, g: AffineMap, phi=None, psi=None, analysis=None) -> CoincidenceSet:
    if phi is None:
        phi, psi = derive_morphism(f, g)
    analysis = analysis or sigma_analysis(phi)
    G = g.linear
    for i, (Mi, _) in enumerate(f.branches):
        if la.det(la.mat_sub(G, Mi)) == 0:
            raise DegenerateBranch(i)

    class_lattices = {o[0]: reidemeister_classes_torus(phi, o[0], psi, analysis=analysis).lattice
                      for o in analysis.orbits}

    def label_at(x):
        """Annotate a torus point from scratch: find its branch, then transport to the orbit rep."""
        gx = g(x)
        hits = [j for j in range(f.n) if _integral(la.vec_sub(gx, f(j, x)))]
        if len(hits) != 1:
            raise MismatchDetected(f"branches through coincidence {x}", 1, len(hits))
        j = hits[0]
        alpha = tuple(int(a) for a in la.vec_sub(gx, f(j, x)))
        rep = analysis.representative(j)
        gamma = analysis.transporters[j]
        moved, k = transport_class(phi, psi, phi.target.translation(alpha), gamma, j)
        if k != rep:
            raise MismatchDetected("transport target branch", rep, k)
        return j, alpha, (rep, la.canonical_rep(moved.translation, class_lattices[rep]))

    found = {}
    for orbit in analysis.orbits:
        rep = orbit[0]
        M, c = f.branches[rep]
        D = la.mat_sub(G, M)
        index = _sign(la.det(D))
        x0, lattice = la.affine_solution_coset(D, la.vec_sub(g.offset, c))
        q = lattice.denominator
        coarse = la.Lattice.full(f.dimension).scaled(q)
        solutions = lattice.integer_lattice
        for w in la.quotient_transversal(solutions, la.lattice_intersect(solutions, coarse)):
            lift = la.vec_add(x0, tuple(Fraction(t, q) for t in w))
            point = la.frac_vector(lift)
            direct = la.vec_sub(g(lift), f(rep, lift))
            if not _integral(direct):
                raise MismatchDetected(f"lift of coincidence {point}", "integral shift", direct)
            direct_label = (rep, la.canonical_rep(direct, class_lattices[rep]))
            j, alpha, label = label_at(point)
            if label != direct_label:
                raise MismatchDetected(f"class label of coincidence {point}", direct_label, label)
            if point in found and found[point].label != label:
                raise MismatchDetected(f"class label of coincidence {point}", found[point].label, label)
            found[point] = CoincidencePoint(point, j, alpha, label, index)
    return CoincidenceSet(sorted(found.values(), key=lambda p: (p.label, p.point)))


# ---------------------------------------------------------------- comparison with the formulas

@dataclass
class OracleRecord:
    coincidences: int
    nonempty_classes: int
    essential_classes: int
    index_sum: int
    expected_points: int
    L: int
    R: object
    N: int
    checks: dict = field(default_factory=dict)

    def to_json(self):
        return {"coincidences": self.coincidences, "nonempty_classes": self.nonempty_classes,
                "essential_classes": self.essential_classes, "index_sum": self.index_sum,
                "expected_points": self.expected_points,
                "L": self.L, "R": "inf" if self.R == la.INF else self.R, "N": self.N,
                "checks": dict(self.checks)}


def oracle_report(f: AffineNValuedMap, g: AffineMap, report=None):
    """Enumerate coincidences and compare with the algebraic invariants; raises MismatchDetected."""
    phi, psi = derive_morphism(f, g)
    analysis = sigma_analysis(phi)
    coins = enumerate_coincidences(f, g, phi, psi, analysis)
    report = report or compute_invariants(phi, psi)
    classes = coins.classes()
    index_sum = sum(p.index for p in coins.points)
    essential = sum(1 for pts in classes.values() if sum(p.index for p in pts) != 0)
    expected = 0
    for orbit in analysis.orbits:
        rep = orbit[0]
        Li = analysis.stabilizers[rep].lattice
        det = la.det(la.mat_sub(g.linear, f.branches[rep][0]))
        expected += la.lattice_index(la.Lattice.full(f.dimension), Li) * abs(det)
    rec = OracleRecord(len(coins), len(classes), essential, index_sum, int(expected),
                       report.L, report.R, report.N)

    def check(name, ok, want, got):
        rec.checks[name] = bool(ok)
        if not ok:
            raise MismatchDetected(name, want, got)

    check("essential classes = N", essential == report.N, report.N, essential)
    check("index sum = L", index_sum == report.L, report.L, index_sum)
    check("nonempty classes <= R", len(classes) <= report.R, report.R, len(classes))
    check("#Coin >= N", len(coins) >= report.N, report.N, len(coins))
    check("#Coin = point count from determinants", len(coins) == expected, expected, len(coins))
    check("#Coin = N = R", len(coins) == report.N == report.R, (report.N, report.R), len(coins))
    return coins, rec, report


def homotopic_offsets(f: AffineNValuedMap, shift) -> AffineNValuedMap:
    """Move every branch by the same rational vector; equivariance shifts are unchanged."""
    return AffineNValuedMap(f.dimension, [(M, la.vec_add(c, la.vector(shift))) for M, c in f.branches])

