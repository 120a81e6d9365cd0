"""Lefschetz, Reidemeister and Nielsen numbers from linear parts, plus the cover-averaging cross-check."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg as la
from .errors import MismatchDetected, NonIntegralResult
from .groups import SingleMorphism, lie_matrix, trivial_morphism
from .morphism import (NvMorphism, SigmaAnalysis, branch_lie_matrix, coin_and_fiber,
                       reidemeister_classes_torus, sigma_analysis)

INF = la.INF


def _integer(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise NonIntegralResult(f"{what} evaluated to {value}")
    return int(value)


def fmt_count(x) -> str:
    return "inf" if x == INF else str(x)


@dataclass
class DeterminantRow:
    branch: int
    holonomy: int
    det: Fraction


@dataclass
class Context:
    """Everything the formulas need, computed once per (phi, psi)."""

    phi: NvMorphism
    psi: SingleMorphism
    analysis: SigmaAnalysis
    psi_matrix: tuple
    branch_matrices: list

    @classmethod
    def build(cls, phi: NvMorphism, psi: SingleMorphism) -> "Context":
        if psi.source != phi.source or psi.target != phi.target:
            raise ValueError("phi and psi must share source and target")
        analysis = sigma_analysis(phi)
        P = lie_matrix(psi)
        Ms = [branch_lie_matrix(phi, i, analysis=analysis) for i in range(phi.n)]
        return cls(phi, psi, analysis, P, Ms)


def determinant_table(ctx: Context) -> list:
    rows = []
    for i, Mi in enumerate(ctx.branch_matrices):
        for j, A in enumerate(ctx.phi.target.rotation(k) for k in range(ctx.phi.target.order)):
            X = la.mat_sub(ctx.psi_matrix, la.matmul(A, Mi))
            rows.append(DeterminantRow(i, j, la.det(X)))
    return rows


def _context(phi, psi, ctx):
    return ctx if ctx is not None else Context.build(phi, psi)


def lefschetz(phi: NvMorphism, psi: SingleMorphism, ctx: Context | None = None) -> int:
    ctx = _context(phi, psi, ctx)
    total = sum((r.det for r in determinant_table(ctx)), Fraction(0))
    return _integer(total / phi.source.order, "Lefschetz number")


def reidemeister(phi: NvMorphism, psi: SingleMorphism, ctx: Context | None = None):
    ctx = _context(phi, psi, ctx)
    rows = determinant_table(ctx)
    if any(r.det == 0 for r in rows):
        return INF
    total = sum((abs(r.det) for r in rows), Fraction(0))
    return _integer(total / phi.source.order, "Reidemeister number")


def nielsen(phi: NvMorphism, psi: SingleMorphism, ctx: Context | None = None) -> int:
    ctx = _context(phi, psi, ctx)
    total = sum((abs(r.det) for r in determinant_table(ctx)), Fraction(0))
    return _integer(total / phi.source.order, "Nielsen number")


# ---------------------------------------------------------------- averaging over the splitting cover

@dataclass
class CoverInvariants:
    branch: int
    L: int
    R: object
    N: int
    upstairs_classes: object = None   # enumerated count, torus targets only

    def to_json(self):
        out = {"branch": self.branch + 1, "L": self.L, "R": fmt_count(self.R), "N": self.N}
        if self.upstairs_classes is not None:
            out["upstairs_classes"] = fmt_count(self.upstairs_classes)
        return out


@dataclass
class CoinRow:
    branch: int
    alpha: tuple                  # class representative (torus) or holonomy coset index
    essential: bool
    kernel_rank: int
    image_size: int
    fiber: int
    contained: bool

    def to_json(self):
        return {"branch": self.branch + 1, "alpha": list(self.alpha), "essential": self.essential,
                "kernel_rank": self.kernel_rank, "image_size": self.image_size,
                "fiber": self.fiber, "contained": self.contained}


@dataclass
class AveragingBlock:
    index_of_splitting: int
    covers: list
    L_average: Fraction
    R_average: object
    N_average: Fraction
    L: int
    R: object
    N: int
    coin_rows: list
    R_condition: bool
    N_condition: bool
    R_equal: bool
    N_equal: bool

    def to_json(self):
        return {
            "index_of_splitting": self.index_of_splitting,
            "covers": [c.to_json() for c in self.covers],
            "L_average": str(self.L_average),
            "R_average": fmt_count(self.R_average) if self.R_average == INF else str(self.R_average),
            "N_average": str(self.N_average),
            "R_equality": self.R_equal,
            "R_condition": self.R_condition,
            "N_equality": self.N_equal,
            "N_condition": self.N_condition,
            "coin": [r.to_json() for r in self.coin_rows],
        }


def _cover_invariants(ctx: Context, i: int) -> CoverInvariants:
    """Single-valued formulas for phi_i, psi restricted to S, measured in the basis of S cap Z^d."""
    phi, a = ctx.phi, ctx.analysis
    LS = a.splitting_lattice
    P = lie_matrix(ctx.psi, sublattice=LS)
    Mi = branch_lie_matrix(phi, i, sublattice=LS, analysis=a)
    B = LS.matrix()
    dets = []
    for k in range(phi.target.order):
        X = la.mat_sub(P, la.matmul(phi.target.rotation(k), Mi))
        dets.append(la.det(la.matmul(X, B)))
    cover_order = len(a.splitting_holonomy)
    L = _integer(sum(dets, Fraction(0)) / cover_order, f"cover Lefschetz number of branch {i + 1}")
    N = _integer(sum(map(abs, dets), Fraction(0)) / cover_order, f"cover Nielsen number of branch {i + 1}")
    R = INF if any(x == 0 for x in dets) else N
    return CoverInvariants(i, L, R, N)


def _coin_rows(ctx: Context) -> list:
    phi, psi, a = ctx.phi, ctx.psi, ctx.analysis
    target = phi.target
    rows = []
    for i, Mi in enumerate(ctx.branch_matrices):
        if target.is_torus:
            classes = reidemeister_classes_torus(phi, i, psi, analysis=a)
            det = la.det(la.mat_sub(ctx.psi_matrix, Mi))
            # infinitely many classes: the kernel does not depend on alpha, one row suffices
            alphas = classes.representatives or [(0,) * target.dimension]
            for alpha in alphas:
                cf = coin_and_fiber(phi, psi, i, target.translation(alpha), analysis=a,
                                    branch_matrix=Mi, psi_matrix=ctx.psi_matrix)
                rows.append(CoinRow(i, tuple(alpha), det != 0, cf.kernel.rank, cf.image_size,
                                    cf.fiber, cf.contained))
        else:
            for k in range(target.order):
                X = la.mat_sub(ctx.psi_matrix, la.matmul(target.rotation(k), Mi))
                cf = coin_and_fiber(phi, psi, i, target.element(k), analysis=a,
                                    branch_matrix=Mi, psi_matrix=ctx.psi_matrix)
                rows.append(CoinRow(i, (k,), la.det(X) != 0, cf.kernel.rank, cf.image_size,
                                    cf.fiber, cf.contained))
    return rows


def averaging_report(phi: NvMorphism, psi: SingleMorphism, ctx: Context | None = None,
                     invariants: tuple | None = None) -> AveragingBlock:
    ctx = _context(phi, psi, ctx)
    a = ctx.analysis
    if invariants is None:
        invariants = (lefschetz(phi, psi, ctx), reidemeister(phi, psi, ctx), nielsen(phi, psi, ctx))
    L, R, N = invariants
    k = a.image_order
    covers = [_cover_invariants(ctx, i) for i in range(phi.n)]

    if phi.target.is_torus:
        downstairs = 0
        for orbit in a.orbits:
            c = reidemeister_classes_torus(phi, orbit[0], psi, analysis=a)
            downstairs = INF if c.count == INF else downstairs + c.count
        if downstairs != R:
            raise MismatchDetected("Reidemeister number from class enumeration", R, downstairs)
        for c in covers:
            up = reidemeister_classes_torus(phi, c.branch, psi, restrict_to_splitting=True, analysis=a)
            if up.count != c.R:
                raise MismatchDetected(f"cover Reidemeister number of branch {c.branch + 1}", c.R, up.count)
            c.upstairs_classes = up.count

    L_avg = Fraction(sum(c.L for c in covers), k)
    N_avg = Fraction(sum(c.N for c in covers), k)
    R_avg = INF if any(c.R == INF for c in covers) else Fraction(sum(c.R for c in covers), k)
    if L_avg != L:
        raise MismatchDetected("Lefschetz averaging identity", L, L_avg)
    if R != INF and R_avg != INF and R < R_avg:
        raise MismatchDetected("Reidemeister averaging inequality", f">= {R_avg}", R)
    if R == INF and R_avg != INF:
        raise MismatchDetected("Reidemeister averaging inequality", INF, R_avg)
    if N < N_avg:
        raise MismatchDetected("Nielsen averaging inequality", f">= {N_avg}", N)

    rows = _coin_rows(ctx)
    if phi.target.is_torus and R != INF:
        for c in covers:
            fibers = sum(r.fiber for r in rows if r.branch == c.branch)
            if fibers != c.R:
                raise MismatchDetected(f"summed fibers over branch {c.branch + 1}", c.R, fibers)
    R_condition = R_avg == INF or all(r.contained for r in rows)
    N_condition = all(r.contained for r in rows if r.essential)
    R_equal = R == R_avg
    N_equal = N == N_avg
    if R_equal != R_condition:
        raise MismatchDetected("Reidemeister equality criterion", R_condition, R_equal)
    if N_equal != N_condition:
        raise MismatchDetected("Nielsen equality criterion", N_condition, N_equal)
    return AveragingBlock(k, covers, L_avg, R_avg, N_avg, L, R, N, rows,
                          R_condition, N_condition, R_equal, N_equal)


# ---------------------------------------------------------------- report

@dataclass
class InvariantReport:
    L: int
    R: object
    N: int
    determinants: list
    analysis: SigmaAnalysis
    averaging: AveragingBlock | None = None
    classes: list = field(default_factory=list)

    def to_json(self):
        return {
            "L": self.L,
            "R": fmt_count(self.R) if self.R == INF else self.R,
            "N": self.N,
            "sigma": self.analysis.to_json(),
            "determinants": [{"branch": r.branch + 1, "holonomy": r.holonomy, "det": str(r.det)}
                             for r in self.determinants],
            "averaging": self.averaging.to_json() if self.averaging else None,
            "classes": self.classes,
        }

    def to_table(self) -> str:
        lines = [f"L = {self.L}", f"R = {fmt_count(self.R)}", f"N = {self.N}",
                 f"[Pi:S] = {self.analysis.image_order}",
                 "orbits: " + " ".join("{" + ",".join(str(i + 1) for i in o) + "}" for o in self.analysis.orbits),
                 "", "branch  holonomy  det"]
        lines += [f"{r.branch + 1:>6}  {r.holonomy:>8}  {r.det}" for r in self.determinants]
        if self.averaging:
            av = self.averaging
            lines += ["", "branch  L(cover)  R(cover)  N(cover)"]
            lines += [f"{c.branch + 1:>6}  {c.L:>8}  {fmt_count(c.R):>8}  {c.N:>8}" for c in av.covers]
            lines += [f"L average {av.L_average}   R average {fmt_count(av.R_average) if av.R_average == INF else av.R_average}"
                      f"   N average {av.N_average}",
                      f"R equality {av.R_equal} (condition {av.R_condition}); "
                      f"N equality {av.N_equal} (condition {av.N_condition})"]
        if self.classes:
            lines += ["", "class           index"]
            lines += [f"{c['label']:<16}{c['index']:>5}" for c in self.classes]
        return "\n".join(lines)


def class_table(ctx: Context) -> list:
    """Torus targets: one entry per Reidemeister class, labelled (orbit representative, alpha)."""
    phi, psi, a = ctx.phi, ctx.psi, ctx.analysis
    if not phi.target.is_torus:
        return []
    out = []
    for orbit in a.orbits:
        rep = orbit[0]
        c = reidemeister_classes_torus(phi, rep, psi, analysis=a)
        det = la.det(la.mat_sub(ctx.psi_matrix, ctx.branch_matrices[rep]))
        sign = (det > 0) - (det < 0)
        for alpha in c.representatives:
            out.append({"label": class_label(rep, alpha), "branch": rep + 1,
                        "alpha": list(alpha), "index": sign})
    return out


def class_label(rep: int, alpha) -> str:
    return f"({rep + 1}, ({','.join(map(str, alpha))}))"


def compute_invariants(phi: NvMorphism, psi: SingleMorphism, with_averaging: bool = True) -> InvariantReport:
    ctx = Context.build(phi, psi)
    L, R, N = lefschetz(phi, psi, ctx), reidemeister(phi, psi, ctx), nielsen(phi, psi, ctx)
    if not 0 <= N <= R:
        raise MismatchDetected("0 <= N <= R", f"N={N} <= R={R}", "violated")
    avg = averaging_report(phi, psi, ctx, (L, R, N)) if with_averaging else None
    return InvariantReport(L, R, N, determinant_table(ctx), ctx.analysis, avg, class_table(ctx))


def root_invariants(phi: NvMorphism, with_averaging: bool = True) -> InvariantReport:
    return compute_invariants(phi, trivial_morphism(phi.source, phi.target), with_averaging)
