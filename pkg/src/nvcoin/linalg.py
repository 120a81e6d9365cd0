"""Exact integer/rational linear algebra and lattice arithmetic.

Matrices are tuples of row tuples; vectors are tuples.  Entries are ``int``
or :class:`fractions.Fraction`.  Nothing here uses floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce

from .errors import InfiniteIndex, NotASublattice, SingularMatrix

INF = math.inf


# ---------------------------------------------------------------- basics

def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


def matrix(rows) -> tuple:
    return tuple(tuple(as_fraction(x) for x in row) for row in rows)


def int_matrix(rows) -> tuple:
    out = []
    for row in rows:
        r = []
        for x in row:
            x = as_fraction(x)
            if x.denominator != 1:
                raise ValueError(f"non-integer entry {x}")
            r.append(int(x))
        out.append(tuple(r))
    return tuple(out)


def vector(entries) -> tuple:
    return tuple(as_fraction(x) for x in entries)


def int_vector(entries) -> tuple:
    return int_matrix([entries])[0]


def shape(A):
    return len(A), (len(A[0]) if A else 0)


def identity(n: int) -> tuple:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zeros(m: int, n: int) -> tuple:
    return tuple((0,) * n for _ in range(m))


def transpose(A) -> tuple:
    return tuple(zip(*A))


def from_columns(cols, nrows: int) -> tuple:
    if not cols:
        return tuple(() for _ in range(nrows))
    return tuple(tuple(c[i] for c in cols) for i in range(nrows))


def columns(A) -> tuple:
    return tuple(zip(*A)) if A and A[0] else ()


def matmul(A, B) -> tuple:
    Bt = transpose(B)
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def matvec(A, v) -> tuple:
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def mat_add(A, B) -> tuple:
    return tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(A, B))


def mat_sub(A, B) -> tuple:
    return tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(A, B))


def mat_scale(c, A) -> tuple:
    return tuple(tuple(c * a for a in row) for row in A)


def vec_add(u, v) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vec_neg(u) -> tuple:
    return tuple(-a for a in u)


def is_integral(A) -> bool:
    return all(Fraction(x).denominator == 1 for row in A for x in row)


def to_int(A) -> tuple:
    return tuple(tuple(int(x) for x in row) for row in A)


def denominator_lcm(entries) -> int:
    return reduce(math.lcm, (Fraction(x).denominator for x in entries), 1)


def clear_row_denominators(A) -> tuple:
    """Scale each row by the lcm of its denominators; same kernel, integer entries."""
    out = []
    for row in A:
        q = denominator_lcm(row)
        out.append(tuple(int(x * q) for x in row))
    return tuple(out)


def det(A) -> Fraction:
    n = len(A)
    if n == 0:
        return Fraction(1)
    M = [[Fraction(x) for x in row] for row in A]
    sign = 1
    result = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            sign = -sign
        piv = M[c][c]
        result *= piv
        for r in range(c + 1, n):
            f = M[r][c] / piv
            if f:
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return sign * result


def inverse(A) -> tuple:
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            raise SingularMatrix("matrix is singular")
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return tuple(tuple(row[n:]) for row in M)


def rank(A) -> int:
    M = [[Fraction(x) for x in row] for row in A]
    m, n = shape(A)
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        for i in range(r + 1, m):
            f = M[i][c] / M[r][c]
            if f:
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
    return r


def solve_rational(A, b):
    """Some x with A x = b over Q, or None when the system is inconsistent."""
    m, n = len(A), len(A[0]) if A else 0
    M = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        M[r] = [x / piv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * bb for a, bb in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    if any(M[i][n] != 0 for i in range(r, m)):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = M[i][n]
    return tuple(x)


def unimodular(U) -> bool:
    return abs(det(U)) == 1 and is_integral(U)


# ---------------------------------------------------------------- normal forms

def xgcd(a: int, b: int):
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hermite_normal_form(M):
    """Column-style HNF: returns (H, U) with H = M U and U unimodular.

    The nonzero columns of H come first.  Column j has its pivot (a positive
    entry) in row p_j with zeros above it, p_0 < p_1 < ..., and every entry to
    the left of a pivot in the pivot row lies in [0, pivot).
    """
    m, n = shape(M)
    H = [list(map(int, row)) for row in M]
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def combine(j, k, a, b, c, d):
        # (col_j, col_k) <- (a col_j + b col_k, c col_j + d col_k)
        for X in (H, U):
            for row in X:
                x, y = row[j], row[k]
                row[j], row[k] = a * x + b * y, c * x + d * y

    def addmul(dst, src, q):
        for X in (H, U):
            for row in X:
                row[dst] += q * row[src]

    def negate(j):
        for X in (H, U):
            for row in X:
                row[j] = -row[j]

    j = 0
    for p in range(m):
        if j == n:
            break
        for k in range(j + 1, n):
            b = H[p][k]
            if b == 0:
                continue
            a = H[p][j]
            g, s, t = xgcd(a, b)
            combine(j, k, s, t, -b // g, a // g)
        if H[p][j] == 0:
            continue
        if H[p][j] < 0:
            negate(j)
        piv = H[p][j]
        for left in range(j):
            q = H[p][left] // piv
            if q:
                addmul(left, j, -q)
        j += 1
    return to_tuple(H), to_tuple(U)


def to_tuple(rows) -> tuple:
    return tuple(tuple(r) for r in rows)


def smith_normal_form(M):
    """Return (D, U, V) with D = U M V diagonal, d_1 | d_2 | ..., d_k >= 0."""
    m, n = shape(M)
    D = [list(map(int, row)) for row in M]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(a, b):
        D[a], D[b] = D[b], D[a]
        U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        for X in (D, V):
            for row in X:
                row[a], row[b] = row[b], row[a]

    def row_addmul(dst, src, q):
        D[dst] = [x + q * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def col_addmul(dst, src, q):
        for X in (D, V):
            for row in X:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            piv = D[t][t]
            clean = True
            for i in range(t + 1, m):
                q = D[i][t] // piv
                if q:
                    row_addmul(i, t, -q)
                if D[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = D[t][j] // piv
                if q:
                    col_addmul(j, t, -q)
                if D[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % piv), None)
            if bad is None:
                break
            row_addmul(t, bad[0], 1)
        if t < m and t < n and D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return to_tuple(D), to_tuple(U), to_tuple(V)


def integer_kernel(M) -> tuple:
    """Basis (as column tuples) of {x in Z^n : M x = 0} for a rational matrix M."""
    m, n = shape(M)
    if n == 0:
        return ()
    Mi = clear_row_denominators(M) if m else zeros(0, n)
    if m == 0:
        return columns(identity(n))
    H, U = hermite_normal_form(Mi)
    r = sum(1 for c in columns(H) if any(c))
    return tuple(col for col in columns(U)[r:])


def solve_integer(M, b):
    """Some integer x with M x = b (M integer, b rational), or None."""
    m, n = shape(M)
    b = tuple(Fraction(x) for x in b)
    if any(x.denominator != 1 for x in b):
        return None
    if n == 0:
        return () if all(x == 0 for x in b) else None
    H, U = hermite_normal_form(M)
    y = [0] * n
    residual = [int(x) for x in b]
    j = 0
    for p in range(m):
        if j < n and H[p][j] != 0 and all(H[q][j] == 0 for q in range(p)):
            q, rem = divmod(residual[p], H[p][j])
            if rem:
                return None
            y[j] = q
            for r in range(m):
                residual[r] -= q * H[r][j]
            j += 1
        elif residual[p] != 0:
            return None
    if any(residual):
        return None
    return matvec(U, y)


# ---------------------------------------------------------------- lattices

@dataclass(frozen=True)
class Lattice:
    """A subgroup of Z^d, stored by its canonical column-HNF basis."""

    dimension: int
    basis: tuple  # tuple of column vectors (tuples of int)

    @classmethod
    def from_generators(cls, generators, dimension: int) -> "Lattice":
        gens = [tuple(int(Fraction(x)) if Fraction(x).denominator == 1 else _bad(x) for x in g)
                for g in generators]
        if not gens:
            return cls(dimension, ())
        H, _ = hermite_normal_form(from_columns(gens, dimension))
        return cls(dimension, tuple(c for c in columns(H) if any(c)))

    @classmethod
    def full(cls, d: int) -> "Lattice":
        return cls(d, columns(identity(d)))

    @classmethod
    def zero(cls, d: int) -> "Lattice":
        return cls(d, ())

    @classmethod
    def diagonal(cls, entries) -> "Lattice":
        d = len(entries)
        return cls.from_generators([tuple(e if i == k else 0 for i in range(d))
                                    for k, e in enumerate(entries)], d)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def pivots(self) -> tuple:
        return tuple(next(i for i, x in enumerate(c) if x) for c in self.basis)

    def matrix(self) -> tuple:
        return from_columns(self.basis, self.dimension)

    def coordinates(self, v):
        """Integer coordinates of v in the basis, or None if v is not in the lattice."""
        v = [Fraction(x) for x in v]
        if any(x.denominator != 1 for x in v):
            return None
        v = [int(x) for x in v]
        coords = []
        for col, p in zip(self.basis, self.pivots):
            if any(v[i] for i in range(p)):
                return None
            q, rem = divmod(v[p], col[p])
            if rem:
                return None
            coords.append(q)
            v = [a - q * b for a, b in zip(v, col)]
        if any(v):
            return None
        return tuple(coords)

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(c in self for c in other.basis)

    def scaled(self, k: int) -> "Lattice":
        return Lattice.from_generators([tuple(k * x for x in c) for c in self.basis], self.dimension)

    def image(self, M) -> "Lattice":
        """Image lattice under an integer-valued linear map (raises on non-integral images)."""
        return Lattice.from_generators([matvec(M, c) for c in self.basis], len(M))

    def __str__(self) -> str:
        if not self.basis:
            return "0"
        return "<" + ", ".join("(" + ",".join(map(str, c)) + ")" for c in self.basis) + ">"


def _bad(x):
    raise ValueError(f"lattice generator has non-integer entry {x}")


def lattice_index(ambient: Lattice, sub: Lattice):
    """[ambient : sub] as an int, or INF when sub has smaller rank."""
    if not ambient.contains_lattice(sub):
        raise NotASublattice(f"{sub} is not contained in {ambient}")
    if sub.rank < ambient.rank:
        return INF
    C = from_columns([ambient.coordinates(c) for c in sub.basis], ambient.rank)
    return abs(int(det(C)))


def lattice_sum(L1: Lattice, L2: Lattice) -> Lattice:
    _same_dim(L1, L2)
    return Lattice.from_generators(L1.basis + L2.basis, L1.dimension)


def lattice_intersect(L1: Lattice, L2: Lattice) -> Lattice:
    _same_dim(L1, L2)
    if not L1.basis or not L2.basis:
        return Lattice.zero(L1.dimension)
    d = L1.dimension
    B = from_columns(L1.basis + tuple(vec_neg(c) for c in L2.basis), d)
    gens = []
    for k in integer_kernel(B):
        x = k[:L1.rank]
        gens.append(matvec(L1.matrix(), x))
    return Lattice.from_generators(gens, d)


def _same_dim(L1, L2):
    if L1.dimension != L2.dimension:
        raise ValueError("lattices live in different ambient dimensions")


def canonical_rep(v, sub: Lattice) -> tuple:
    """Canonical representative of v + sub: pivot coordinates reduced into [0, pivot)."""
    v = [int(x) for x in v]
    for col, p in zip(sub.basis, sub.pivots):
        q = v[p] // col[p]
        if q:
            v = [a - q * b for a, b in zip(v, col)]
    return tuple(v)


def quotient_transversal(ambient: Lattice, sub: Lattice) -> list:
    """Sorted canonical representatives of ambient/sub, via SNF mixed radix."""
    idx = lattice_index(ambient, sub)
    if idx == INF:
        raise InfiniteIndex(f"[{ambient} : {sub}] is infinite")
    r = ambient.rank
    if r == 0:
        return [(0,) * ambient.dimension]
    C = from_columns([ambient.coordinates(c) for c in sub.basis], r)
    D, U, _ = smith_normal_form(C)
    Uinv = to_int(inverse(U))
    radices = [D[k][k] for k in range(r)]
    B = ambient.matrix()
    reps = set()
    for y in itertools.product(*(range(a) for a in radices)):
        x = matvec(Uinv, y)
        reps.add(canonical_rep(matvec(B, x), sub))
    out = sorted(reps)
    assert len(out) == idx
    return out


def kernel_lattice(M, L: Lattice) -> Lattice:
    """{v in L : M v = 0} for a rational matrix M."""
    if not L.basis:
        return L
    MB = matmul(M, L.matrix())
    if not MB:
        return L
    gens = [matvec(L.matrix(), k) for k in integer_kernel(MB)]
    return Lattice.from_generators(gens, L.dimension)


# ---------------------------------------------------------------- affine systems

def _left_null_integer(M):
    """Integer matrix P whose rows span {y : y^T M = 0} over Q."""
    m, _ = shape(M)
    ker = integer_kernel(transpose(M)) if M and M[0] else columns(identity(m))
    return tuple(ker)


def _integer_lattice_point(M, c):
    """Some z in Z^d with z - c in colspan_Q(M), or None."""
    d = len(M)
    P = _left_null_integer(M)
    if not P:
        return (0,) * d
    rhs = matvec(P, c)
    return solve_integer(P, rhs)


def affine_image_meets_lattice(M, c) -> bool:
    """Whether some rational x has M x + c in Z^d."""
    return _integer_lattice_point(M, c) is not None


def affine_lattice_witness(M, c):
    """A rational x with M x + c integral, or None."""
    z = _integer_lattice_point(M, c)
    if z is None:
        return None
    return solve_rational(M, vec_sub(z, c))


@dataclass(frozen=True)
class RationalLattice:
    """A full-rank lattice in Q^d given by a canonical basis (HNF of the scaled basis)."""

    dimension: int
    denominator: int
    integer_lattice: Lattice  # denominator * self

    @classmethod
    def from_generators(cls, gens, dimension: int) -> "RationalLattice":
        q = denominator_lcm(x for g in gens for x in g)
        L = Lattice.from_generators([tuple(int(x * q) for x in g) for g in gens], dimension)
        # reduce the common denominator as far as possible
        g = reduce(math.gcd, (x for c in L.basis for x in c), 0)
        g = math.gcd(g, q)
        if g > 1:
            L = Lattice(dimension, tuple(tuple(x // g for x in c) for c in L.basis))
            q //= g
        return cls(dimension, q, L)

    @property
    def basis(self) -> tuple:
        return tuple(tuple(Fraction(x, self.denominator) for x in c) for c in self.integer_lattice.basis)

    def __contains__(self, v) -> bool:
        return tuple(Fraction(x) * self.denominator for x in v) in self.integer_lattice


def affine_solution_coset(M, c):
    """Solutions of M x + c in Z^d for nonsingular M: returns (x0, M^{-1} Z^d)."""
    if det(M) == 0:
        raise SingularMatrix("affine_solution_coset needs a nonsingular matrix")
    Minv = inverse(M)
    x0 = vec_neg(matvec(Minv, c))
    return x0, RationalLattice.from_generators(columns(Minv), len(M))


def torus_points(x0, lattice: RationalLattice) -> list:
    """Distinct points of (x0 + lattice) mod Z^d, reduced into [0,1)^d, sorted."""
    d = lattice.dimension
    q = lattice.denominator
    coarse = Lattice.full(d).scaled(q)
    sols = lattice.integer_lattice
    pts = {frac_vector(vec_add(x0, tuple(Fraction(t, q) for t in w)))
           for w in quotient_transversal(sols, lattice_intersect(sols, coarse))}
    return sorted(pts)


def frac_vector(v) -> tuple:
    return tuple(Fraction(x) - math.floor(Fraction(x)) for x in v)
