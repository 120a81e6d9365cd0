"""Built-in example documents and random generators of valid affine n-valued torus maps."""

from __future__ import annotations

import math
import random
from fractions import Fraction

from . import linalg as la
from .oracle import AffineMap, AffineNValuedMap, check_n_valued, equivariance_data

HALF_TURN = {"dimension": 3, "holonomy": [
    {"rotation": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "translation": ["0", "0", "0"]},
    {"rotation": [[1, 0, 0], [0, -1, 0], [0, 0, -1]], "translation": ["1/2", "0", "0"]},
]}


def _t(*v, j=0):
    return {"holonomy": j, "translation": list(v)}


def _single(*tuples, perm=None):
    return {"tuple": list(tuples), "perm": perm or list(range(1, len(tuples) + 1))}


def _branch(linear, offset):
    return {"linear": linear, "offset": offset}


FIXTURES = {
    "torus-3valued-root": {
        "dimension": 2, "n": 3,
        "branches": [_branch([["1/2", 0], [0, -1]], [0, 0]),
                     _branch([["1/2", 0], [0, -1]], ["1/2", 0]),
                     _branch([[-1, 0], [0, -1]], [0, "1/2"])],
        "g": {"linear": [[0, 0], [0, 0]], "offset": [0, 0]},
    },
    "torus-3valued-degenerate": {
        "dimension": 2, "n": 3,
        "branches": [_branch([["1/2", 0], [0, -1]], [0, 0]),
                     _branch([["1/2", 0], [0, -1]], ["1/2", 0]),
                     _branch([[-1, 0], [0, -1]], [0, "1/2"])],
        "g": {"linear": [[-1, 0], [0, 1]], "offset": [0, 0]},
    },
    "circle-sqrt2": {
        "dimension": 1, "n": 2,
        "branches": [_branch([["1/2"]], [0]), _branch([["1/2"]], ["1/2"])],
        "g": {"linear": [[1]], "offset": [0]},
    },
    "circle-cube-root": {
        "dimension": 1, "n": 3,
        "branches": [_branch([["1/3"]], [0]), _branch([["1/3"]], ["1/3"]), _branch([["1/3"]], ["2/3"])],
        "g": {"linear": [[1]], "offset": [0]},
    },
    "circle-split-pair": {
        "dimension": 1, "n": 2,
        "branches": [_branch([[2]], [0]), _branch([[2]], ["1/2"])],
        "g": {"linear": [[1]], "offset": [0]},
    },
    "torus-doubling": {
        "dimension": 2, "n": 1,
        "branches": [_branch([[2, 0], [0, 2]], [0, 0])],
        "g": {"linear": [[1, 0], [0, 1]], "offset": [0, 0]},
    },
    "halfturn-3d": {
        "source": HALF_TURN, "target": HALF_TURN,
        "phi": {"n": 1,
                "lattice_images": [_single(_t(3, 0, 0)), _single(_t(0, 2, 1)), _single(_t(0, 1, 1))],
                "holonomy_images": [_single(_t(1, 0, 0, j=1))]},
        "psi": {"lattice_images": [_t(1, 0, 0), _t(0, 1, 0), _t(0, 0, 1)],
                "holonomy_images": [_t(0, 0, 0, j=1)]},
    },
    "halfturn-identity": {
        "source": HALF_TURN, "target": HALF_TURN,
        "phi": {"n": 1,
                "lattice_images": [_single(_t(1, 0, 0)), _single(_t(0, 1, 0)), _single(_t(0, 0, 1))],
                "holonomy_images": [_single(_t(0, 0, 0, j=1))]},
        "psi": {"lattice_images": [_t(1, 0, 0), _t(0, 1, 0), _t(0, 0, 1)],
                "holonomy_images": [_t(0, 0, 0, j=1)]},
    },
    # lifts (3x1, x2/2, 2x3) and the same shifted by (0, 1/2, 0); psi the identity
    "halfturn-2valued": {
        "source": HALF_TURN, "target": HALF_TURN,
        "phi": {"n": 2,
                "lattice_images": [_single(_t(3, 0, 0), _t(3, 0, 0)),
                                   _single(_t(0, 0, 0), _t(0, 1, 0), perm=[2, 1]),
                                   _single(_t(0, 0, 2), _t(0, 0, 2))],
                "holonomy_images": [_single(_t(1, 0, 0, j=1), _t(1, 1, 0, j=1))]},
        "psi": {"lattice_images": [_t(1, 0, 0), _t(0, 1, 0), _t(0, 0, 1)],
                "holonomy_images": [_t(0, 0, 0, j=1)]},
    },
    "halfturn-group": HALF_TURN,
    "klein-bottle": {"dimension": 2, "holonomy": [
        {"rotation": [[1, 0], [0, 1]], "translation": [0, 0]},
        {"rotation": [[1, 0], [0, -1]], "translation": ["1/2", 0]},
    ]},
    "point-reflection": {"dimension": 2, "holonomy": [
        {"rotation": [[1, 0], [0, 1]], "translation": [0, 0]},
        {"rotation": [[-1, 0], [0, -1]], "translation": [0, 0]},
    ]},
}

INVALID_FIXTURES = ("klein-bottle", "point-reflection")


def fixture(name: str) -> dict:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(sorted(FIXTURES))}")
    return FIXTURES[name]


# ---------------------------------------------------------------- random generation

def random_unimodular(rng: random.Random, d: int, steps: int = 4):
    """Product of a few elementary integer shears and sign flips."""
    P = [list(r) for r in la.identity(d)]
    for _ in range(steps if d > 1 else 0):
        a, b = rng.sample(range(d), 2)
        k = rng.choice((-1, 1))
        for row in P:
            row[a] += k * row[b]
    if rng.random() < 0.5:
        for row in P:
            row[0] = -row[0]
    return la.to_tuple(P)


def _random_rational(rng: random.Random, denominators=(1, 2, 3, 4, 6)) -> Fraction:
    q = rng.choice(denominators)
    return Fraction(rng.randrange(q), q)


def random_single_pair(rng: random.Random, d: int, bound: int = 3):
    """n = 1: integer F, G with det(G - F) != 0; random rational offsets."""
    while True:
        F = tuple(tuple(rng.randint(-bound, bound) for _ in range(d)) for _ in range(d))
        G = tuple(tuple(rng.randint(-bound, bound) for _ in range(d)) for _ in range(d))
        if la.det(la.mat_sub(G, F)) != 0:
            break
    c = tuple(_random_rational(rng) for _ in range(d))
    b = tuple(_random_rational(rng) for _ in range(d))
    return AffineNValuedMap(d, [(F, c)]), AffineMap(G, b)


def _cyclic_block(rng, d, size, u, shared_rows, offset):
    """Branches c + (k/size) u, k < size, with linear part A/size, A e_k = s_k u mod size."""
    s = [rng.randrange(size) for _ in range(d)]
    if d == 1:
        s[0] = rng.choice([x for x in range(1, size) if math.gcd(x, size) == 1] or [1])
    R = [[rng.randint(-1, 1) for _ in range(d)] for _ in range(d)]
    for r, row in shared_rows.items():
        R[r] = list(row)
    A = [[size * R[r][k] + u[r] * s[k] for k in range(d)] for r in range(d)]
    M = tuple(tuple(Fraction(x, size) for x in row) for row in A)
    return [(M, tuple(offset[r] + Fraction(k * u[r], size) for r in range(d))) for k in range(size)]


def _partitions(n: int, d: int):
    if d == 1:
        return [[n]]
    return {2: [[2], [1, 1]], 3: [[3], [2, 1], [1, 1, 1]], 4: [[4], [2, 2], [3, 1], [2, 1, 1]]}[n]


def random_nvalued_pair(rng: random.Random, d: int | None = None, n: int | None = None):
    """A validated nondegenerate affine n-valued pair from cyclic or swap templates.

    In dimension 2 several cyclic blocks are stacked: all blocks share the
    integer second row of the linear part and their second offsets differ by a
    non-integer, so branches from different blocks never meet.  The result is
    conjugated by a random unimodular matrix.
    """
    d = d or rng.choice((1, 2))
    n = n or rng.choice((2, 3, 4))
    while True:
        blocks = rng.choice(_partitions(n, d))
        if d == 1:
            u = (1,)
            shared = {}
        else:
            u = (1, 0)
            shared = {1: [rng.randint(-2, 2), rng.randint(-2, 2)]}
        spacing = Fraction(1, len(blocks) + 1) if len(blocks) > 1 else 0
        base = _random_rational(rng)
        branches = []
        for k, size in enumerate(blocks):
            offset = [_random_rational(rng)] + ([base + k * spacing] if d == 2 else [])
            branches += _cyclic_block(rng, d, size, u, shared, offset)
        G = tuple(tuple(rng.randint(-2, 2) for _ in range(d)) for _ in range(d))
        b = tuple(_random_rational(rng) for _ in range(d))
        P = random_unimodular(rng, d)
        Pinv = la.inverse(P)
        conj = lambda X: la.matmul(la.matmul(P, X), Pinv)
        f = AffineNValuedMap(d, [(conj(M), la.matvec(P, c)) for M, c in branches])
        g = AffineMap(la.to_int(conj(G)), la.matvec(P, b))
        if any(la.det(la.mat_sub(g.linear, M)) == 0 for M, _ in f.branches):
            continue
        equivariance_data(f)
        check_n_valued(f)
        return f, g
