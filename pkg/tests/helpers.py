"""Brute-force reference computations used only by the tests."""

import itertools
from fractions import Fraction


def span_mod(columns, d, q):
    """Subgroup of (Z/q)^d generated by the given integer columns, by closure."""
    seen = {(0,) * d}
    frontier = list(seen)
    while frontier:
        nxt = []
        for v in frontier:
            for c in columns:
                w = tuple((a + b) % q for a, b in zip(v, c))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


def brute_index(columns, d, q):
    """[Z^d : span] for a full-rank span containing q Z^d."""
    return q ** d // len(span_mod(columns, d, q))


def grid(d, denominator, upper):
    axis = [Fraction(k, denominator) for k in range(upper * denominator)]
    return itertools.product(axis, repeat=d)


def brute_torus_coincidences(f, g, denominator):
    """Points of [0,1)^d on the grid of the given denominator where g meets some branch of f."""
    pts = []
    for x in grid(f.dimension, denominator, 1):
        gx = g(x)
        if any(all((a - b).denominator == 1 for a, b in zip(gx, f(i, x))) for i in range(f.n)):
            pts.append(tuple(x))
    return pts
