import math
from dataclasses import replace
from fractions import Fraction

import pytest

from nvcoin import linalg as la
from nvcoin.errors import DegenerateBranch, MismatchDetected, NotEquivariant, NotNValued
from nvcoin.fixtures import fixture, random_nvalued_pair, random_single_pair
from nvcoin.groups import FlatGroup
from nvcoin.invariants import compute_invariants, nielsen
from nvcoin.io import affine_from_json
from nvcoin.morphism import SemidirectElement, sigma_analysis, verify_nv_morphism
from nvcoin.oracle import (AffineMap, AffineNValuedMap, derive_morphism, enumerate_coincidences,
                           homotopic_offsets, oracle_report, validate_map)

from helpers import brute_torus_coincidences

h, third = Fraction(1, 2), Fraction(1, 3)
ID1 = AffineMap(((1,),), (0,))


def test_validate_root_fixture():
    f, _ = affine_from_json(fixture("torus-3valued-root"))
    assert validate_map(f).valid


def test_not_equivariant():
    f = AffineNValuedMap(1, [(((h,),), (0,)), (((h,),), (third,))])
    with pytest.raises(NotEquivariant) as err:
        validate_map(f)
    assert err.value.generator == 0
    assert not validate_map(f, strict=False).valid


def test_duplicate_branches_not_n_valued():
    f = AffineNValuedMap(1, [(((2,),), (0,)), (((2,),), (0,))])
    with pytest.raises(NotNValued) as err:
        validate_map(f)
    assert err.value.pair == (0, 1)


def test_crossing_branches_not_n_valued():
    # x/1 and 3x meet wherever 2x is an integer
    f = AffineNValuedMap(1, [(((1,),), (0,)), (((3,),), (h,))])
    with pytest.raises(NotNValued) as err:
        validate_map(f)
    x = err.value.point
    assert (3 * x[0] + h - x[0]).denominator == 1


def test_derive_root_fixture():
    phi, psi = derive_morphism(*affine_from_json(fixture("torus-3valued-root")))
    T = phi.target
    assert phi.lattice_images[0] == SemidirectElement(
        (T.translation((0, 0)), T.translation((1, 0)), T.translation((-1, 0))), (1, 0, 2))
    assert phi.lattice_images[1] == SemidirectElement((T.translation((0, -1)),) * 3, (0, 1, 2))
    assert verify_nv_morphism(phi)
    assert all(x == T.identity() for x in psi.lattice_images)


def test_derive_single_valued():
    F = ((2, -1), (1, 3))
    phi, _ = derive_morphism(AffineNValuedMap(2, [(F, (0, 0))]), AffineMap(la.identity(2), (0, 0)))
    assert [x.components[0].translation for x in phi.lattice_images] == list(la.columns(F))


def test_sqrt2_circle():
    coins = enumerate_coincidences(*affine_from_json(fixture("circle-sqrt2")))
    assert [p.point for p in coins.points] == [(0,)]
    assert len(coins.classes()) == 1 and coins.points[0].index == 1


def test_cube_root_circle():
    coins = enumerate_coincidences(*affine_from_json(fixture("circle-cube-root")))
    assert sorted(p.point for p in coins.points) == [(0,), (h,)]
    assert len(coins.classes()) == 2 and {p.index for p in coins.points} == {1}


def test_roots_of_root_fixture():
    coins = enumerate_coincidences(*affine_from_json(fixture("torus-3valued-root")))
    assert {p.point: p.index for p in coins.points} == {(0, 0): -1, (0, h): 1}
    assert len(coins.classes()) == 2


def test_degenerate_branch_refused():
    with pytest.raises(DegenerateBranch) as err:
        enumerate_coincidences(*affine_from_json(fixture("torus-3valued-degenerate")))
    assert err.value.branch == 2


def test_doubling_map_oracle():
    coins, rec, _ = oracle_report(*affine_from_json(fixture("torus-doubling")))
    assert rec.coincidences == 1 == rec.N == rec.R and rec.index_sum == rec.L == 1


def test_points_match_grid_search(rng):
    checked = 0
    while checked < 12:
        f, g = random_nvalued_pair(rng)
        q = 1
        for M, c in f.branches:
            D = la.mat_sub(g.linear, M)
            q = math.lcm(q, la.denominator_lcm(x for row in la.inverse(D) for x in row))
            q = math.lcm(q, la.denominator_lcm(la.matvec(la.inverse(D), la.vec_sub(c, g.offset))))
        if q ** f.dimension > 5000:
            continue
        coins = enumerate_coincidences(f, g)
        assert sorted(p.point for p in coins.points) == sorted(brute_torus_coincidences(f, g, q))
        checked += 1


def test_partition_and_index_properties(rng):
    for _ in range(20):
        f, g = random_nvalued_pair(rng)
        phi, psi = derive_morphism(f, g)
        a = sigma_analysis(phi)
        coins = enumerate_coincidences(f, g, phi, psi, a)
        points = [p.point for p in coins.points]
        assert len(points) == len(set(points))
        assert coins.points == sorted(coins.points, key=lambda p: (p.label, p.point))
        for orbit in a.orbits:
            signs = {p.index for p in coins.points if p.label[0] == orbit[0]}
            assert len(signs) <= 1
        total = sum(la.lattice_index(la.Lattice.full(f.dimension), a.stabilizers[o[0]].lattice)
                    * abs(la.det(la.mat_sub(g.linear, f.branches[o[0]][0]))) for o in a.orbits)
        assert len(coins) == total == nielsen(phi, psi)


def test_single_valued_counts(rng):
    for _ in range(20):
        f, g = random_single_pair(rng, 2)
        coins, rec, _ = oracle_report(f, g)
        det = la.det(la.mat_sub(g.linear, f.branches[0][0]))
        assert rec.coincidences == abs(det) and rec.index_sum == det


def test_homotopy_moves_points_not_counts(rng):
    f, g = affine_from_json(fixture("circle-cube-root"))
    base = enumerate_coincidences(f, g)
    moved = homotopic_offsets(f, (Fraction(1, 7),))
    _, rec, _ = oracle_report(moved, g)
    shifted = enumerate_coincidences(moved, g)
    assert {p.point for p in base.points} != {p.point for p in shifted.points}
    assert rec.coincidences == len(base) and rec.N == 2


def test_mismatch_is_loud():
    f, g = affine_from_json(fixture("torus-3valued-root"))
    phi, psi = derive_morphism(f, g)
    wrong = replace(compute_invariants(phi, psi), N=3)
    with pytest.raises(MismatchDetected) as err:
        oracle_report(f, g, report=wrong)
    assert err.value.expected == 3 and err.value.observed == 2


def test_torus_group_of_derived_morphism():
    phi, psi = derive_morphism(*affine_from_json(fixture("circle-sqrt2")))
    assert phi.source == FlatGroup.torus(1) == psi.target
