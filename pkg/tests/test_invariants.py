from fractions import Fraction

import pytest

from nvcoin import linalg as la
from nvcoin.errors import NonIntegralResult
from nvcoin.fixtures import FIXTURES, fixture, random_nvalued_pair, random_single_pair
from nvcoin.groups import FlatGroup, identity_morphism, torus_matrix_morphism
from nvcoin.invariants import (_integer, averaging_report, compute_invariants, lefschetz, nielsen,
                               reidemeister, root_invariants)
from nvcoin.io import affine_from_json, document_kind, problem_from_json
from nvcoin.morphism import NvMorphism, conjugated_branch_lie_matrix, sigma_analysis
from nvcoin.oracle import derive_morphism, homotopic_offsets

INF = la.INF


def load(name):
    doc = fixture(name)
    if document_kind(doc) == "affine":
        return derive_morphism(*affine_from_json(doc))
    return problem_from_json(doc)


def lrn(phi, psi):
    return lefschetz(phi, psi), reidemeister(phi, psi), nielsen(phi, psi)


def test_doubling_map():
    assert lrn(*load("torus-doubling")) == (1, 1, 1)


def test_two_valued_circle():
    assert lrn(*load("circle-sqrt2")) == (1, 1, 1)


def test_identity_pair():
    psi = identity_morphism(FlatGroup.torus(2))
    assert lrn(NvMorphism.from_single(psi), psi) == (0, INF, 0)


def test_root_invariants_root_fixture():
    r = root_invariants(load("torus-3valued-root")[0])
    assert (r.L, r.R, r.N) == (0, 2, 2)
    assert sorted(row.det for row in r.determinants) == [Fraction(-1, 2), Fraction(-1, 2), 1]


def test_root_invariants_single_valued(rng):
    for _ in range(20):
        F = tuple(tuple(rng.randint(-3, 3) for _ in range(2)) for _ in range(2))
        r = root_invariants(NvMorphism.from_single(torus_matrix_morphism(F)))
        det = abs(la.det(F))
        if det:
            assert r.N == r.R == det
        else:
            assert r.N == 0 and r.R == INF


def test_singular_branch_forces_infinite_r():
    phi, psi = load("torus-3valued-degenerate")
    L, R, N = lrn(phi, psi)
    assert (L, R, N) == (-6, INF, 6)


def test_averaging_root_fixture():
    phi, psi = load("torus-3valued-root")
    av = averaging_report(phi, psi)
    assert av.index_of_splitting == 2
    assert [c.R for c in av.covers] == [1, 1, 2]
    assert [c.upstairs_classes for c in av.covers] == [1, 1, 2]
    assert av.R_average == 2 == av.R and av.R_equal and av.R_condition
    assert av.L_average * 2 == sum(c.L for c in av.covers)


def test_averaging_split_map_is_a_plain_sum():
    phi, psi = load("circle-split-pair")
    av = averaging_report(phi, psi)
    assert av.index_of_splitting == 1
    assert av.N == sum(c.N for c in av.covers)
    assert av.L == sum(c.L for c in av.covers)


def test_averaging_degenerate_kernel():
    phi, psi = load("torus-3valued-degenerate")
    av = averaging_report(phi, psi)
    assert av.R == INF and av.R_average == INF and av.R_equal and av.R_condition
    outside = [r for r in av.coin_rows if not r.contained]
    assert outside and all(not r.essential for r in outside)
    assert av.N_equal and av.N_condition and av.N_average == 6


@pytest.mark.parametrize("name", [n for n, d in FIXTURES.items() if document_kind(d) != "group"])
def test_report_properties_on_fixtures(name):
    phi, psi = load(name)
    r = compute_invariants(phi, psi)
    assert isinstance(r.L, int) and isinstance(r.N, int)
    assert 0 <= r.N <= r.R and r.N < INF
    av = r.averaging
    assert av.L_average * av.index_of_splitting == sum(c.L for c in av.covers)
    assert av.R_equal == av.R_condition and av.N_equal == av.N_condition


def test_n_one_reduction(rng):
    for _ in range(30):
        f, g = random_single_pair(rng, rng.choice((1, 2, 3)))
        phi, psi = derive_morphism(f, g)
        det = la.det(la.mat_sub(g.linear, f.branches[0][0]))
        assert lrn(phi, psi) == (det, abs(det), abs(det))


def test_integrality_and_bounds_random(rng):
    for _ in range(30):
        phi, psi = derive_morphism(*random_nvalued_pair(rng))
        r = compute_invariants(phi, psi)
        assert 0 <= r.N <= r.R


def test_homotopy_invariance_under_offset_perturbation(rng):
    for _ in range(15):
        f, g = random_nvalued_pair(rng)
        shift = [Fraction(rng.randrange(12), 12) for _ in range(f.dimension)]
        moved = homotopic_offsets(f, shift)
        phi0, psi0 = derive_morphism(f, g)
        phi1, psi1 = derive_morphism(moved, g)
        assert phi0 == phi1
        assert lrn(phi0, psi0) == lrn(phi1, psi1)


@pytest.mark.parametrize("name", ["halfturn-3d", "halfturn-2valued", "halfturn-identity"])
def test_representative_choice_invariance(name):
    phi, psi = load(name)
    a = sigma_analysis(phi)
    r = compute_invariants(phi, psi, with_averaging=False)
    P = la.matrix(la.identity(3))
    for i in range(phi.n):
        for row in (x for x in r.determinants if x.branch == i):
            for t in [(0, 0, 0), (1, 0, 0), (0, -2, 3), (5, 1, -1)]:
                alpha = phi.target.translation(t) * phi.target.element(row.holonomy)
                X = la.mat_sub(P, conjugated_branch_lie_matrix(phi, i, alpha, analysis=a))
                assert la.det(X) == row.det


def test_non_integral_guard():
    with pytest.raises(NonIntegralResult):
        _integer(Fraction(1, 2), "test quantity")
    assert _integer(Fraction(4, 2), "test quantity") == 2
