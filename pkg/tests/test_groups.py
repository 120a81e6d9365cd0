from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nvcoin import linalg as la
from nvcoin.errors import GroupMismatch
from nvcoin.fixtures import fixture
from nvcoin.groups import (FlatGroup, SingleMorphism, holonomy_transversal, identity_morphism,
                           lattice_determinant, lie_matrix, relators, torus_matrix_morphism,
                           trivial_morphism, validate_flat_group, verify_single_morphism)
from nvcoin.io import group_from_json, problem_from_json

HALF_TURN = group_from_json(fixture("halfturn-group"))


def elements(G, bound=3):
    vec = st.tuples(*[st.integers(-bound, bound)] * G.dimension)
    return st.builds(lambda j, t: G.element(j, t), st.integers(0, G.order - 1), vec)


def test_compose_and_invert_on_torus():
    T = FlatGroup.torus(2)
    assert T.translation((1, 0)) * T.translation((0, 1)) == T.translation((1, 1))
    x = T.translation((3, -2))
    assert x * x.inverse() == T.identity()


def test_half_turn_square_is_translation():
    g = HALF_TURN.element(1)
    assert g * g == HALF_TURN.translation((1, 0, 0))
    assert (g * g).affine() == g.affine() * g.affine()


def test_mixed_groups_rejected():
    with pytest.raises(GroupMismatch):
        FlatGroup.torus(2).identity() * HALF_TURN.identity()


@pytest.mark.parametrize("G", [FlatGroup.torus(2), FlatGroup.torus(3), HALF_TURN])
def test_group_axioms(G):
    @settings(max_examples=40, deadline=None)
    @given(elements(G), elements(G), elements(G))
    def check(x, y, z):
        assert (x * y) * z == x * (y * z)
        assert x * x.inverse() == G.identity() == x.inverse() * x
        assert (x * y).affine() == x.affine() * y.affine()
    check()


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_torus_is_valid(d):
    assert validate_flat_group(FlatGroup.torus(d)).valid


def test_half_turn_valid():
    assert validate_flat_group(HALF_TURN).valid


def test_half_turn_torsion_free_by_enumeration():
    # (t h)^2 has translation (1 + 2 t_1, 0, 0): never zero
    g = HALF_TURN.element(1)
    for t1 in range(-5, 6):
        x = HALF_TURN.translation((t1, 2, -1)) * g
        assert x * x != HALF_TURN.identity()


def test_klein_bottle_rejected_for_orientability():
    rep = validate_flat_group(group_from_json(fixture("klein-bottle")))
    assert not rep.valid
    assert any(f.startswith("orientability") for f in rep.failures)
    assert not any(f.startswith("torsion") for f in rep.failures)


def test_point_reflection_rejected_for_torsion():
    G = group_from_json(fixture("point-reflection"))
    rep = validate_flat_group(G)
    assert [f.split(":")[0] for f in rep.failures] == ["torsion"]
    w = rep.witnesses["torsion"]
    x = G.element(w["holonomy"], w["translation"])
    assert x != G.identity() and x * x == G.identity()


def test_relators_torus():
    assert relators(FlatGroup.torus(2)) == [(("t", 0, 1), ("t", 1, 1), ("t", 0, -1), ("t", 1, -1))]


def test_relators_half_turn():
    words = relators(HALF_TURN)
    assert (("g", 1, 1), ("t", 1, 1), ("g", 1, -1), ("t", 1, 1)) in words
    assert (("g", 1, 1), ("g", 1, 1), ("t", 0, -1)) in words


def test_identity_and_matrix_morphisms_verify():
    assert verify_single_morphism(identity_morphism(HALF_TURN))
    psi = torus_matrix_morphism(((2, -1), (3, 0)))
    assert verify_single_morphism(psi)


def test_corrupted_cocycle_fails():
    phi, psi = problem_from_json(fixture("halfturn-3d"))
    assert verify_single_morphism(psi)
    bad = SingleMorphism(HALF_TURN, HALF_TURN, psi.lattice_images, [HALF_TURN.element(1, (0, 1, 0))])
    assert verify_single_morphism(bad)  # conjugating translation in the -1 eigenspace is harmless
    bad = SingleMorphism(HALF_TURN, HALF_TURN, psi.lattice_images, [HALF_TURN.element(1, (1, 0, 0))])
    assert not verify_single_morphism(bad)


def test_lie_matrix_examples():
    F = ((2, 1), (-1, 3))
    assert lie_matrix(torus_matrix_morphism(F)) == la.matrix(F)
    assert lie_matrix(trivial_morphism(FlatGroup.torus(2), FlatGroup.torus(2))) == la.matrix(la.zeros(2, 2))
    assert lie_matrix(identity_morphism(HALF_TURN)) == la.matrix(la.identity(3))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=9, max_size=9))
def test_lie_matrix_of_torus_matrix_morphism(entries):
    F = (tuple(entries[0:3]), tuple(entries[3:6]), tuple(entries[6:9]))
    assert lie_matrix(torus_matrix_morphism(F)) == la.matrix(F)


@pytest.mark.parametrize("name", ["halfturn-3d", "halfturn-identity", "halfturn-2valued"])
def test_lie_matrix_refinement_invariance(name):
    _, psi = problem_from_json(fixture(name))
    m = psi.target.order
    assert lie_matrix(psi) == lie_matrix(psi, multiplier=2 * m)
    assert lie_matrix(psi) == lie_matrix(psi, sublattice=la.Lattice.diagonal((2, 1, 3)))


def test_holonomy_transversal():
    assert holonomy_transversal(FlatGroup.torus(2)) == [(0, la.matrix(la.identity(2)))]
    rots = [A for _, A in holonomy_transversal(HALF_TURN)]
    assert rots == [la.matrix(la.identity(3)), la.matrix(((1, 0, 0), (0, -1, 0), (0, 0, -1)))]
    # the rotation is a coset invariant
    for t in [(1, 0, 0), (0, -2, 5)]:
        assert (HALF_TURN.translation(t) * HALF_TURN.element(1)).rotation == rots[1]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=5), min_size=4, max_size=4),
       st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=2, max_size=3))
def test_determinant_scaling_law(entries, gens):
    X = ((entries[0], entries[1]), (entries[2], entries[3]))
    sub = la.Lattice.from_generators(gens, 2)
    if sub.rank < 2:
        return
    full = la.Lattice.full(2)
    assert lattice_determinant(X, sub) == la.lattice_index(full, sub) * lattice_determinant(X, full)
    assert lattice_determinant(X, full) == la.det(X)


def test_affine_element_inverse():
    g = HALF_TURN.element(1, (2, -1, 3)).affine()
    e = g * g.inverse()
    assert e.rotation == la.matrix(la.identity(3)) and e.translation == (Fraction(0),) * 3
