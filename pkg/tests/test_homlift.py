import pytest

from situskit import dividing_lines as dl
from situskit.errors import PreconditionError
from situskit.fostruct import FinStructure
from situskit.homlift import (
    LiftingInstance,
    SitusMorphism,
    exists_surjection,
    has_lift,
    hom_set,
    lifting_property,
    left_negation,
    right_negation,
)
from situskit.simplex import FinPreorder, corepresented_by_preorder, corepresented_by_set, terminal
from situskit.stone import identity_on_vertices, star_order, stone_space


def chain2(depth=3):
    return corepresented_by_preorder(FinPreorder.chain(["a", "b"]), depth)


def test_hom_chain2():
    assert len(hom_set(chain2(), chain2())) == 3
    assert len(hom_set(chain2(), chain2(), method="levelwise")) == 3


def test_identity_lifts():
    X = chain2()
    i = SitusMorphism.identity(X)
    p = SitusMorphism.to_terminal(stone_space(FinStructure.chain(2), "x<=y", "plain", 3), terminal(3))
    assert lifting_property(LiftingInstance(i, p)).holds
    assert lifting_property(LiftingInstance(p, SitusMorphism.identity(p.target))).holds


def test_has_lift_requires_commuting_square():
    X = corepresented_by_set(["a", "b"], 2)
    Y = corepresented_by_set(["c", "d"], 2)
    i = SitusMorphism.identity(X)
    p = SitusMorphism.identity(Y)
    f = SitusMorphism(X, Y, None, vertex_map={"a": "c", "b": "c"})
    g = SitusMorphism(X, Y, None, vertex_map={"a": "d", "b": "d"})
    with pytest.raises(PreconditionError):
        has_lift(LiftingInstance(i, p), f, g)
    assert has_lift(LiftingInstance(i, p), f, f) is not None


def test_stability_square_has_no_lift():
    M = FinStructure.chain(4)
    v = dl.stability(M, "x<=y", 5, 3)
    assert not v.holds and v.witness is not None


def test_negations():
    X = chain2()
    p = SitusMorphism.to_terminal(X, terminal(3))
    assert left_negation([], SitusMorphism.identity(X))
    assert right_negation([], p)
    i = identity_on_vertices(corepresented_by_preorder(FinPreorder.chain(["a", "b"]), 3),
                             corepresented_by_preorder(FinPreorder.set(["a", "b"]), 3))
    assert right_negation([i], p) == lifting_property(LiftingInstance(i, p)).holds


def test_surjections():
    X = stone_space(FinStructure.chain(4), None, "extendable", 3, q=1)
    assert exists_surjection(X, terminal(3)) is not None
    assert exists_surjection(terminal(3), corepresented_by_set([1, 2], 3)) is None
    assert exists_surjection(X, star_order(2, 3)) is not None


def test_fast_path_matches_generic():
    # a vertex bijection takes the shortcut; compare with the full square enumeration
    from situskit import homlift

    A = corepresented_by_preorder(FinPreorder.chain([1, 2, 3]), 3)
    B = corepresented_by_preorder(FinPreorder.set([1, 2, 3]), 3)
    for M in (FinStructure.pure_set(3), FinStructure.chain(3), FinStructure.equivalence([[1, 2], [3]])):
        X = stone_space(M, None, "extendable", 3, q=1)
        inst = LiftingInstance(identity_on_vertices(A, B), SitusMorphism.to_terminal(X, terminal(3)))
        fast = lifting_property(inst).holds
        slow = all(
            has_lift(inst, f, SitusMorphism.to_terminal(B, terminal(3))) is not None
            for f in hom_set(A, X)
        )
        assert fast == slow
        assert homlift._lifting_by_vertices is not None
