import itertools

import pytest

from situskit.errors import DomainError
from situskit.fostruct import FinStructure
from situskit.simplex import validate
from situskit.stone import (
    FinTree,
    consistency_space,
    monotone_pieces_order,
    monotone_split,
    order_object,
    orbit_equivalence,
    star_order,
    stone_quotient,
    stone_space,
    tree_objects,
)


def test_empty_sigma_is_antidiscrete():
    X = stone_space(FinStructure.chain(3), None, "plain", 3)
    assert all(X.filters[n].is_antidiscrete() for n in (1, 2, 3))


def test_plain_cores():
    P = stone_space(FinStructure.pure_set(3), "x = y", "plain", 2)
    assert len(P.filters[2].core) == 9
    # a pair has a single increasing index pattern, so every pair passes; triples can fail
    C = stone_space(FinStructure.chain(3), "x <= y", "plain", 3)
    assert len(C.filters[2].core) == 9
    assert (1, 2, 3) in C.filters[3].core and (3, 2, 1) in C.filters[3].core
    assert (2, 1, 3) not in C.filters[3].core


def test_quotient_levels():
    assert stone_quotient(FinStructure.pure_set(2), ()).size(1) == 1
    assert stone_quotient(FinStructure.chain(3), ()).size(1) == 3
    M = FinStructure.pure_set(3)
    assert stone_quotient(M, M.elements).size(1) == 3


def test_orbit_equivalence_is_face_compatible():
    M = FinStructure.equivalence([[1, 2], [3]])
    assert validate(stone_quotient(M, ())) == []
    assert orbit_equivalence(M, (), 2).label(1, (1,)) == orbit_equivalence(M, (), 2).label(1, (2,))


def test_tails_core():
    X = order_object(4, "ordered", "tails", 2)
    assert X.filters[1].core == {(4,)}
    assert all(order_object(3, "ordered", "antidiscrete", 2).filters[n].is_antidiscrete() for n in (1, 2))
    assert order_object(3, "ordered", "antidiscrete", 2).size(2) == 6


def test_star_order():
    X = star_order(1, 3)
    assert X.filters[3].core == set(X.carriers[3])
    assert star_order(2, 3).filters[1].is_antidiscrete()
    with pytest.raises(DomainError):
        star_order(0)


def test_monotone_split():
    assert monotone_split((1, 3, 2, 4), 2)
    assert monotone_split((3, 2, 1), 1)
    assert not monotone_split((1, 3, 2), 1)
    assert all(monotone_split(t, 3) for t in itertools.permutations(range(3)))
    X = monotone_pieces_order(4, 2, 3)
    assert validate(X) == []


def test_consistency_space_of_empty_relation():
    M = FinStructure([1, 2], {"R": []}, arities={"R": 2})
    X = consistency_space(M, "R(x,y)", 2)
    assert X.filters[1].core == frozenset()


def test_tree_objects():
    T = FinTree(2, 2)
    assert len(T) == 7
    objs = tree_objects(T, 2)
    for name in ("prefix", "lex", "union"):
        assert validate(objs[name]) == []
    assert all(T.comparable(s, t) or s != t for s in T.branches() for t in T.branches())
