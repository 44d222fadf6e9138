import itertools

import pytest

from situskit import ramsey as rm
from situskit.errors import DomainError, ResourceError
from situskit.simplex import corepresented_by_set, validate
from situskit.stone import order_object


def test_hereditary_nondegeneracy():
    X = corepresented_by_set("abc", 3)
    assert rm.is_hereditarily_nondegenerate(X, ("a", "b", "c"))
    assert not rm.is_hereditarily_nondegenerate(X, ("a", "a", "b"))
    assert not rm.is_hereditarily_nondegenerate(X, ("a", "b", "a"))
    assert rm.is_nondegenerate(("a", "b", "a"))
    assert rm.is_hereditarily_nondegenerate(X, ("a",))
    with pytest.raises(DomainError):
        rm.is_hereditarily_nondegenerate(X, ("z",))


def test_constant_colouring_is_homogeneous():
    X = corepresented_by_set([1, 2, 3], 3)
    c = rm.Coloring(2, lambda y: 0)
    assert rm.homogeneous_simplices(X, c, 3) == set(X.carriers[3])


def test_homogeneous_triples_by_hand():
    X = corepresented_by_set([1, 2, 3], 3)
    c = rm.Coloring(2, lambda y: int(1 in y))
    homog = rm.homogeneous_simplices(X, c, 3)
    assert (1, 2, 3) not in homog
    assert (1, 1, 2) in homog  # only one non-degenerate pair {1,2}


def test_neighbourhood_situs_validates():
    X = order_object(3, "set", "antidiscrete", 3)
    for colour in (lambda y: 0, lambda y: int(y[0] < y[1])):
        assert validate(rm.neighbourhood_situs(X, rm.Coloring(2, colour))) == []


def test_colour_quotient():
    X = corepresented_by_set([1, 2, 3], 3)
    C, q = rm.coloring_quotient(X, rm.Coloring(2, lambda y: 0))
    assert [C.size(n) for n in (1, 2, 3)] == [1, 2, 5]
    assert q.is_valid()
    injective = {p: k for k, p in enumerate(itertools.product([1, 2, 3], repeat=2))}
    C, q = rm.coloring_quotient(X, rm.Coloring(2, injective))
    pairs = [p for p in X.carriers[2] if p[0] != p[1]]
    assert len({int(q.maps[2][X.carriers[2].index(p)]) for p in pairs}) == len(pairs)


def test_ramsey_numbers():
    assert rm.ramsey_search(6) is None
    c = rm.ramsey_search(5)
    assert c is not None
    for tri in itertools.combinations(range(1, 6), 3):
        assert len({c[p] for p in itertools.combinations(tri, 2)}) == 2
    with pytest.raises(ResourceError):
        rm.ramsey_search(9)
