import numpy as np
import pytest

from situskit.errors import DepthError, ValidationError
from situskit.filters import Filter
from situskit.fostruct import FinStructure
from situskit.simplex import (
    FinPreorder,
    LevelEquivalence,
    corepresented_by_preorder,
    corepresented_by_set,
    quotient,
    shift,
    shift_nat,
    terminal,
    validate,
)
from situskit.stone import order_object, orbit_equivalence, stone_space


def test_level_counts():
    X = corepresented_by_preorder(FinPreorder.chain(3), 2)
    assert X.size(2) == 6
    assert corepresented_by_set(["a", "b"], 2).size(2) == 4


def test_face_repeats_coordinates():
    X = corepresented_by_preorder(FinPreorder.chain(["a", "b"]), 2)
    assert X.face_of((1, 1), ("a", "b")) == ("a", "a")


def test_simplicial_identities_on_faces():
    X = corepresented_by_set([1, 2, 3], 3)
    for x in X.carriers[3]:
        inner = X.face_of((1, 3), x)
        assert X.face_of((2,), inner) == X.face_of((3,), x)


def test_validate_clean_objects():
    assert validate(corepresented_by_preorder(FinPreorder.chain(3), 3)) == []
    assert validate(order_object(3, "ordered", "tails", 3)) == []


def test_corrupted_filter_is_reported():
    els = ["a", "b"]
    bad = [Filter([("a",), ("b",)], core=[("a",)]), Filter([(x, y) for x in els for y in els], core=[("a", "a"), ("b", "b")])]
    with pytest.raises(ValidationError) as exc:
        corepresented_by_set(els, 2, bad)
    assert exc.value.violations
    X = corepresented_by_set(els, 2, bad, check=False)
    assert len(validate(X)) >= 1


def test_shift_and_nat():
    X = corepresented_by_set(["a", "b"], 3)
    S = shift(X)
    assert S.depth == 2 and S.size(1) == X.size(2)
    p = shift_nat(X)
    assert p(1, ("a", "b")) == ("a",)
    assert p.is_valid()
    with pytest.raises(DepthError):
        shift(corepresented_by_set(["a"], 1))


def test_quotients():
    X = corepresented_by_set([1, 2], 2)
    assert [quotient(X, LevelEquivalence.identity()).size(n) for n in (1, 2)] == [2, 4]
    assert [quotient(X, LevelEquivalence.total(2)).size(n) for n in (1, 2)] == [1, 1]
    M = FinStructure.pure_set(2)
    Q = quotient(stone_space(M, None, "plain", 2), orbit_equivalence(M, (), 2))
    assert Q.size(1) == 1


def test_terminal():
    T = terminal(3)
    assert [T.size(n) for n in (1, 2, 3)] == [1, 1, 1]
    assert np.all(T.face((1,), 2) == 0)
