import pytest

from situskit.errors import DomainError, ParseError
from situskit.fostruct import (
    FinStructure,
    automorphisms,
    binary_corpus,
    eval_formula,
    parse,
    qtype_classes,
    type_orbits,
)


def test_eval_examples():
    C = FinStructure.chain(3)
    phi = parse("x <= y", C.signature)
    assert eval_formula(C, phi, (1, 3))
    assert not eval_formula(C, phi, (3, 1))
    assert eval_formula(C, parse("x = x"), (2,))
    E = FinStructure([1, 2], {"R": []}, arities={"R": 2})
    assert not any(eval_formula(E, parse("exists y. R(x,y)", E.signature), (a,)) for a in E.elements)


def test_quantifiers_and_connectives():
    C = FinStructure.chain(3)
    top = parse("forall y. y <= x", C.signature)
    assert [eval_formula(C, top, (a,)) for a in C.elements] == [False, False, True]
    phi = parse("x <= y & ~(x = y) -> exists z. x <= z", C.signature, free=["x", "y"])
    assert eval_formula(C, phi, (1, 2))


def test_parse_errors():
    C = FinStructure.chain(3)
    with pytest.raises((ParseError, DomainError)):
        parse("R(x)", C.signature)
    with pytest.raises(ParseError):
        parse("x <= ", C.signature)


def test_arity_mismatch_on_evaluation():
    C = FinStructure.chain(3)
    with pytest.raises(DomainError):
        eval_formula(C, parse("x <= y", C.signature), (1,))


def test_automorphism_counts():
    assert len(automorphisms(FinStructure.pure_set(3))) == 6
    assert len(automorphisms(FinStructure.chain(3))) == 1
    assert len(automorphisms(FinStructure.equivalence([[1, 2], [3, 4]]))) == 8


def test_orbits():
    P = FinStructure.pure_set(3)
    assert len(type_orbits(P, (), 1)) == 1
    assert len(type_orbits(P, (1,), 1)) == 2
    assert len(type_orbits(FinStructure.chain(3), (), 1)) == 3


def test_orbits_refine_qf_types():
    for M in binary_corpus(2):
        cls = qtype_classes(M, 2, 0)
        for orbit in type_orbits(M, (), 2):
            idx = {M.idx(a) * len(M) + M.idx(b) for a, b in orbit}
            assert len({int(cls[k]) for k in idx}) == 1


def test_corpus_sizes():
    corpus = binary_corpus(3)
    assert sum(len(M) == 3 for M in corpus) == 512
    assert len(corpus) == 2 + 16 + 512


def test_structure_validation():
    with pytest.raises(DomainError):
        FinStructure([1, 2], {"R": [(1, 3)]})
    with pytest.raises(DomainError):
        FinStructure([1, 2], functions={"f": {1: 2}})
    with pytest.raises(DomainError):
        FinStructure([1, 2], constants={"c": 5})
