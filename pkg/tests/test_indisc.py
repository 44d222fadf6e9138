import itertools

import pytest

from situskit.errors import DomainError
from situskit.fostruct import FinStructure, eval_formula, parse
from situskit.indisc import EMFormulaSpec, EMVariant, IndiscKind, em_formula, is_extendable, is_indiscernible


def test_abab_in_pure_equality():
    P = FinStructure.pure_set(2)
    seq = (1, 2, 1, 2)
    assert is_indiscernible(P, "x = y", seq, IndiscKind.WITH_REPS)
    assert not is_indiscernible(P, "x = y", seq, IndiscKind.CONSECUTIVE)


def test_chain_sequence_versus_order():
    C = FinStructure.chain(4)
    assert is_indiscernible(C, "x <= y", (1, 2, 3, 4), IndiscKind.SEQUENCE)
    assert not is_indiscernible(C, "x <= y", (1, 2, 3, 4), IndiscKind.ORDER)


@pytest.mark.parametrize("kind", list(IndiscKind))
def test_constant_sequences_pass(kind):
    C = FinStructure.chain(3)
    assert is_indiscernible(C, "x <= y", (2, 2, 2), kind)


def test_sentences_are_vacuous():
    assert is_indiscernible(FinStructure.pure_set(2), parse("exists x. x = x"), (1, 2))


def test_unknown_element():
    with pytest.raises(DomainError):
        is_indiscernible(FinStructure.pure_set(2), "x = y", (1, 5))


def test_em_formula_widths():
    P = FinStructure.pure_set(3)
    phi2 = em_formula(EMFormulaSpec(parse("x = y"), 2))
    assert all(eval_formula(P, phi2, t) for t in itertools.product(P.elements, repeat=2))
    phi3 = em_formula(EMFormulaSpec(parse("x = y"), 3))
    assert eval_formula(P, phi3, (1, 2, 3))


def test_em_formula_matches_predicate():
    C = FinStructure.chain(3)
    phi = parse("x <= y", C.signature)
    em = em_formula(EMFormulaSpec(phi, 3, EMVariant.EM))
    for t in itertools.product(C.elements, repeat=3):
        assert eval_formula(C, em, t) == is_indiscernible(C, phi, t, IndiscKind.WITH_REPS)


def test_extendability():
    assert is_extendable(FinStructure.pure_set(4), "x = y", (1, 2), 3)
    C = FinStructure.chain(3)
    # a decreasing pair is a (descending) indiscernible sequence, but not order-indiscernible
    assert is_extendable(C, "x <= y", (3, 1), 2)
    assert not is_extendable(C, "x <= y", (3, 1), 2, IndiscKind.ORDER_WITH_REPS)
    assert is_extendable(C, "x <= y", (1, 3), 2)
