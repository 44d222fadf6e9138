import pytest

from situskit import dividing_lines as dl
from situskit.errors import PreconditionError
from situskit.fostruct import FinStructure, parse
from situskit.simplex import terminal
from situskit.stone import stone_space


def test_stability_examples():
    v = dl.stability(FinStructure.pure_set(4), "x = y", 4)
    assert v.holds and v.oracle_holds
    v = dl.stability(FinStructure.chain(4), "x <= y", 4, 4)
    assert not v.holds and v.agree
    assert tuple(v.witness["sequence"]) == (1, 2, 3, 4)
    assert dl.stability(FinStructure.chain(4)).holds


def test_eventual_stability_examples():
    assert not dl.eventual_stability(FinStructure.chain(4), "x <= y", 5, 3).holds
    v = dl.eventual_stability(FinStructure.pure_set(3), "x = y", 5, 3)
    assert v.holds and v.agree


def test_nip_examples():
    v = dl.nip(FinStructure.pure_set(3), 5, 1)
    assert v.holds and v.oracle_holds and v.extra["almost"]
    assert dl.nip(FinStructure.chain(3), 2, 1).holds


def test_abab_failure_mode():
    square, injective_ok = dl.abab_square(FinStructure.pure_set(2), 1, 2)
    assert square and not injective_ok


def test_order_property_examples():
    v = dl.op_nsop(FinStructure.pure_set(3), 2)
    assert v.holds and v.oracle_holds
    for k in (2, 3):
        v = dl.op_nsop(FinStructure.chain(2 * k), k)
        assert not v.holds and len(v.witness["sequence"]) == k
    assert not dl.op_nsop(FinStructure.chain(3), 1).holds
    assert dl.nsop(FinStructure.pure_set(3), 2).holds


def test_non_dividing_examples():
    v = dl.non_dividing(FinStructure.pure_set(4), [], 1, 2, 2)
    assert v.holds and v.agree and v.config["squares"] > 0
    # a = b outside A: the only conjugate of a is b itself, which lies on the sequence
    v = dl.non_dividing(FinStructure.pure_set(4), [], 1, 1, 2)
    assert not v.holds and v.agree
    E = FinStructure.equivalence([[1, 2], [3, 4]])
    for a, b in ((2, 1), (3, 1)):
        assert dl.non_dividing(E, [], a, b, 3).agree
    with pytest.raises(PreconditionError):
        dl.non_dividing(E, [], 2, 1, 4)


def test_tree_property_negative_examples():
    P = FinStructure.pure_set(3)
    for phi in ("x = y", "x = x"):
        v = dl.tree_property(P, phi)
        assert v.holds and v.oracle_holds


def tree_structure():
    pairs = [(i, i) for i in range(1, 5)] + [(1, 5), (2, 5), (3, 6), (4, 6)] + [(i, 7) for i in range(1, 5)]
    return FinStructure(range(1, 8), {"R": pairs})


def test_tree_property_found():
    M = tree_structure()
    v = dl.tree_property(M, parse("R(x,y)", M.signature))
    assert not v.oracle_holds
    assert not v.holds
    assert v.witness["tree"] is not None


def test_representation():
    C = FinStructure.chain(3)
    for mode in ("EM", "EMinfty", "Represents"):
        assert dl.em_represents(C, C, mode=mode, L=3)
    assert not dl.em_represents(FinStructure.pure_set(3), C, L=3)
    I = FinStructure.equivalence([[1, 2], [3, 4]])
    M = FinStructure([1, 2, 3, 4], {"P": [(1,), (2,)]})
    assert dl.em_represents(I, M, L=3)
    assert not dl.em_represents(I, M, L=2)


def test_unary_reduct_tables():
    ident = dl.unary_reduct(FinStructure([1, 2, 3], functions={"f": {1: 1, 2: 2, 3: 3}}))
    # f equals the identity, so the closure has a single member
    assert set(ident.relations) == {"E_id"}
    assert ident.relations["E_id"] == {(a, a) for a in (1, 2, 3)}
    const = dl.unary_reduct(FinStructure([1, 2, 3], functions={"f": {1: 1, 2: 1, 3: 1}}))
    assert len(const.relations["E_f"]) == 9
    two = dl.unary_reduct(FinStructure([1, 2, 3], functions={"f": {1: 2, 2: 2, 3: 3}, "g": {1: 1, 2: 3, 3: 3}}))
    assert two.relations["P_f_g"] == {(3,)}
    assert two.relations["E_g"] == {(1, 1), (2, 2), (3, 3), (2, 3), (3, 2)}
    assert two.relations["E_f.g"] == two.relations["E_g"]  # f after g
    assert len(two.relations["E_g.f"]) == 9


def test_reduct_isolates_types():
    cycle = FinStructure([1, 2, 3, 4], functions={"f": {1: 2, 2: 3, 3: 4, 4: 1}})
    assert dl.reduct_isolates(cycle, 4) is None
    # the reduct of the 4-cycle cannot see the cyclic order, so it does not represent it
    assert not dl.em_represents(dl.unary_reduct(cycle), cycle, L=4)


def test_symmetry_and_dimension():
    E = FinStructure.equivalence([[1, 2], [3]])
    X = stone_space(E, None, "extendable", 4, q=1)
    assert dl.is_symmetric(X) and dl.is_two_dimensional(X)
    T = terminal(3)
    assert dl.is_symmetric(T) and dl.is_two_dimensional(T)
    assert not dl.is_symmetric(stone_space(FinStructure.chain(3), "x <= y", "plain", 3))
