import itertools

import pytest

from situskit import geometry as geo
from situskit.errors import DomainError, PreconditionError
from situskit.filters import Carrier, Filter, SetMap
from situskit.simplex import validate


def two_points():
    return geo.FinMetric(["a", "b"], {("a", "b"): 1})


def test_metric_axioms_are_checked():
    with pytest.raises(DomainError):
        geo.FinMetric([1, 2, 3], {(1, 2): 1, (2, 3): 1, (1, 3): 3})
    with pytest.raises(DomainError):
        geo.FinMetric([1, 2], {(1, 2): 0})
    with pytest.raises(DomainError):
        geo.FinMetric([1, 2, 3], {(1, 2): 1})


def test_metric_situs_cores():
    X = geo.metric_situs(geo.FinMetric(["p"], {}), 2)
    assert all(X.filters[n].is_antidiscrete() for n in (1, 2))
    X = geo.metric_situs(two_points(), 2)
    assert X.filters[2].core == {("a", "a"), ("b", "b")}
    assert validate(X) == []


def test_uniformity_axioms():
    for M in geo.metric_corpus():
        r = geo.uniformity_axioms(geo.metric_situs(M, 2).filters[2])
        assert r["U_I"] and r["U_II"] and r["U_III"]
    sq = Carrier(itertools.product("ab", repeat=2))
    full = geo.uniformity_axioms(Filter.antidiscrete(sq))
    assert full["U_I"] and full["U_III"]
    assert not geo.uniformity_axioms(Filter(sq, core=[("a", "b")]))["U_I"]
    with pytest.raises(DomainError):
        geo.uniformity_axioms(Filter([1, 2]))


def test_covering_situs():
    discrete = geo.FinTopology("ab", [set(), {"a"}, {"b"}, {"a", "b"}])
    assert geo.covering_situs(discrete, 2).filters[2].core == {("a", "a"), ("b", "b")}
    indiscrete = geo.FinTopology("ab", [set(), {"a", "b"}])
    assert geo.covering_situs(indiscrete, 2).filters[2].is_antidiscrete()
    sierpinski = geo.FinTopology("ab", [set(), {"a"}, {"a", "b"}])
    core = geo.covering_situs(sierpinski, 2).filters[2].core
    assert core == {("a", "a"), ("b", "a"), ("b", "b")}


def test_uniform_maps():
    M = geo.metric_corpus()[-1]
    pts = list(M.points)
    for img in itertools.product(pts, repeat=len(pts)):
        f = SetMap(M.points, M.points, dict(zip(pts, img)))
        assert geo.is_morphism_uniform(f, M, M)


def test_completeness():
    M = geo.FinMetric([1, 2, 3], {(1, 2): 1, (2, 3): 2, (1, 3): 3})
    v = geo.is_complete_lp(M)
    assert v.holds and v.extra["iv_prime"] and v.extra["v_double_prime"]
    assert geo.is_complete_lp(geo.FinMetric(["p"], {})).holds
    assert geo.is_complete_lp(M, I=0).holds


def test_compactness():
    indiscrete = geo.FinTopology("ab", [set(), {"a", "b"}])
    assert geo.compactness_lp(indiscrete, 3).holds
    assert geo.compactness_lp(geo.FinTopology("p", [set(), {"p"}])).holds
    discrete = geo.FinTopology("ab", [set(), {"a"}, {"b"}, {"a", "b"}])
    with pytest.raises(PreconditionError):
        geo.compactness_lp(discrete)


def test_corpora():
    assert len(geo.metric_corpus()) == 28
    tops = geo.topology_corpus()
    assert len(tops) == 34
    assert sum(T.is_connected() for T in tops) == 23
