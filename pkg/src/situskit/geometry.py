"""Finite metric spaces and topologies as situses, and their lifting checks."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from typing import Hashable, Iterable, Mapping

import numpy as np

from .errors import DomainError, PreconditionError, ResourceError
from .filters import Carrier, Filter, PredicateFilter, SetMap
from .homlift import LiftingInstance, SitusMorphism, Verdict, exists_surjection, lifting_property
from .simplex import (
    TruncatedSitus,
    corepresented_by_set,
    initial,
    shift_nat,
    terminal,
)
from .stone import initial_interval, order_object

__all__ = [
    "FinMetric",
    "FinTopology",
    "metric_situs",
    "metric_base",
    "uniformity_axioms",
    "covering_situs",
    "covering_sets",
    "is_morphism_uniform",
    "is_complete_lp",
    "compactness_lp",
    "metric_corpus",
    "topology_corpus",
]


class FinMetric:
    """Points plus a symmetric distance table with exact (rational) values."""

    def __init__(self, points: Iterable[Hashable], dist: Mapping | Iterable):
        self.points = Carrier(points)
        pts = self.points.elements
        n = len(pts)
        table = {}
        if isinstance(dist, Mapping):
            for a in pts:
                table[a, a] = Fraction(0)
            for (a, b), v in dist.items():
                v = Fraction(v)
                for key in ((a, b), (b, a)):
                    if key in table and table[key] != v:
                        raise DomainError(f"conflicting distances for {a!r}, {b!r}")
                    table[key] = v
        else:
            rows = [list(r) for r in dist]
            if len(rows) != n or any(len(r) != n for r in rows):
                raise DomainError("distance matrix has the wrong shape")
            table = {(a, b): Fraction(rows[i][j]) for i, a in enumerate(pts) for j, b in enumerate(pts)}
        for a, b in product(pts, repeat=2):
            if (a, b) not in table:
                raise DomainError(f"missing distance between {a!r} and {b!r}")
        for a in pts:
            if table[a, a] != 0:
                raise DomainError(f"dist({a!r}, {a!r}) is not zero")
        for a, b in product(pts, repeat=2):
            if table[a, b] != table[b, a]:
                raise DomainError("distance is not symmetric")
            if table[a, b] < 0 or (a != b and table[a, b] == 0):
                raise DomainError("distances between distinct points must be positive")
        for a, b, c in product(pts, repeat=3):
            if table[a, c] > table[a, b] + table[b, c]:
                raise DomainError(f"triangle inequality fails at {a!r}, {b!r}, {c!r}")
        self.dist = table

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return f"FinMetric({list(self.points.elements)!r})"

    def diameter(self, t) -> Fraction:
        return max((self.dist[a, b] for a, b in combinations(t, 2)), default=Fraction(0))

    def thresholds(self) -> list[Fraction]:
        """The distinct positive distances, then one value above the diameter."""
        vals = sorted({v for v in self.dist.values() if v > 0})
        return vals + [(vals[-1] if vals else Fraction(0)) + 1]


def metric_base(M: FinMetric, n: int) -> list[frozenset]:
    """Generators {tuples of diameter < eps} for every threshold eps."""
    tuples = list(product(M.points.elements, repeat=n))
    return [frozenset(t for t in tuples if M.diameter(t) < eps) for eps in M.thresholds()]


def metric_situs(M: FinMetric, N: int = 3) -> TruncatedSitus:
    """|M| with the filters of uniform neighbourhoods of the diagonal."""
    filters = []
    for n in range(1, N + 1):
        carrier = Carrier(product(M.points.elements, repeat=n))
        filters.append(Filter(carrier, metric_base(M, n)))
    X = corepresented_by_set(M.points.elements, N, filters, name="metric")
    X.metric = M
    return X


def uniformity_axioms(U: Filter) -> dict:
    """Uniformity axioms for a filter on X x X, plus the induced level-3 filter.

    A finite filter has a least element V; every axiom only needs checking
    against it (and W = V is the best candidate in the composition axiom).
    """
    if isinstance(U, PredicateFilter):
        raise DomainError("needs a filter with a materialised base")
    pairs = U.carrier.elements
    if any(not (isinstance(p, tuple) and len(p) == 2) for p in pairs):
        raise DomainError("carrier is not a set of pairs")
    pts = sorted({p[0] for p in pairs} | {p[1] for p in pairs}, key=repr)
    if len(pairs) != len(pts) ** 2:
        raise DomainError("carrier is not a full square X x X")
    V = U.core
    diag = {(a, a) for a in pts}
    inverse = {(b, a) for a, b in V}
    comp = {(a, c) for a, b in V for b2, c in V if b == b2}
    triples = Carrier(product(pts, repeat=3))
    level3 = Filter(triples, core=[t for t in triples if (t[0], t[1]) in V and (t[1], t[2]) in V])
    return {
        "U_I": diag <= V,
        "U_II": U.is_neighborhood(inverse),
        "U_III": comp <= V,
        "level3": level3,
    }


# -- topologies -----------------------------------------------------------------------

class FinTopology:
    """A finite set with a family of open sets closed under unions and intersections."""

    def __init__(self, points: Iterable[Hashable], opens: Iterable[Iterable]):
        self.points = Carrier(points)
        full = self.points.as_set()
        ops = {self.points.check_subset(o) for o in opens}
        ops |= {frozenset(), full}
        for a, b in combinations(list(ops), 2):
            if a | b not in ops or a & b not in ops:
                raise DomainError("open sets are not closed under union and intersection")
        self.opens = frozenset(ops)

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return f"FinTopology({list(self.points.elements)!r}, {len(self.opens)} opens)"

    def minimal_open(self, x) -> frozenset:
        out = self.points.as_set()
        for o in self.opens:
            if x in o:
                out &= o
        return out

    def neighbourhoods(self, x) -> list[frozenset]:
        """Supersets of the minimal open set around x."""
        m = self.minimal_open(x)
        rest = [a for a in self.points if a not in m]
        return [m | frozenset(c) for k in range(len(rest) + 1) for c in combinations(rest, k)]

    def is_connected(self) -> bool:
        full = self.points.as_set()
        return not any(o and o != full and (full - o) in self.opens for o in self.opens)

    def is_continuous_map(self, f: SetMap, other: "FinTopology") -> bool:
        return all(f.preimage(o) in self.opens for o in other.opens)


def covering_sets(T: FinTopology, *, guard_override: bool = False):
    """Every covering set  U {x} x U_x  for assignments x -> neighbourhood U_x."""
    if len(T) > 4 and not guard_override:
        raise ResourceError("covering enumeration is limited to 4 points", ("points", 4))
    pts = T.points.elements
    for choice in product(*(T.neighbourhoods(x) for x in pts)):
        yield frozenset((x, y) for x, U in zip(pts, choice) for y in U)


def covering_situs(T: FinTopology, N: int = 3) -> TruncatedSitus:
    """|X| with the filter of coverings at level 2, induced by consecutive pairs above.

    The intersection of all covering sets is the one built from minimal open
    neighbourhoods, so the level-2 core is  U {x} x U_x  with U_x minimal.
    """
    pts = T.points.elements
    core2 = {(x, y) for x in pts for y in T.minimal_open(x)}
    filters = []
    for n in range(1, N + 1):
        carrier = Carrier(product(pts, repeat=n))
        core = [t for t in carrier if all((t[i], t[i + 1]) in core2 for i in range(n - 1))]
        filters.append(Filter(carrier, core=core))
    X = corepresented_by_set(pts, N, filters, name="covering")
    X.topology = T
    return X


def is_morphism_uniform(f: SetMap, M1: FinMetric, M2: FinMetric, N: int = 2) -> bool:
    """Is the induced map of metric situses continuous at every level?"""
    if f.source != M1.points or f.target != M2.points:
        raise DomainError("map does not go between the two metric spaces")
    X, Y = metric_situs(M1, N), metric_situs(M2, N)
    return SitusMorphism(X, Y, None, vertex_map=dict(f.table)).is_valid()


# -- lifting checks --------------------------------------------------------------------

def is_complete_lp(M: FinMetric, I: int = 3, N: int = 2, tail: int = 1) -> Verdict:
    """Completeness as two lifting properties.

    (iv') bottom -> |I|^{tails} against M[+inf] -> M, where a lift picks a limit;
    (v'') I^{<= tails} -> (I + {inf})^{<= tails + inf} against M -> top.
    """
    X = metric_situs(M, N + 1)
    p = shift_nat(X)
    chain = order_object(I, "set", "tails", N, tail=tail) if I else None
    if chain is None:
        iv = Verdict("complete-iv", True, config={"squares_checked": 0})
    else:
        i = SitusMorphism(initial(N), chain, [np.zeros(0, dtype=np.int64)] * N)
        iv = lifting_property(LiftingInstance(i, p), name="complete-iv")
    Y = metric_situs(M, N)
    if I:
        small = order_object(I, "ordered", "tails", N, tail=tail)
        big = order_object(I + 1, "ordered", "tails", N, tail=tail + 1)
        inc = SitusMorphism(small, big, None, vertex_map={v: v for v in small.vertices})
        v2 = lifting_property(LiftingInstance(inc, SitusMorphism.to_terminal(Y, terminal(N))), name="complete-v")
    else:
        v2 = Verdict("complete-v", True, config={"squares_checked": 0})
    return Verdict(
        "complete",
        iv.holds and v2.holds,
        True,
        witness=None if iv.holds and v2.holds else {"iv": iv.witness, "v": v2.witness},
        config={"chain": I, "depth": N, "tail": tail},
        extra={"iv_prime": iv.holds, "v_double_prime": v2.holds, "squares": [iv.config["squares_checked"], v2.config["squares_checked"]]},
    )


def compactness_lp(T: FinTopology, alpha: int | None = None, N: int = 2) -> Verdict:
    """bottom -> X against (smaller chains) -> alpha^>, for a connected finite space X.

    A map into the chain alpha^> factors through a shorter chain exactly when
    it misses a value, so the lifting is decided by looking for a continuous
    surjection X -> alpha^>.  The default alpha = |X| + 1 plays the part of a
    limit ordinal: no finite image can exhaust it.
    """
    if not T.is_connected():
        raise PreconditionError("compactness lifting needs a connected space")
    alpha = len(T) + 1 if alpha is None else alpha
    if alpha < 1:
        raise DomainError("alpha must be positive")
    X = covering_situs(T, N)
    A = initial_interval(alpha, N)
    p = _subchain_union(alpha, N, A)
    i = SitusMorphism(initial(N), X, [np.zeros(0, dtype=np.int64)] * N)
    lp = lifting_property(LiftingInstance(i, p), name="compact")
    surj = exists_surjection(X, A)
    return Verdict(
        "compact",
        lp.holds,
        surj is None,
        witness=_vertex_labels(lp.witness["bottom"]) if not lp.holds else None,
        config={"alpha": alpha, "depth": N},
        extra={"squares": lp.config["squares_checked"], "components": len(p.source.components)},
    )


def _vertex_labels(h):
    return {str(k[0]): v[0] for k, v in h.vertex_images().items()}


def _subchain_union(alpha: int, N: int, A: TruncatedSitus) -> SitusMorphism:
    """The disjoint union of beta^> over order embeddings beta -> alpha (beta < alpha), mapped into alpha^>."""
    comps = [e for beta in range(1, alpha) for e in combinations(range(alpha), beta)]
    verts = [(k, g) for k, e in enumerate(comps) for g in range(len(e))]
    carriers, filters = [], []
    for n in range(1, N + 1):
        carrier = []
        core = []
        for k, e in enumerate(comps):
            for t in product(range(len(e)), repeat=n):
                carrier.append(tuple((k, g) for g in t))
                if all(a >= b for a, b in zip(t, t[1:])):
                    core.append(carrier[-1])
        carriers.append(carrier)
        filters.append(Filter(carrier, core=core))
    U = TruncatedSitus(N, carriers, filters, vertices=verts, name="union of shorter chains")
    U.components = comps
    return SitusMorphism(U, A, None, vertex_map={(k, g): comps[k][g] for k, g in verts})


# -- corpora ----------------------------------------------------------------------------

def metric_corpus(max_points: int = 3, values=(1, 2, 3)) -> list[FinMetric]:
    """Every metric on 1..n (n <= max_points) with distances drawn from ``values``."""
    out = []
    for n in range(1, max_points + 1):
        pts = list(range(1, n + 1))
        pairs = list(combinations(pts, 2))
        for ds in product(values, repeat=len(pairs)):
            try:
                out.append(FinMetric(pts, dict(zip(pairs, ds))))
            except DomainError:
                continue
    return out


def topology_corpus(max_points: int = 3) -> list[FinTopology]:
    """Every topology on 1..n for n <= max_points (labelled)."""
    out = []
    for n in range(1, max_points + 1):
        pts = list(range(1, n + 1))
        full = frozenset(pts)
        middle = [frozenset(c) for k in range(1, n) for c in combinations(pts, k)]
        for bits in range(2 ** len(middle)):
            ops = {frozenset(), full} | {m for k, m in enumerate(middle) if bits >> k & 1}
            if all(a | b in ops and a & b in ops for a in ops for b in ops):
                out.append(FinTopology(pts, ops))
    return out
