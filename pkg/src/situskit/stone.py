"""Named situses: Stone spaces of structures, order and tails objects, trees.

Every constructor returns a :class:`TruncatedSitus` whose level filters are
principal, except the antichain objects of a tree, whose filters are
hitting filters ("meets every subtree copy").
"""

from __future__ import annotations

from enum import Enum
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .errors import DepthError, DomainError, ResourceError
from .filters import Carrier, Filter, HittingFilter
from .fostruct import FinStructure, Formula, eval_formula, orbit_labels, parse
from .homlift import SitusMorphism
from .indisc import (
    Component,
    IndiscKind,
    as_components,
    cutoff_components,
    extension_witness,
    passes,
)
from .simplex import (
    FinPreorder,
    LevelEquivalence,
    TruncatedSitus,
    check_guard,
    corepresented_by_preorder,
    corepresented_by_set,
    quotient,
    truncate,
)


class StoneVariant(Enum):
    EXTENDABLE = "extendable"
    PLAIN = "plain"
    CONSECUTIVE = "consecutive"


def _variant(v) -> StoneVariant:
    return v if isinstance(v, StoneVariant) else StoneVariant(str(v).lower())


def default_kind(variant: StoneVariant) -> IndiscKind:
    return IndiscKind.CONSECUTIVE if variant is StoneVariant.CONSECUTIVE else IndiscKind.WITH_REPS


def sigma_components(M: FinStructure, sigma=None, *, q: int | None = None, A: Sequence = (), max_r: int = 3) -> list[Component]:
    """Components for a formula list, a depth-q cutoff over A, or both."""
    comps = as_components(M, sigma) if sigma is not None else []
    if q is not None:
        comps = comps + cutoff_components(M, q, max_r, A)
    return comps


def level_core(M: FinStructure, comps, n: int, variant: StoneVariant, *, distinct: int | None = None, kind=None) -> list[tuple]:
    """Position tuples of length n in the least neighbourhood."""
    kind = kind or default_kind(variant)
    N = len(M) if distinct is None else distinct
    out = []
    for t in product(range(len(M)), repeat=n):
        if variant is StoneVariant.EXTENDABLE:
            ok = extension_witness(M, comps, t, N, kind, embed=True) is not None
        else:
            ok = passes(M, comps, t, kind)
        if ok:
            out.append(t)
    return out


def stone_space(
    M: FinStructure,
    sigma=None,
    variant=StoneVariant.EXTENDABLE,
    depth: int = 3,
    *,
    distinct: int | None = None,
    q: int | None = None,
    A: Sequence = (),
    kind: IndiscKind | None = None,
    guard_override: bool = False,
) -> TruncatedSitus:
    """M with the filter of (extendable) indiscernible tuples.

    ``sigma`` is a formula, a list of formulas or components; ``q`` adds every
    formula of quantifier depth <= q over parameters ``A`` (arity <= depth).
    Extendable tuples are faces of a passing sequence with at least
    ``distinct`` (default |M|) distinct values.
    """
    variant = _variant(variant)
    check_guard(n_atoms=len(M), depth=depth, override=guard_override)
    comps = sigma_components(M, sigma, q=q, A=A, max_r=depth)
    els = M.elements
    filters = []
    for n in range(1, depth + 1):
        carrier = Carrier(product(els, repeat=n))
        if not comps:
            filters.append(Filter.antidiscrete(carrier))
            continue
        core = [tuple(els[i] for i in t) for t in level_core(M, comps, n, variant, distinct=distinct, kind=kind)]
        filters.append(Filter(carrier, core=core))
    X = corepresented_by_set(els, depth, filters, name=f"stone[{variant.value}]", check=False, guard_override=guard_override)
    X.meta = {"variant": variant.value, "distinct": len(M) if distinct is None else distinct, "q": q, "A": list(A)}
    return X


def orbit_equivalence(M: FinStructure, A: Sequence = (), depth: int = 3) -> LevelEquivalence:
    """Same type over A, read as same Aut(M/A)-orbit, at every level."""
    labels = {n: orbit_labels(M, A, n) for n in range(1, depth + 1)}
    return LevelEquivalence({n: labels[n].__getitem__ for n in labels})


def stone_quotient(M: FinStructure, A: Sequence = (), variant=StoneVariant.EXTENDABLE, depth: int = 3, sigma=None, **kw) -> TruncatedSitus:
    """``stone_space`` modulo types over A (orbits of Aut(M/A))."""
    X = stone_space(M, sigma, variant, depth, A=A, **kw)
    return quotient(X, orbit_equivalence(M, A, depth), name="stone/A")


# -- formulas with parameters from M ------------------------------------------------

def over_parameter(M: FinStructure, t: Sequence[int], b: int, q: int, kind: IndiscKind) -> bool:
    """b occupies at most one run of t, and t without b is indiscernible over b."""
    runs = 0
    prev = False
    for v in t:
        cur = v == b
        if cur and not prev:
            runs += 1
        prev = cur
    if runs > 1:
        return False
    rest = [v for v in t if v != b]
    comps = cutoff_components(M, q, max(1, len(t)), (M.elements[b],))
    return passes(M, comps, rest, kind)


def parameter_space(
    M: FinStructure,
    q: int = 1,
    depth: int = 3,
    variant=StoneVariant.CONSECUTIVE,
    *,
    guard_override: bool = False,
) -> TruncatedSitus:
    """Finite stand-in for M with all formulas over M.

    A tuple is in the least neighbourhood when it passes the parameter-free
    depth-q cutoff and, for every element b, b occurs in at most one run and
    the remaining entries are indiscernible over b.  A tuple meeting b once and
    moving on is how a sequence that is eventually indiscernible over b looks
    after truncation.
    """
    variant = _variant(variant)
    if variant is StoneVariant.EXTENDABLE:
        raise DomainError("parameter space is defined for the plain and consecutive variants")
    kind = default_kind(variant)
    base = stone_space(M, None, variant, depth, q=q, guard_override=guard_override)
    els = M.elements
    filters = []
    for n in range(1, depth + 1):
        F = base.filters[n]
        core = []
        for t in F.core:
            pos = [M.idx(a) for a in t]
            if all(over_parameter(M, pos, b, q, kind) for b in range(len(M))):
                core.append(t)
        filters.append(Filter(F.carrier, core=core))
    X = corepresented_by_set(els, depth, filters, name=f"stone[{variant.value}, L(M)]", check=False)
    X.meta = {"variant": variant.value, "q": q, "parameters": "all"}
    return X


def identity_on_vertices(X: TruncatedSitus, Y: TruncatedSitus) -> SitusMorphism:
    """The morphism X -> Y that is the identity on underlying tuples."""
    return SitusMorphism(X, Y, None, vertex_map={v: v for v in X.vertices})


# -- linear orders ------------------------------------------------------------------

class Flavor(Enum):
    ORDERED = "ordered"
    SET = "set"


class OrderFilter(Enum):
    ANTIDISCRETE = "antidiscrete"
    TAILS = "tails"


def _chain(I) -> FinPreorder:
    if isinstance(I, FinPreorder):
        if not I.is_linear:
            raise DomainError("order objects need a linear order")
        return I
    return FinPreorder.chain(I)


def order_object(
    I,
    flavor=Flavor.ORDERED,
    filter=OrderFilter.ANTIDISCRETE,
    depth: int = 3,
    *,
    tail: int = 1,
    guard_override: bool = False,
) -> TruncatedSitus:
    """I^<= (ordered) or |I| (set flavor), antidiscrete or with the tails filter.

    The tails filter of a finite chain is principal; ``tail`` is the length of
    the final segment it is generated by (1 gives the top element alone).
    """
    flavor = Flavor(flavor) if not isinstance(flavor, Flavor) else flavor
    filter = OrderFilter(filter) if not isinstance(filter, OrderFilter) else filter
    P = _chain(I)
    base = FinPreorder.set(P.elements) if flavor is Flavor.SET else P
    X = corepresented_by_preorder(base, depth, name=f"order[{flavor.value},{filter.value}]", guard_override=guard_override)
    X.order = P
    if filter is OrderFilter.TAILS and len(P):
        if tail < 1:
            raise DomainError("tail length must be positive")
        final = set(tuple(P.elements)[max(0, len(P) - tail):])
        X.filters = [None] + [
            Filter(X.carriers[n], core=[t for t in X.carriers[n] if set(t) <= final]) for n in range(1, depth + 1)
        ]
        X._masks = {}
    X.meta = {"flavor": flavor.value, "filter": filter.value, "tail": tail, "length": len(P)}
    return X


def star_order(k: int, depth: int = 3) -> TruncatedSitus:
    """Vertices '*' and 1..k; non-star entries of a small tuple occur in weakly increasing order."""
    if k < 1:
        raise DomainError("k must be positive")
    verts = ["*"] + list(range(1, k + 1))

    def mono(t):
        vals = [v for v in t if v != "*"]
        return all(a <= b for a, b in zip(vals, vals[1:]))

    filters = []
    for n in range(1, depth + 1):
        carrier = Carrier(product(verts, repeat=n))
        filters.append(Filter(carrier, core=[t for t in carrier if mono(t)]))
    return corepresented_by_set(verts, depth, filters, name=f"star({k})", check=False)


def monotone_split(t: Sequence, pieces: int) -> bool:
    """Can t be split into at most ``pieces`` subsequences, each weakly increasing or weakly decreasing?"""
    n = len(t)
    state: list = []  # (last value, direction or None)

    def rec(i):
        if i == n:
            return True
        v = t[i]
        for k in range(len(state)):
            last, d = state[k]
            for nd in ((d,) if d is not None else ("up", "down")):
                if (nd == "up" and last <= v) or (nd == "down" and last >= v):
                    state[k] = (v, nd if last != v else d)
                    if rec(i + 1):
                        return True
                    state[k] = (last, d)
        if len(state) < pieces:
            state.append((v, None))
            if rec(i + 1):
                return True
            state.pop()
        return False

    return rec(0)


def monotone_pieces_order(I, n_pieces: int = 1, depth: int = 3) -> TruncatedSitus:
    """|I| with small sets the tuples splitting into at most n_pieces monotone subsequences."""
    if n_pieces < 1:
        raise DomainError("need at least one piece")
    P = _chain(I)
    rank = {a: i for i, a in enumerate(P.elements)}
    filters = []
    for n in range(1, depth + 1):
        carrier = Carrier(product(P.elements, repeat=n))
        filters.append(Filter(carrier, core=[t for t in carrier if monotone_split([rank[a] for a in t], n_pieces)]))
    X = corepresented_by_set(P.elements, depth, filters, name=f"monotone({n_pieces})", check=False)
    X.order = P
    return X


def initial_interval(alpha: int, depth: int = 3) -> TruncatedSitus:
    """The chain 0..alpha-1 with small sets the weakly decreasing tuples."""
    verts = list(range(alpha))
    filters = []
    for n in range(1, depth + 1):
        carrier = Carrier(product(verts, repeat=n))
        filters.append(Filter(carrier, core=[t for t in carrier if all(a >= b for a, b in zip(t, t[1:]))]))
    return corepresented_by_set(verts, depth, filters, name=f"interval({alpha})", check=False)


# -- the consistency space of a formula ------------------------------------------------

def consistency_space(M: FinStructure, phi: Formula, depth: int = 3) -> TruncatedSitus:
    """Vertices are parameter tuples b; (b_1..b_n) is small when some x satisfies every phi(x, b_i).

    The first free variable of phi is x.  With a single parameter variable the
    vertices are plain elements.
    """
    if isinstance(phi, str):
        phi = parse(phi, M.signature)
    if phi.arity < 2:
        raise DomainError("formula needs x and at least one parameter variable")
    p = phi.arity - 1
    els = M.elements
    verts = list(els) if p == 1 else list(product(els, repeat=p))
    sat = {}
    for v in verts:
        b = (v,) if p == 1 else v
        sat[v] = frozenset(x for x in els if eval_formula(M, phi, (x,) + tuple(b)))
    filters = []
    for n in range(1, depth + 1):
        carrier = Carrier(product(verts, repeat=n))
        core = []
        for t in carrier:
            common = frozenset(els)
            for v in t:
                common = common & sat[v]
            if common:
                core.append(t)
        filters.append(Filter(carrier, core=core))
    X = corepresented_by_set(verts, depth, filters, name="consistency", check=False)
    X.meta = {"formula": str(phi)}
    return X


# -- trees ----------------------------------------------------------------------------

class FinTree:
    """Sequences over 1..b of length <= d; the root is ()."""

    def __init__(self, b: int, d: int):
        if b < 1 or d < 0:
            raise DomainError("need b >= 1 and d >= 0")
        size = sum(b ** k for k in range(d + 1))
        if size > 40:
            raise ResourceError(f"tree with {size} nodes exceeds the guard", ("tree_nodes", 40))
        self.b, self.d = b, d
        nodes = [()]
        frontier = [()]
        for _ in range(d):
            frontier = [s + (i,) for s in frontier for i in range(1, b + 1)]
            nodes.extend(frontier)
        self.nodes = tuple(sorted(nodes))  # tuple order on prefixes is the lexicographic order

    def __repr__(self):
        return f"FinTree(b={self.b}, d={self.d})"

    def __len__(self):
        return len(self.nodes)

    @staticmethod
    def is_prefix(s, t) -> bool:
        return len(s) <= len(t) and t[: len(s)] == s

    def comparable(self, s, t) -> bool:
        return self.is_prefix(s, t) or self.is_prefix(t, s)

    def children(self, s):
        return [s + (i,) for i in range(1, self.b + 1)] if len(s) < self.d else []

    def prefix_order(self) -> FinPreorder:
        return FinPreorder(self.nodes, self.is_prefix)

    def lex_order(self) -> FinPreorder:
        return FinPreorder.chain(self.nodes)

    def branches(self):
        return [s for s in self.nodes if len(s) == self.d]

    def copies(self, b: int | None = None, d: int | None = None) -> list[frozenset]:
        """Node sets of embedded copies of the full (b, d)-tree.

        A copy sends the root anywhere and the children of a node to b pairwise
        incomparable proper descendants of its image, listed in lex order.
        """
        b = self.b if b is None else b
        d = self.d if d is None else d
        below = {s: [t for t in self.nodes if len(t) > len(s) and self.is_prefix(s, t)] for s in self.nodes}

        def grow(root, depth_left):
            if depth_left == 0:
                return [frozenset([root])]
            out = []
            for kids in combinations(below[root], b):
                if any(self.comparable(u, v) for u, v in combinations(kids, 2)):
                    continue
                subs = [grow(k, depth_left - 1) for k in kids]
                for pick in product(*subs):
                    out.append(frozenset([root]).union(*pick))
            return out

        found = set()
        for r in self.nodes:
            found.update(grow(r, d))
        return sorted(found, key=lambda S: sorted(S))

    def antichain_tuples(self, n: int, nodes=None, *, strict: bool = False) -> list[tuple]:
        """Lex-weakly-increasing n-tuples whose distinct entries are pairwise incomparable."""
        nodes = self.nodes if nodes is None else sorted(nodes)
        out = []
        for t in product(nodes, repeat=n):
            if any(t[i] > t[i + 1] for i in range(n - 1)):
                continue
            distinct = sorted(set(t))
            if strict and len(distinct) < n:
                continue
            if any(self.comparable(u, v) for u, v in combinations(distinct, 2)):
                continue
            out.append(t)
        return out

    def fan_tuples(self, n: int) -> list[tuple]:
        """Tuples (s i_1, ..., s i_n) of children of one node with i_1 <= ... <= i_n."""
        out = []
        for s in self.nodes:
            kids = self.children(s)
            for idx in product(range(len(kids)), repeat=n):
                if list(idx) == sorted(idx):
                    out.append(tuple(kids[i] for i in idx))
        return out


def tree_objects(T: FinTree, depth: int = 2, *, copy_shape: tuple[int, int] | None = None) -> dict:
    """prefix, lex, antichain and prefix-union-antichain situses of a finite tree.

    A set of antichain tuples is large when, for every embedded copy of the
    full tree of ``copy_shape`` (default T's own shape), it contains a tuple of
    distinct nodes taken from that copy.  In the union object a set must also
    contain every prefix chain.
    """
    check_guard(n_atoms=None, depth=depth)
    copies = T.copies(*(copy_shape or (T.b, T.d)))
    prefix = corepresented_by_preorder(T.prefix_order(), depth, name="tree[prefix]")
    lex = corepresented_by_preorder(T.lex_order(), depth, name="tree[lex]")

    def blocks(n):
        return [T.antichain_tuples(n, sigma, strict=True) for sigma in copies]

    anti_carriers = [T.antichain_tuples(n) for n in range(1, depth + 1)]
    anti_filters = [HittingFilter(c, blocks(n)) for n, c in zip(range(1, depth + 1), anti_carriers)]
    anti = TruncatedSitus(depth, anti_carriers, anti_filters, vertices=T.nodes, name="tree[antichains]")
    uni_carriers, uni_filters = [], []
    for n in range(1, depth + 1):
        chains = prefix.carriers[n].elements
        seen = set(chains)
        carrier = list(chains) + [t for t in anti_carriers[n - 1] if t not in seen]
        uni_carriers.append(carrier)
        uni_filters.append(HittingFilter(carrier, blocks(n), required=chains))
    union = TruncatedSitus(depth, uni_carriers, uni_filters, vertices=T.nodes, name="tree[prefix+antichains]")
    return {"prefix": prefix, "lex": lex, "antichain": anti, "union": union, "copies": copies}


# -- shifted structure ----------------------------------------------------------------

def shifted_structure(
    M: FinStructure,
    depth: int = 2,
    *,
    sigma=None,
    q: int | None = 1,
    variant=StoneVariant.CONSECUTIVE,
    distinct: int | None = None,
    A: Sequence = (),
) -> TruncatedSitus:
    """M[+inf]: level n holds (n+1)-tuples whose last entry is a parameter.

    Consecutive and plain variants: small tuples are those whose first n
    entries are indiscernible with consecutive repetitions (resp. with
    repetitions) over the last entry, for the formulas in ``sigma`` and the
    depth-q cutoff.  Extendable variant: the first n entries extend to a
    sequence with ``distinct`` distinct values that is indiscernible over A
    and over A plus the last entry.
    """
    variant = _variant(variant)
    if depth < 1:
        raise DepthError("depth must be positive")
    els = M.elements
    width = depth + (len(M) if variant is StoneVariant.EXTENDABLE else 0)
    pcomps = as_components(M, sigma, param=True) if sigma is not None else []
    base = []
    if q is not None:
        pcomps = pcomps + cutoff_components(M, q, min(width, 3), A, param=True)
        if variant is StoneVariant.EXTENDABLE:
            base = cutoff_components(M, q, min(width, 3), A)
    kind = default_kind(variant)
    N = len(M) if distinct is None else distinct
    carriers, filters = [], []
    for n in range(1, depth + 1):
        carrier = Carrier(product(els, repeat=n + 1))
        core = []
        for t in product(range(len(M)), repeat=n + 1):
            seq, p = t[:-1], t[-1]
            if variant is StoneVariant.EXTENDABLE:
                ok = extension_witness(M, base + pcomps, seq, N, kind, embed=True, param=p) is not None
            else:
                ok = passes(M, pcomps, seq, kind, p)
            if ok:
                core.append(tuple(els[i] for i in t))
        carriers.append(carrier.elements)
        filters.append(Filter(carrier, core=core))

    def face_fn(idx, x):
        return tuple(x[i - 1] for i in idx) + (x[-1],)

    X = TruncatedSitus(depth, carriers, filters, face_fn, name="shifted")
    X.meta = {"variant": variant.value, "q": q, "A": list(A), "distinct": N}
    return X


def drop_last(S: TruncatedSitus, X: TruncatedSitus) -> SitusMorphism:
    """The natural map S -> X forgetting the last coordinate, (x_1..x_n, p) -> (x_1..x_n)."""
    if X.depth != S.depth:
        X = truncate(X, S.depth)
    maps = []
    for n in range(1, S.depth + 1):
        tgt = X.carriers[n]
        maps.append(np.array([tgt.index(tuple(x[:-1])) for x in S.carriers[n]], dtype=np.int64))
    return SitusMorphism(S, X, maps)


def quotient_map(X: TruncatedSitus, Q: TruncatedSitus) -> SitusMorphism:
    """Projection onto a quotient built by :func:`quotient`."""
    from .simplex import quotient_projection

    return quotient_projection(X, Q)


__all__ = [
    "StoneVariant",
    "Flavor",
    "OrderFilter",
    "FinTree",
    "stone_space",
    "stone_quotient",
    "orbit_equivalence",
    "parameter_space",
    "identity_on_vertices",
    "order_object",
    "star_order",
    "monotone_split",
    "monotone_pieces_order",
    "initial_interval",
    "consistency_space",
    "tree_objects",
    "shifted_structure",
    "drop_last",
    "sigma_components",
    "level_core",
    "default_kind",
]
