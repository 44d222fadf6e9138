"""Dividing lines, each checked twice: a direct search and a lifting property.

Every checker returns a :class:`Verdict` whose ``holds`` is the lifting side
and ``oracle_holds`` the combinatorial side.  Infinite sequences are replaced
by a chain of explicit length and a target number of distinct elements;
infinite formula sets by the depth-q cutoff.  Both are echoed in ``config``.
"""

from __future__ import annotations

from itertools import combinations, permutations, product
from typing import Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .filters import Filter, SetMap
from .fostruct import FinStructure, Formula, automorphisms, eval_formula, qtype_classes, orbit_labels
from .homlift import LiftingInstance, SitusMorphism, Verdict, exists_surjection, iter_homs, lifting_property
from .indisc import IndiscKind, as_components, cutoff_components, extension_witness, passes
from .simplex import (
    FinPreorder,
    TruncatedSitus,
    corepresented_by_set,
    face_indices,
    quotient,
    terminal,
    initial,
)
from .stone import (
    FinTree,
    StoneVariant,
    consistency_space,
    identity_on_vertices,
    monotone_pieces_order,
    orbit_equivalence,
    order_object,
    parameter_space,
    shifted_structure,
    star_order,
    stone_space,
    tree_objects,
)

__all__ = [
    "Verdict",
    "stability",
    "eventual_stability",
    "nip",
    "abab_square",
    "op_nsop",
    "op_oracle",
    "nsop",
    "non_dividing",
    "tree_property",
    "em_represents",
    "unary_reduct",
    "reduct_isolates",
    "is_symmetric",
    "is_two_dimensional",
]


def _chain_length(M, I):
    if I is None:
        return len(M) + 2
    return len(I) if isinstance(I, FinPreorder) else int(I)


def _labels(M, seq):
    return tuple(M.elements[i] for i in seq)


def _unwrap(x):
    return x[0] if isinstance(x, tuple) and len(x) == 1 else x


def _vertex_witness(h: SitusMorphism):
    return {str(_unwrap(k)): _unwrap(v) for k, v in h.vertex_images().items()}


def _square_witness(v: Verdict):
    if v.holds:
        return None
    w = v.witness
    return {"bottom": _vertex_witness(w["bottom"]), "top": _vertex_witness(w["top"])}


def _sigma(M, phi):
    if phi is None:
        return []
    if isinstance(phi, str):
        from .fostruct import parse

        phi = parse(phi, M.signature)
    return phi


# -- stability ----------------------------------------------------------------------

def stability_oracle(M: FinStructure, phi, L: int, N: int):
    """First WITH_REPS sequence of length L with >= N distinct values that is not order-indiscernible."""
    comps = as_components(M, phi)
    for seq in product(range(len(M)), repeat=L):
        if len(set(seq)) < N:
            continue
        if passes(M, comps, seq, IndiscKind.WITH_REPS) and not passes(M, comps, seq, IndiscKind.ORDER_WITH_REPS):
            return seq
    return None


def stability(M: FinStructure, phi=None, I=None, N: int | None = None, depth: int = 3) -> Verdict:
    """I^<= -> |I| has the left lifting property against M^{phi} -> top."""
    phi = _sigma(M, phi)
    L = _chain_length(M, I)
    N = len(M) if N is None else N
    X = stone_space(M, phi, StoneVariant.EXTENDABLE, depth, distinct=N)
    ordered = order_object(L, "ordered", "antidiscrete", depth)
    unordered = order_object(L, "set", "antidiscrete", depth)
    i = identity_on_vertices(ordered, unordered)
    top = terminal(depth)
    p = SitusMorphism.to_terminal(X, top)
    v = lifting_property(LiftingInstance(i, p), name="stability")
    bad = stability_oracle(M, phi, L, N) if phi else None
    return Verdict(
        "stability",
        v.holds,
        bad is None,
        witness={"sequence": _labels(M, bad) if bad is not None else None, "square": _square_witness(v)},
        config={"chain": L, "distinct": N, "depth": depth, "formula": [str(f) for f in _flist(phi)], "squares": v.config["squares_checked"]},
    )


def _flist(phi):
    if isinstance(phi, Formula):
        return [phi]
    return list(phi or [])


# -- eventual stability -----------------------------------------------------------------

def eventual_stability_oracle(M: FinStructure, phi, L: int, N: int, tail: int):
    """First sequence whose tail extends to an indiscernible sequence but not to an order-indiscernible one."""
    comps = as_components(M, phi)
    seen = {}
    for seq in product(range(len(M)), repeat=L):
        t = seq[L - tail:]
        if t not in seen:
            ev = extension_witness(M, comps, t, N, IndiscKind.WITH_REPS, embed=True) is not None
            ok = (not ev) or _order_extendable(M, comps, t, N)
            seen[t] = ok
        if not seen[t]:
            return seq
    return None


def _order_extendable(M, comps, t, N):
    return extension_witness(M, comps, t, N, IndiscKind.ORDER_WITH_REPS, embed=True) is not None


def eventual_stability(M: FinStructure, phi=None, I=None, N: int | None = None, depth: int = 3, tail: int | None = None) -> Verdict:
    """I^{<= tails} -> |I|^{tails} has the left lifting property against M^{phi} -> top.

    The tails filter is generated by the final segment of length ``tail``
    (default: the depth, so that a tail carries a full top simplex).
    """
    phi = _sigma(M, phi)
    L = _chain_length(M, I)
    N = len(M) if N is None else N
    m = depth if tail is None else tail
    X = stone_space(M, phi, StoneVariant.EXTENDABLE, depth, distinct=N)
    ordered = order_object(L, "ordered", "tails", depth, tail=m)
    unordered = order_object(L, "set", "tails", depth, tail=m)
    i = identity_on_vertices(ordered, unordered)
    p = SitusMorphism.to_terminal(X, terminal(depth))
    v = lifting_property(LiftingInstance(i, p), name="eventual-stability")
    bad = eventual_stability_oracle(M, phi, L, N, min(m, L)) if phi else None
    return Verdict(
        "eventual-stability",
        v.holds,
        bad is None,
        witness={"sequence": _labels(M, bad) if bad is not None else None, "square": _square_witness(v)},
        config={"chain": L, "distinct": N, "depth": depth, "tail": m, "formula": [str(f) for f in _flist(phi)]},
    )


# -- NIP ------------------------------------------------------------------------------------

def nip_oracle(M: FinStructure, L: int, q: int, tail: int, kind: IndiscKind, *, injective: bool = False):
    """First (sequence, b): the tail is indiscernible but not eventually indiscernible over b."""
    from .stone import over_parameter

    comps = cutoff_components(M, q, tail)
    for seq in product(range(len(M)), repeat=L):
        if injective and len(set(seq)) < L:
            continue
        t = seq[L - tail:]
        if not passes(M, comps, t, kind):
            continue
        for b in range(len(M)):
            if not over_parameter(M, t, b, q, kind):
                return seq, b
    return None


def _nip_square(M, L, q, depth, m, variant, injective):
    base = stone_space(M, None, variant, depth, q=q)
    top = parameter_space(M, q, depth, variant)
    p = identity_on_vertices(top, base)
    B = order_object(L, "ordered", "tails", depth, tail=m)
    i = SitusMorphism(initial(depth), B, [np.zeros(0, dtype=np.int64)] * depth)
    bottom = (lambda g: g.is_injective()) if injective else None
    return lifting_property(LiftingInstance(i, p), bottom=bottom, name="nip")


def nip(M: FinStructure, I=None, q: int = 1, N: int | None = None, depth: int = 3, tail: int | None = None) -> Verdict:
    """NIP through tails objects.

    ``holds``: bottom -> I^{<= tails} lifts against M'^{L(M)} -> M' (consecutive
    repetitions).  ``extra['almost']``: the same square with plain repetitions,
    restricted to injective bottom arrows.  The oracle asks directly whether
    every sequence with an indiscernible tail is eventually indiscernible over
    each parameter.  ``N`` is accepted for a uniform call signature; tails
    objects need no extension target.
    """
    L = _chain_length(M, I)
    m = min(depth if tail is None else tail, L)
    exact = _nip_square(M, L, q, depth, m, StoneVariant.CONSECUTIVE, False)
    almost = _nip_square(M, L, q, depth, m, StoneVariant.PLAIN, True)
    bad = nip_oracle(M, L, q, m, IndiscKind.CONSECUTIVE)
    bad_inj = nip_oracle(M, L, q, m, IndiscKind.WITH_REPS, injective=True)
    return Verdict(
        "nip",
        exact.holds,
        bad is None,
        witness={
            "sequence": _labels(M, bad[0]) if bad else None,
            "parameter": M.elements[bad[1]] if bad else None,
            "square": _square_witness(exact),
        },
        config={"chain": L, "qdepth": q, "depth": depth, "tail": m},
        extra={"almost": almost.holds, "almost_oracle": bad_inj is None, "injective_squares": almost.config["squares_checked"]},
    )


def abab_square(M: FinStructure, a, b, depth: int = 3, q: int = 1, L: int = 4):
    """The sequence a, b, a, b, ... as a morphism into the plain space, and whether it lifts to M^{L(M)}.

    Returns ``(continuous_into_plain, lifts)``.
    """
    seq = [a if k % 2 == 0 else b for k in range(L)]
    B = order_object(L, "ordered", "tails", depth, tail=min(depth, L))
    base = stone_space(M, None, StoneVariant.PLAIN, depth, q=q)
    top = parameter_space(M, q, depth, StoneVariant.PLAIN)
    vmap = dict(zip(B.vertices, seq))
    g = SitusMorphism(B, base, None, vertex_map=vmap)
    h = SitusMorphism(B, top, None, vertex_map=vmap)
    return g.is_valid(), h.is_valid()


# -- order property ----------------------------------------------------------------------

def op_oracle(M: FinStructure, k: int, q: int = 1):
    """a_1..a_k distinct, not exhausting M, and a depth-q formula with phi(a_i, a_j) iff i < j (i != j).

    A binary depth-q formula is any union of 2-type classes, so it suffices
    that no class holds both an increasing and a decreasing pair.
    """
    n = len(M)
    if k < 2:
        return tuple(M.elements[:k]) if n > k else None
    cls = qtype_classes(M, 2, q)
    for a in permutations(range(n), k):
        if n <= k:
            break
        up = {int(cls[a[i] * n + a[j]]) for i in range(k) for j in range(k) if i < j}
        down = {int(cls[a[i] * n + a[j]]) for i in range(k) for j in range(k) if i > j}
        if not up & down:
            return _labels(M, a)
    return None


def _linear_preorders(elements):
    """Ordered set partitions (weak orders) of ``elements`` as rank dicts."""
    elements = list(elements)
    n = len(elements)
    for ranks in product(range(n), repeat=n):
        used = sorted(set(ranks))
        if used != list(range(len(used))):
            continue
        yield dict(zip(elements, ranks))


def op_nsop(M: FinStructure, k: int = 2, q: int = 1, depth: int = 3, variant=StoneVariant.EXTENDABLE) -> Verdict:
    """Order property: a continuous surjection M -> star(k) versus a direct witness search.

    ``holds`` is True when there is *no* surjection (no order property at
    length k), matching the oracle's "no witness".  ``extra`` carries the
    NSOP items at length k:

    * ``ii``: a weak order on M with a chain of length >= k making the
      identity continuous into the monotone object, or None;
    * ``ii_surjection``: a continuous surjection onto the k-chain with the
      monotone filter, or None;
    * ``iii_bounded``: every map into the k-chain (resp. star(k)) misses a
      value, i.e. factors through a smaller one.
    """
    X = stone_space(M, None, variant, depth, q=q)
    star = star_order(k, depth)
    h = exists_surjection(X, star)
    wit = op_oracle(M, k, q)
    mono = monotone_pieces_order(k, 1, depth)
    s2 = exists_surjection(X, mono)
    return Verdict(
        "nop",
        h is None,
        wit is None,
        witness={"surjection": _vertex_witness(h) if h is not None else None, "sequence": wit},
        config={"k": k, "qdepth": q, "depth": depth, "variant": _variant_name(variant)},
        extra={
            "ii": _nsop_item(M, X, k, depth),
            "ii_surjection": _vertex_witness(s2) if s2 is not None else None,
            "iii_bounded": s2 is None,
            "iii_bounded_star": h is None,
        },
    )


def nsop(M: FinStructure, k: int = 2, q: int = 1, depth: int = 3, variant=StoneVariant.EXTENDABLE) -> Verdict:
    """The NSOP items alone; ``holds`` is item (ii).  No direct oracle is attached."""
    v = op_nsop(M, k, q, depth, variant)
    return Verdict(
        "nsop",
        v.extra["ii"] is None,
        None,
        witness={"preorder": v.extra["ii"], "surjection": v.extra["ii_surjection"]},
        config=v.config,
        extra={"iii_bounded": v.extra["iii_bounded"], "nop": v.holds},
    )


def _variant_name(v):
    return v.value if isinstance(v, StoneVariant) else StoneVariant(str(v).lower()).value


def _nsop_item(M, X, k, depth):
    """A weak order on M with a chain of length >= k making id: X -> M^{monotone} continuous, or None."""
    from .stone import monotone_split

    for rank in _linear_preorders(M.elements):
        if len(set(rank.values())) < k:
            continue
        if all(monotone_split([rank[a] for a in t], 1) for n in range(2, depth + 1) for t in X.filters[n].core):
            return {str(a): r for a, r in rank.items()}
    return None


# -- non-dividing --------------------------------------------------------------------------

def _a_components(M, q, A, width):
    return cutoff_components(M, q, min(width, 3), A)


def non_dividing_oracle(M: FinStructure, A, a, b, L: int, q: int = 1, N: int | None = None):
    """First A-indiscernible (extendable) sequence starting with b that no conjugate of a over Ab makes indiscernible."""
    N = L if N is None else N
    bi, ai = M.idx(b), M.idx(a)
    base = _a_components(M, q, A, L + N)
    pcomps = cutoff_components(M, q, min(L + N, 3), A, param=True)
    conj = sorted({g[ai] for g in automorphisms(M, list(A) + [b])})
    for rest in product(range(len(M)), repeat=L - 1):
        seq = (bi,) + rest
        if extension_witness(M, base, seq, N, IndiscKind.WITH_REPS, embed=True) is None:
            continue
        if not any(extension_witness(M, base + pcomps, seq, N, IndiscKind.WITH_REPS, embed=True, param=c) is not None for c in conj):
            return seq
    return None


def non_dividing(M: FinStructure, A: Sequence, a, b, I=None, N: int | None = None, q: int = 1, depth: int | None = None) -> Verdict:
    """tp(a/Ab) does not divide over A, as a lifting square over the type spaces modulo A.

    The square has the point (with the discrete filter) mapped to the type of
    (b, a) in M[+inf]/A, and a sequence I^<= -> M/A at the bottom.
    """
    L = _chain_length(M, I) if I is not None else 3
    if L > 3:
        raise PreconditionError("non-dividing squares are built at depth 3, so the chain has at most 3 elements")
    N = L if N is None else N
    D = 3 if depth is None else depth
    if D != 3:
        raise PreconditionError("non-dividing squares are built at depth 3")
    A = list(A)
    S = shifted_structure(M, D, q=q, variant=StoneVariant.EXTENDABLE, distinct=N, A=A)
    base = stone_space(M, None, StoneVariant.EXTENDABLE, D, q=q, A=A, distinct=N)
    SA = quotient(S, _shift_orbits(M, A, D), name="shifted/A")
    BA = quotient(base, orbit_equivalence(M, A, D), name="stone/A")
    p = _quotient_square_map(S, base, SA, BA)
    point = corepresented_by_set(["pt"], D, [Filter([("pt",) * n], core=frozenset()) for n in range(1, D + 1)], check=False)
    chain = order_object(L, "ordered", "antidiscrete", D)
    first = chain.vertices[0]
    i = SitusMorphism(point, chain, None, vertex_map={"pt": first})
    f_maps = []
    for n in range(1, D + 1):
        rep = (b,) * n + (a,)
        f_maps.append(np.array([SA.carriers[n].index(_class_of(SA, n, rep))]))
    f = SitusMorphism(point, SA, f_maps)
    lifts = {}
    for h in iter_homs(chain, SA):
        if h.compose(i).key == f.key:
            lifts.setdefault(p.compose(h).key, h)
    holds = True
    witness = None
    squares = 0
    for g in iter_homs(chain, BA):
        if g.compose(i).key != p.compose(f).key:
            continue
        squares += 1
        if g.key not in lifts:
            holds = False
            witness = [sorted(BA.carriers[1].elements[int(g.maps[1][k])])[0] for k in range(chain.size(1))]
            break
    bad = non_dividing_oracle(M, A, a, b, L, q, N)
    return Verdict(
        "non-dividing",
        holds,
        bad is None,
        witness={"sequence": _labels(M, bad) if bad is not None else None, "bottom": witness},
        config={"A": A, "a": a, "b": b, "chain": L, "distinct": N, "qdepth": q, "depth": D, "squares": squares},
    )


def _shift_orbits(M, A, D):
    from .simplex import LevelEquivalence

    labels = {n: orbit_labels(M, A, n + 1) for n in range(1, D + 1)}
    return LevelEquivalence({n: labels[n].__getitem__ for n in labels})


def _class_of(Q, n, x):
    for c in Q.carriers[n]:
        if x in c:
            return c
    raise DomainError(f"{x!r} lies in no class")


def _quotient_square_map(S, base, SA, BA):
    maps = []
    for n in range(1, S.depth + 1):
        idx = {}
        for k, c in enumerate(BA.carriers[n]):
            for x in c:
                idx[x] = k
        maps.append(np.array([idx[next(iter(c))[:-1]] for c in SA.carriers[n]], dtype=np.int64))
    return SitusMorphism(SA, BA, maps)


# -- tree property --------------------------------------------------------------------------

def _consistent(sat, els, params):
    common = set(els)
    for v in params:
        common &= sat[v]
        if not common:
            return False
    return True


def tree_property_oracle(M: FinStructure, phi: Formula, b: int, d: int, k: int):
    """A parameter tree with consistent branches and k-inconsistent sibling families, or None."""
    T = FinTree(b, d)
    p = phi.arity - 1
    verts = list(M.elements) if p == 1 else list(product(M.elements, repeat=p))
    sat = {v: {x for x in M.elements if eval_formula(M, phi, (x,) + ((v,) if p == 1 else tuple(v)))} for v in verts}
    order = {s: i for i, s in enumerate(T.nodes)}
    # (nodes, must be consistent?) checked once the last of the nodes is assigned
    checks = [[] for _ in T.nodes]
    for br in T.branches():
        nodes = [br[:j] for j in range(len(br) + 1)]
        checks[max(order[s] for s in nodes)].append((nodes, True))
    for s in T.nodes:
        for sub in combinations(T.children(s), k):
            checks[max(order[c] for c in sub)].append((list(sub), False))
    a = {}

    def rec(i):
        if i == len(T.nodes):
            return True
        for v in verts:
            a[T.nodes[i]] = v
            if all(_consistent(sat, M.elements, [a[s] for s in nodes]) == want for nodes, want in checks[i]) and rec(i + 1):
                return True
        del a[T.nodes[i]]
        return False

    return dict(a) if rec(0) else None


def _tree_formula(M, text):
    """Parse with x first; a formula in x alone gets a dummy parameter y."""
    from .fostruct import parse

    phi = parse(text, M.signature)
    free = list(phi.free)
    if "x" in free:
        free.remove("x")
    free = ["x"] + (free or ["y"])
    return parse(text, M.signature, free=free)


def tree_property(M: FinStructure, phi: Formula, b: int = 2, d: int = 2, k: int = 2, depth: int | None = None) -> Verdict:
    """NTP as lifting: prefix -> prefix-union-antichains against the consistency space -> top.

    ``holds`` means the lifting holds (predicting no tree property);
    ``oracle_holds`` means the search found no tree-property witness.  The two
    are not known to agree; a disagreement comes with a report in ``extra``.
    """
    if isinstance(phi, str):
        phi = _tree_formula(M, phi)
    D = depth or max(2, k)
    T = FinTree(b, d)
    objs = tree_objects(T, D)
    C = consistency_space(M, phi, D)
    i = identity_on_vertices(objs["prefix"], objs["union"])
    p = SitusMorphism.to_terminal(C, terminal(D))
    v = lifting_property(LiftingInstance(i, p), name="ntp")
    wit = tree_property_oracle(M, phi, b, d, k)
    report = None
    if (wit is None) != v.holds:
        report = {
            "structure": M.name or repr(M),
            "formula": str(phi),
            "lifting_holds": v.holds,
            "oracle_ntp": wit is None,
            "oracle_tree": {"/".join(map(str, s)) or "root": val for s, val in wit.items()} if wit else None,
            "failing_square": {"/".join(map(str, s)) or "root": val for s, val in v.witness["top"].vertex_images().items()} if not v.holds else None,
        }
    return Verdict(
        "ntp",
        v.holds,
        wit is None,
        witness={"tree": {"/".join(map(str, s)) or "root": val for s, val in wit.items()} if wit else None},
        config={"b": b, "d": d, "k": k, "depth": D, "copies": len(objs["copies"])},
        extra={"report": report},
    )


# -- Shelah-style representation --------------------------------------------------------------

def unary_reduct(I: FinStructure) -> FinStructure:
    """Relations f(x)=f(y) and predicates f(x)=g(x) for f, g in the composition closure (identity included)."""
    els = I.elements
    ident = tuple(range(len(els)))
    gens = [tuple(I.idx(I.functions[f][a]) for a in els) for f in sorted(I.functions)]
    closure = {ident: "id"}
    frontier = [ident]
    names = dict(zip(gens, sorted(I.functions)))
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                c = tuple(g[h[x]] for x in range(len(els)))
                if c not in closure:
                    closure[c] = f"{names[g]}.{closure[h]}" if closure[h] != "id" else names[g]
                    nxt.append(c)
        frontier = nxt
    funcs = sorted(closure, key=lambda c: (len(closure[c]), closure[c]))
    rels = {}
    arities = {}
    for f in funcs:
        name = f"E_{closure[f]}"
        rels[name] = {(els[x], els[y]) for x in range(len(els)) for y in range(len(els)) if f[x] == f[y]}
        arities[name] = 2
    for f, g in combinations(funcs, 2):
        name = f"P_{closure[f]}_{closure[g]}"
        rels[name] = {(els[x],) for x in range(len(els)) if f[x] == g[x]}
        arities[name] = 1
    return FinStructure(els, rels, arities=arities, name=f"reduct({I.name})" if I.name else "reduct")


def em_represents(I: FinStructure, M: FinStructure, f=None, mode: str = "EMinfty", L: int = 4, q: int = 0) -> bool:
    """Does I (EM-, EM^inf-) represent M along f : |I| -> |M|?

    Indiscernibility in I is quantifier-free; in M it uses the depth-q cutoff.
    Sequences are injective, so L > |I| is vacuous.  ``Represents`` compares
    quantifier-free types in I with depth-q types in M.
    """
    mode = mode.lower()
    if f is None:
        if set(I.elements) != set(M.elements):
            raise DomainError("identity map needs equal universes")
        f = SetMap(I.elements, M.elements, {a: a for a in I.elements})
    if f.source != _carrier(I) or set(f.target) != set(M.elements):
        raise DomainError("map does not go from |I| to |M|")
    fmap = [M.idx(f(a)) for a in I.elements]
    if mode == "represents":
        if len(I) != len(M) or any(f(a) != a for a in I.elements):
            raise DomainError("representation needs the identity map on a common universe")
        for n in range(1, L + 1):
            qf = qtype_classes(I, n, 0)
            tp = qtype_classes(M, n, q)
            seen = {}
            for k, t in enumerate(product(range(len(I)), repeat=n)):
                c, d = int(qf[k]), int(tp[_flat_pos([fmap[x] for x in t], len(M))])
                if seen.setdefault(c, d) != d:
                    return False
        return True
    dI = cutoff_components(I, 0, L)
    uM = cutoff_components(M, q, L)
    seqs = [s for s in _injective(len(I), L) if passes(I, dI, s, IndiscKind.SEQUENCE)]
    if mode == "eminfty":
        return all(passes(M, uM, [fmap[x] for x in s], IndiscKind.SEQUENCE) for s in seqs)
    if mode == "em":
        # for each single M-component some set of I-components suffices; the full set is the strongest
        for u in uM:
            if not _some_delta(I, M, dI, u, fmap, L):
                return False
        return True
    raise DomainError(f"unknown mode {mode!r}")


def _some_delta(I, M, dI, u, fmap, L):
    for size in range(len(dI) + 1):
        for delta in combinations(dI, size):
            if all(
                passes(M, [u], [fmap[x] for x in s], IndiscKind.SEQUENCE)
                for s in _injective(len(I), L)
                if passes(I, list(delta), s, IndiscKind.SEQUENCE)
            ):
                return True
    return False


def _injective(n, L):
    return permutations(range(n), L)


def reduct_isolates(I: FinStructure, L: int = 3):
    """Two qf-indiscernible injective sequences of I with equal qf-type in the reduct but not in I, or None.

    This is the weaker statement the reduct is built for: among indiscernible
    sequences of I the reduct pins down the quantifier-free type.
    """
    R = unary_reduct(I)
    cI = cutoff_components(I, 0, L)
    kI, kR = qtype_classes(I, L, 0), qtype_classes(R, L, 0)
    n = len(I)
    seen = {}
    for s in _injective(n, L):
        if not passes(I, cI, s, IndiscKind.SEQUENCE):
            continue
        flat = _flat_pos(s, n)
        r, t = int(kR[flat]), int(kI[flat])
        if r in seen and seen[r][1] != t:
            return _labels(I, seen[r][0]), _labels(I, s)
        seen.setdefault(r, (s, t))
    return None


def _flat_pos(s, n):
    k = 0
    for v in s:
        k = k * n + v
    return k


def _carrier(I):
    from .filters import Carrier

    return Carrier(I.elements)


# -- symmetry and dimension ----------------------------------------------------------------

def is_symmetric(X: TruncatedSitus) -> bool:
    """Every coordinate permutation is a continuous self-map of each level."""
    if not X.is_tuple:
        raise DomainError("symmetry is defined for tuple situses")
    for n in range(2, X.depth + 1):
        carrier = X.carriers[n]
        F = X.filters[n]
        for perm in permutations(range(n)):
            table = {}
            for x in carrier:
                y = tuple(x[i] for i in perm)
                if y not in carrier:
                    return False
                table[x] = y
            from .filters import is_continuous

            if not is_continuous(SetMap(carrier, carrier, table), F, F):
                return False
    return True


def is_two_dimensional(X: TruncatedSitus) -> bool:
    """Each filter above level 3 is the coarsest one making the faces into level 3 continuous."""
    if X.depth <= 3:
        return True
    core3 = X.filters[3].core
    if core3 is None:
        raise DomainError("needs principal filters")
    mask3 = X.core_mask(3)
    for n in range(4, X.depth + 1):
        keep = np.ones(X.size(n), dtype=bool)
        for idx in face_indices(n, 3):
            keep &= mask3[X.face(idx, n)]
        if not np.array_equal(keep, X.core_mask(n)):
            return False
    return True
