"""Indiscernibility predicates, EM-formulas and extendability.

A formula set is handled through *components*: a component is an arity r and
a class id for every r-tuple of the universe.  A single formula contributes
its truth table; a depth-q formula cutoff contributes the q-type partition of
r-tuples, since a tuple is indiscernible for every depth-q formula exactly
when all compared patterns lie in one type class.

Guards, for an r-ary pattern given by index tuples i and j:

* plain kinds compare i and j when each has pairwise distinct values;
* consecutive kinds compare i and j when the merged positions
  ``sorted(set(i) | set(j))`` carry values that differ at every step;
* order kinds allow index tuples in any order, the others only increasing ones.

For r = 1 every pair of positions is compared.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations, combinations_with_replacement, permutations, product
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ResourceError
from .fostruct import (
    BinOp,
    Eq,
    FinStructure,
    Formula,
    Not,
    Param,
    Truth,
    Var,
    automorphisms,
    conj,
    parse,
    qtype_classes,
    substitute,
    truth_table,
)


class IndiscKind(Enum):
    SEQUENCE = "sequence"
    ORDER = "order"
    WITH_REPS = "with-repetitions"
    ORDER_WITH_REPS = "order-with-repetitions"
    CONSECUTIVE = "consecutive"
    ORDER_CONSECUTIVE = "order-consecutive"

    @property
    def ordered(self) -> bool:
        return self in (IndiscKind.ORDER, IndiscKind.ORDER_WITH_REPS, IndiscKind.ORDER_CONSECUTIVE)

    @property
    def consecutive(self) -> bool:
        return self in (IndiscKind.CONSECUTIVE, IndiscKind.ORDER_CONSECUTIVE)


class EMVariant(Enum):
    EM = "EM"
    EMprime = "EMprime"
    EMoneprime = "EMoneprime"


@dataclass(frozen=True)
class Component:
    """Arity, flattened class array over universe positions, and the elements it mentions."""

    r: int
    classes: np.ndarray
    param: bool = False
    anchors: tuple = ()

    @property
    def width(self) -> int:
        return self.r + (1 if self.param else 0)


def formula_component(M: FinStructure, phi: Formula, *, param: bool = False) -> Component | None:
    """Component for one formula; None for sentences."""
    if phi.arity == 0 or (param and phi.arity == 1):
        return None
    tab = truth_table(M, phi).astype(np.int64).ravel()
    r = phi.arity - (1 if param else 0)
    return Component(r, tab, param, tuple(_params_of(phi)))


def cutoff_components(M: FinStructure, q: int, max_r: int, A: Sequence = (), *, param: bool = False) -> list[Component]:
    """Components for all formulas of quantifier depth <= q over parameters A, arity <= max_r."""
    out = []
    for r in range(1, max_r + 1):
        width = r + (1 if param else 0)
        out.append(Component(r, qtype_classes(M, width, q, A), param, tuple(A)))
    return out


def _params_of(phi: Formula) -> list:
    found = []

    def walk_t(t):
        if isinstance(t, Param):
            found.append(t.element)
        elif hasattr(t, "arg"):
            walk_t(t.arg)

    def walk(n):
        for name in ("left", "right", "body"):
            v = getattr(n, name, None)
            if v is None:
                continue
            if isinstance(n, Eq):
                walk_t(v)
            else:
                walk(v)
        for t in getattr(n, "args", ()):
            walk_t(t)

    walk(phi.node)
    return found


def as_components(M: FinStructure, sigma, *, param: bool = False) -> list[Component]:
    if isinstance(sigma, Component):
        return [sigma]
    if isinstance(sigma, (Formula, str)):
        sigma = [sigma]
    out = []
    for s in sigma:
        if isinstance(s, str):
            s = parse(s, M.signature)
        if isinstance(s, Component):
            out.append(s)
        else:
            c = formula_component(M, s, param=param)
            if c is not None:
                out.append(c)
    return out


# -- the predicate -------------------------------------------------------------------

def _flat(vals, n):
    k = 0
    for v in vals:
        k = k * n + v
    return k


def _patterns(length: int, r: int, ordered: bool):
    if ordered:
        return list(permutations(range(length), r))
    return list(combinations(range(length), r))


def passes(M: FinStructure, comps: Sequence[Component], seq: Sequence[int], kind: IndiscKind, param: int | None = None) -> bool:
    """Indiscernibility of a sequence of universe *positions* for every component."""
    n = len(M)
    L = len(seq)
    for c in comps:
        if c.param and param is None:
            raise DomainError("component needs a parameter slot")
        tail = (param,) if c.param else ()
        r = c.r
        if L < r:
            continue
        cls = c.classes
        if r == 1:
            if len({int(cls[_flat((v,) + tail, n)]) for v in set(seq)}) > 1:
                return False
            continue
        pats = _patterns(L, r, kind.ordered)
        if not kind.consecutive:
            seen = None
            for p in pats:
                vals = [seq[k] for k in p]
                if len(set(vals)) < r:
                    continue
                v = int(cls[_flat(vals + list(tail), n)])
                if seen is None:
                    seen = v
                elif v != seen:
                    return False
            continue
        vals_of = [int(cls[_flat([seq[k] for k in p] + list(tail), n)]) for p in pats]
        for a in range(len(pats)):
            for b in range(a + 1, len(pats)):
                if vals_of[a] == vals_of[b]:
                    continue
                merged = sorted(set(pats[a]) | set(pats[b]))
                if all(seq[merged[k]] != seq[merged[k + 1]] for k in range(len(merged) - 1)):
                    return False
    return True


def is_indiscernible(M: FinStructure, phi, seq: Sequence, kind: IndiscKind = IndiscKind.WITH_REPS, param=None) -> bool:
    """``seq`` is a tuple of universe elements; ``phi`` a formula, formula list or components.

    With ``param`` given, the formula's last free variable is the parameter slot.
    """
    comps = as_components(M, phi, param=param is not None)
    pos = [M.idx(a) for a in seq]
    for c in comps:
        if c.r < 1:
            raise DomainError("formula needs at least one sequence variable")
    return passes(M, comps, pos, kind, None if param is None else M.idx(param))


# -- EM formulas --------------------------------------------------------------------------

@dataclass(frozen=True)
class EMFormulaSpec:
    phi: Formula
    n: int
    variant: EMVariant = EMVariant.EM
    literal: bool = False  # EMprime/EMoneprime: per-tuple consecutive guards as displayed

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("width must be positive")
        if self.variant is EMVariant.EMoneprime and self.phi.arity < 2:
            raise DomainError("EMoneprime needs a formula with a parameter slot and at least one sequence variable")
        if self.variant is not EMVariant.EMoneprime and self.phi.arity < 1:
            raise DomainError("formula needs at least one free variable")


def em_formula(spec: EMFormulaSpec) -> Formula:
    """Guarded conjunction saying a width-n tuple is indiscernible for phi.

    EM uses distinctness guards on each index tuple.  EMprime guards the merged
    positions of the two index tuples by consecutive distinctness (with
    ``literal=True`` the guard is per tuple on consecutive entries).  EMoneprime
    does the same with a trailing parameter variable.
    """
    phi, n = spec.phi, spec.n
    param = spec.variant is EMVariant.EMoneprime
    r = phi.arity - (1 if param else 0)
    xs = [f"x{k}" for k in range(1, n + 2)]
    free = tuple(xs[: n + (1 if param else 0)])
    pats = list(combinations(range(n), r))
    conjuncts = []

    def neq(a, b):
        return Not(Eq(Var(xs[a]), Var(xs[b])))

    def inst(p):
        names = [xs[k] for k in p] + ([xs[n]] if param else [])
        return substitute(phi.node, {v: Var(w) for v, w in zip(phi.free, names)})

    for a in range(len(pats)):
        for b in range(a, len(pats)):
            i, j = pats[a], pats[b]
            if r == 1:
                guard = []
            elif spec.variant is EMVariant.EM:
                guard = [neq(s, t) for s, t in combinations(i, 2)] + [neq(s, t) for s, t in combinations(j, 2)]
            elif spec.literal:
                guard = [neq(i[k], i[k + 1]) for k in range(r - 1)] + [neq(j[k], j[k + 1]) for k in range(r - 1)]
            else:
                m = sorted(set(i) | set(j))
                guard = [neq(m[k], m[k + 1]) for k in range(len(m) - 1)]
            body = BinOp("<->", inst(i), inst(j))
            conjuncts.append(BinOp("->", conj(guard), body) if guard else body)
    node = conj(conjuncts) if conjuncts else Truth(True)
    tag = {"EM": f"{n}-EM", "EMprime": f"{n}-EM'", "EMoneprime": f"{n},1-EM'"}[spec.variant.value]
    return Formula(node, free, text=f"({phi})^{tag}")


# -- extendability ------------------------------------------------------------------------

def _orbit_reps(M: FinStructure, fixed: Iterable[int], pool: Sequence[int], t: int) -> list[tuple]:
    """Representatives of ordered t-tuples of distinct elements from ``pool`` up to Aut(M/fixed)."""
    fixed = set(fixed)
    group = automorphisms(M, [M.elements[i] for i in fixed])
    seen = set()
    reps = []
    for tup in permutations(pool, t):
        if tup in seen:
            continue
        reps.append(tup)
        for g in group:
            seen.add(tuple(g[x] for x in tup))
    return reps


def compress(seq: Sequence) -> tuple:
    """Merge runs of equal consecutive entries."""
    out = []
    for a in seq:
        if not out or out[-1] != a:
            out.append(a)
    return tuple(out)


def extension_witness(
    M: FinStructure,
    comps: Sequence[Component],
    seq: Sequence[int],
    N: int,
    kind: IndiscKind,
    *,
    embed: bool = False,
    param: int | None = None,
    prune: bool = True,
):
    """A passing sequence of positions with >= N distinct values extending ``seq``, or None.

    Prefix mode appends new elements.  Embed mode looks for a sequence having
    ``seq`` as a weakly increasing face, which amounts to inserting new
    elements anywhere into ``compress(seq)``.  Repeated values are never
    added: they only add constraints.
    """
    base = compress(seq) if embed else tuple(seq)
    distinct = set(base)
    t = max(0, N - len(distinct))
    pool = [a for a in range(len(M)) if a not in distinct]
    if t > len(pool):
        return None
    if t == 0:
        return base if passes(M, comps, base, kind, param) else None
    anchors = set(distinct)
    for c in comps:
        anchors |= {M.idx(a) for a in c.anchors}
    if param is not None:
        anchors.add(param)
    new_tuples = _orbit_reps(M, anchors, pool, t) if prune else list(permutations(pool, t))
    slots = [(len(base),) * t] if not embed else list(combinations_with_replacement(range(len(base) + 1), t))
    for new in new_tuples:
        for gaps in slots:
            cand = _insert(base, gaps, new)
            if passes(M, comps, cand, kind, param):
                return cand
    return None


def _insert(base, gaps, new):
    out = []
    k = 0
    for pos in range(len(base) + 1):
        while k < len(gaps) and gaps[k] == pos:
            out.append(new[k])
            k += 1
        if pos < len(base):
            out.append(base[pos])
    return tuple(out)


def is_extendable(
    M: FinStructure,
    sigma,
    seq: Sequence,
    N: int,
    kind: IndiscKind = IndiscKind.WITH_REPS,
    *,
    embed: bool = False,
) -> bool:
    """Can ``seq`` be extended to a sequence of the given kind with >= N distinct values?"""
    comps = as_components(M, sigma)
    if len(M) > 8:
        raise ResourceError("extendability search is limited to universes of size 8", ("universe", 8))
    pos = tuple(M.idx(a) for a in seq)
    return extension_witness(M, comps, pos, N, kind, embed=embed) is not None


def sequences(M: FinStructure, length: int):
    """All sequences of universe positions of the given length."""
    return product(range(len(M)), repeat=length)
