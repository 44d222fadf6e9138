"""Morphisms of truncated situses and Quillen lifting properties.

Morphisms are enumerated in two ways.  Between tuple situses a morphism is
fixed by where it sends the level-1 simplices, so we search vertex maps and
check carriers and continuity as soon as a simplex has all its vertices
placed.  Otherwise we search level by level, pruning with every face relation
whose two ends are already assigned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Sequence

import numpy as np

from .errors import DomainError, PreconditionError, ResourceError
from .filters import PredicateFilter, SetMap
from .simplex import TruncatedSitus, face_indices, level_map_continuous

MAX_HOMS = 2_000_000


class SitusMorphism:
    """Per-level maps, stored as position arrays ``maps[n]`` for n = 1..depth."""

    def __init__(self, source: TruncatedSitus, target: TruncatedSitus, maps, vertex_map: dict | None = None):
        if source.depth != target.depth:
            raise DomainError("morphism ends have different depths")
        self.source = source
        self.target = target
        self.vertex_map = vertex_map
        if maps is None:
            if vertex_map is None:
                raise DomainError("need level maps or a vertex map")
            maps = _maps_from_vertices(source, target, vertex_map)
        maps = list(maps)
        if len(maps) == source.depth:
            maps = [None] + maps
        self.maps = [None] + [np.asarray(m, dtype=np.int64) for m in maps[1:]]
        for n in range(1, source.depth + 1):
            if len(self.maps[n]) != source.size(n):
                raise DomainError(f"level {n} map has the wrong length")
        self._key = None

    @classmethod
    def identity(cls, X: TruncatedSitus) -> "SitusMorphism":
        return cls(X, X, [np.arange(X.size(n)) for n in range(1, X.depth + 1)])

    @classmethod
    def to_terminal(cls, X: TruncatedSitus, T: TruncatedSitus) -> "SitusMorphism":
        return cls(X, T, [np.zeros(X.size(n), dtype=np.int64) for n in range(1, X.depth + 1)])

    @property
    def key(self):
        if self._key is None:
            self._key = b"|".join(m.tobytes() for m in self.maps[1:])
        return self._key

    def __eq__(self, other):
        return isinstance(other, SitusMorphism) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __call__(self, n: int, x):
        p = self.source.carriers[n].index(x)
        return self.target.carriers[n].elements[self.maps[n][p]]

    def level_map(self, n: int) -> SetMap:
        src, tgt = self.source.carriers[n], self.target.carriers[n]
        return SetMap(src, tgt, [tgt.elements[q] for q in self.maps[n]])

    def vertex_images(self) -> dict:
        """Level-1 map written on labels."""
        return {x: self(1, x) for x in self.source.carriers[1]}

    def compose(self, first: "SitusMorphism") -> "SitusMorphism":
        """``self ∘ first``."""
        if first.target is not self.source and first.target.carriers != self.source.carriers:
            raise DomainError("morphisms do not compose")
        return SitusMorphism(first.source, self.target, [self.maps[n][first.maps[n]] for n in range(1, self.source.depth + 1)])

    def is_injective(self, level: int = 1) -> bool:
        m = self.maps[level]
        return len(np.unique(m)) == len(m)

    def is_surjective(self, level: int = 1) -> bool:
        return len(np.unique(self.maps[level])) == self.target.size(level)

    def problems(self) -> list[str]:
        """Face commutation and continuity failures; empty for a valid morphism."""
        out = []
        X, Y = self.source, self.target
        for m, idx in X.all_faces():
            n = len(idx)
            if not np.array_equal(self.maps[n][X.face(idx, m)], Y.face(idx, m)[self.maps[m]]):
                out.append(f"does not commute with face {list(idx)} from level {m}")
        for n in range(1, X.depth + 1):
            if not level_map_continuous(self.maps[n], X.filters[n], Y.filters[n], X.core_mask(n), Y.core_mask(n)):
                out.append(f"level {n} map not continuous")
        return out

    def is_valid(self) -> bool:
        return not self.problems()

    def __repr__(self):
        if self.source.is_tuple and self.source.size(1) <= 12:
            return f"SitusMorphism({ {x[0]: y[0] if isinstance(y, tuple) and len(y) == 1 else y for x, y in self.vertex_images().items()} })"
        return f"SitusMorphism({self.source!r} -> {self.target!r})"


def _maps_from_vertices(X, Y, vmap):
    maps = []
    for n in range(1, X.depth + 1):
        tgt = Y.carriers[n]
        maps.append(np.array([tgt.index(tuple(vmap[v] for v in x)) for x in X.carriers[n]], dtype=np.int64))
    return maps


# -- enumeration ------------------------------------------------------------------

def iter_homs(
    X: TruncatedSitus,
    Y: TruncatedSitus,
    *,
    method: str = "auto",
    injective: bool = False,
    surjective: bool = False,
    limit: int | None = MAX_HOMS,
) -> Iterator[SitusMorphism]:
    """Morphisms X -> Y in deterministic order.

    ``injective``/``surjective`` constrain the level-1 map.  ``method`` is
    ``"vertex"``, ``"levelwise"`` or ``"auto"`` (vertex maps when both ends are
    tuple situses).
    """
    if X.depth != Y.depth:
        raise DomainError("hom between situses of different depth")
    if method == "auto":
        method = "vertex" if X.is_tuple and Y.is_tuple else "levelwise"
    gen = _vertex_homs(X, Y, injective, surjective) if method == "vertex" else _levelwise_homs(X, Y, injective, surjective)
    count = 0
    for h in gen:
        count += 1
        if limit is not None and count > limit:
            raise ResourceError(f"more than {limit} morphisms", ("homs", limit))
        yield h


def hom_set(X: TruncatedSitus, Y: TruncatedSitus, **kw) -> list[SitusMorphism]:
    return list(iter_homs(X, Y, **kw))


def _vertex_homs(X, Y, injective, surjective):
    N = X.depth
    verts = [x[0] for x in X.carriers[1]]
    targets = [y[0] for y in Y.carriers[1]]
    pos = {v: i for i, v in enumerate(verts)}
    # simplices grouped by the last vertex position they need
    checks = [[] for _ in verts]
    for n in range(1, N + 1):
        Fx, Fy = X.filters[n], Y.filters[n]
        principal = not isinstance(Fx, PredicateFilter) and not isinstance(Fy, PredicateFilter)
        core_x = Fx.core if principal else frozenset()
        core_y = Fy.core if principal else frozenset()
        tgt = Y.carriers[n]
        for x in X.carriers[n]:
            ps = [pos[v] for v in x]
            checks[max(ps)].append((x, ps, tgt, x in core_x, core_y))
    late = [n for n in range(1, N + 1)
            if isinstance(X.filters[n], PredicateFilter) or isinstance(Y.filters[n], PredicateFilter)]
    img: list[Any] = [None] * len(verts)
    k = len(verts)
    used: dict = {}

    def rec(i):
        if i == k:
            if surjective and len(used) < len(targets):
                return
            vmap = dict(zip(verts, img))
            h = SitusMorphism(X, Y, None, vmap)
            for n in late:
                if not level_map_continuous(h.maps[n], X.filters[n], Y.filters[n]):
                    return
            yield h
            return
        remaining = k - i - 1
        for w in targets:
            if injective and w in used:
                continue
            img[i] = w
            ok = True
            for x, ps, tgt, in_core, core_y in checks[i]:
                y = tuple(img[p] for p in ps)
                if y not in tgt or (in_core and y not in core_y):
                    ok = False
                    break
            if not ok:
                continue
            used[w] = used.get(w, 0) + 1
            if not surjective or len(used) + remaining >= len(targets):
                yield from rec(i + 1)
            used[w] -= 1
            if not used[w]:
                del used[w]
        img[i] = None

    yield from rec(0)


def _levelwise_homs(X, Y, injective, surjective):
    N = X.depth
    # lower-face signatures on the target side
    lower = {m: [idx for n in range(1, m) for idx in face_indices(m, n)] for m in range(1, N + 1)}
    same = {m: face_indices(m, m) for m in range(1, N + 1)}
    sig_index = {}
    for m in range(1, N + 1):
        d: dict = {}
        arrs = [Y.face(idx, m) for idx in lower[m]]
        for y in range(Y.size(m)):
            d.setdefault(tuple(int(a[y]) for a in arrs), []).append(y)
        sig_index[m] = d
    # degeneracy constraints into level n from lower levels
    up = {n: [[] for _ in range(X.size(n))] for n in range(1, N + 1)}
    for m in range(1, N + 1):
        for n in range(m + 1, N + 1):
            for idx in face_indices(m, n):
                fx = X.face(idx, m)
                fy = Y.face(idx, m)
                for x in range(X.size(m)):
                    up[n][int(fx[x])].append((m, x, fy))
    # same-level constraints, checked when the later of the two is placed
    same_checks = {m: [[] for _ in range(X.size(m))] for m in range(1, N + 1)}
    for m in range(1, N + 1):
        for idx in same[m]:
            fx, fy = X.face(idx, m), Y.face(idx, m)
            for q in range(X.size(m)):
                t = int(fx[q])
                same_checks[m][max(q, t)].append((q, t, fy))
    masks = {n: (X.core_mask(n), Y.core_mask(n)) for n in range(1, N + 1)}
    f = [None] + [np.full(X.size(n), -1, dtype=np.int64) for n in range(1, N + 1)]
    lower_x = {m: [X.face(idx, m) for idx in lower[m]] for m in range(1, N + 1)}

    def candidates(m, p):
        sig = tuple(int(f[len(idx)][a[p]]) for idx, a in zip(lower[m], lower_x[m]))
        cands = sig_index[m].get(sig, [])
        forced = None
        for (lm, x, fy) in up[m][p]:
            v = int(fy[f[lm][x]])
            if forced is None:
                forced = v
            elif forced != v:
                return []
        if forced is not None:
            cands = [forced] if forced in cands else []
        mx, my = masks[m]
        if mx is not None and my is not None and mx[p]:
            cands = [y for y in cands if my[y]]
        return cands

    def rec(m, p):
        if p == X.size(m):
            mx, my = masks[m]
            if (mx is None or my is None) and not level_map_continuous(f[m], X.filters[m], Y.filters[m]):
                return
            if m == 1:
                if injective and len(np.unique(f[1])) != len(f[1]):
                    return
                if surjective and len(np.unique(f[1])) != Y.size(1):
                    return
            if m == N:
                yield SitusMorphism(X, Y, [a.copy() for a in f[1:]])
                return
            yield from rec(m + 1, 0)
            return
        for y in candidates(m, p):
            f[m][p] = y
            ok = True
            for q, t, fy in same_checks[m][p]:
                if f[m][t] != fy[f[m][q]]:
                    ok = False
                    break
            if ok:
                yield from rec(m, p + 1)
        f[m][p] = -1

    yield from rec(1, 0)


# -- lifting ------------------------------------------------------------------------

@dataclass
class LiftingInstance:
    i: SitusMorphism
    p: SitusMorphism

    def __post_init__(self):
        for name, a, b in (("i", self.i.source, self.i.target), ("p", self.p.source, self.p.target)):
            if a.depth != b.depth:
                raise DomainError(f"{name} has ends of different depth")


@dataclass
class Verdict:
    """Outcome of a lifting or dividing-line check.

    ``holds`` is the lifting side, ``oracle_holds`` the direct combinatorial
    side (None when no oracle applies).  ``extra`` keeps further sides such as
    the almost-lifting of NIP.
    """

    name: str
    holds: bool
    oracle_holds: bool | None = None
    witness: Any = None
    config: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def agree(self) -> bool | None:
        return None if self.oracle_holds is None else self.holds == self.oracle_holds

    def __bool__(self):
        return self.holds

    def to_dict(self) -> dict:
        return {
            "property": self.name,
            "holds": self.holds,
            "oracle_holds": self.oracle_holds,
            "agree": self.agree,
            "witness": _jsonable(self.witness),
            "config": _jsonable(self.config),
            "extra": _jsonable(self.extra),
        }


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (frozenset, set)):
        return sorted((_jsonable(x) for x in v), key=repr)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, SitusMorphism):
        return {str(_jsonable(k)): _jsonable(x) for k, x in v.vertex_images().items()}
    if v is None or isinstance(v, (bool, int, float, str)):
        return v
    return repr(v)


def has_lift(inst: LiftingInstance, f: SitusMorphism, g: SitusMorphism) -> SitusMorphism | None:
    """First diagonal ``h`` with ``h∘i = f`` and ``p∘h = g``, or None."""
    i, p = inst.i, inst.p
    if p.compose(f).key != g.compose(i).key:
        raise PreconditionError("square does not commute")
    for h in iter_homs(i.target, p.source):
        if h.compose(i).key == f.key and p.compose(h).key == g.key:
            return h
    return None


def lifting_property(
    inst: LiftingInstance,
    *,
    bottom: Callable[[SitusMorphism], bool] | None = None,
    name: str = "lifting",
) -> Verdict:
    """Decide ``i ⋔ p`` by exhausting commuting squares.

    ``bottom`` optionally restricts the squares to those whose bottom arrow
    ``g`` passes the predicate (e.g. injective ones).
    """
    i, p = inst.i, inst.p
    A, B, X, Y = i.source, i.target, p.source, p.target
    if A.is_tuple and B.is_tuple and X.is_tuple and A.size(1) and i.is_injective() and i.is_surjective():
        return _lifting_by_vertices(inst, bottom, name)
    liftable = set()
    for h in iter_homs(B, X):
        liftable.add((h.compose(i).key, p.compose(h).key))
    bottoms: dict = {}
    for g in iter_homs(B, Y):
        if bottom is not None and not bottom(g):
            continue
        bottoms.setdefault(g.compose(i).key, []).append(g)
    squares = 0
    for f in iter_homs(A, X):
        for g in bottoms.get(p.compose(f).key, ()):
            squares += 1
            if (f.key, g.key) not in liftable:
                return Verdict(name, False, witness={"top": f, "bottom": g}, config={"squares_checked": squares})
    return Verdict(name, True, config={"squares_checked": squares})


def _lifting_by_vertices(inst, bottom, name):
    """Same decision when i is a bijection on vertices: the only candidate diagonal is f∘i^{-1}."""
    i, p = inst.i, inst.p
    A, B, X, Y = i.source, i.target, p.source, p.target
    back = {i(1, a)[0]: a[0] for a in A.carriers[1]}
    bottoms: dict = {}
    for g in iter_homs(B, Y):
        if bottom is not None and not bottom(g):
            continue
        bottoms.setdefault(g.compose(i).key, []).append(g)
    squares = 0
    for f in iter_homs(A, X):
        gs = bottoms.get(p.compose(f).key, ())
        if not gs:
            continue
        vmap = {v: f(1, (back[v],))[0] for v in back}
        try:
            h = SitusMorphism(B, X, None, vertex_map=vmap)
            hk = p.compose(h).key if h.is_valid() else None
        except (KeyError, DomainError):
            hk = None
        for g in gs:
            squares += 1
            if hk != g.key:
                return Verdict(name, False, witness={"top": f, "bottom": g}, config={"squares_checked": squares})
    return Verdict(name, True, config={"squares_checked": squares})


def right_negation(family: Sequence[SitusMorphism], p: SitusMorphism) -> bool:
    """p has the right lifting property against every member of ``family``."""
    return all(lifting_property(LiftingInstance(i, p)).holds for i in family)


def left_negation(family: Sequence[SitusMorphism], i: SitusMorphism) -> bool:
    """i has the left lifting property against every member of ``family``."""
    return all(lifting_property(LiftingInstance(i, p)).holds for p in family)


def exists_surjection(X: TruncatedSitus, Y: TruncatedSitus) -> SitusMorphism | None:
    """A morphism whose level-1 map is onto, or None."""
    if X.size(1) < Y.size(1):
        return None
    for h in iter_homs(X, Y, surjective=True):
        return h
    return None


def unique_to(X: TruncatedSitus, T: TruncatedSitus) -> SitusMorphism:
    homs = hom_set(X, T)
    if len(homs) != 1:
        raise DomainError(f"expected exactly one morphism, found {len(homs)}")
    return homs[0]
