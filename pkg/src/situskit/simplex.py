"""Truncated simplicial filters.

A ``TruncatedSitus`` keeps levels 1..N.  Level n is a finite carrier of
n-simplices with a filter, and for every weakly increasing index list
``[i1<=...<=in]`` with entries in 1..m there is a face map from level m to
level n.  Face maps are cached as integer arrays over carrier positions.

Most objects in the package are *tuple situses*: an n-simplex is an n-tuple
of vertices and faces select coordinates.  Those carry ``vertices`` and are
handled by vertex maps in ``homlift``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement, product
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import DepthError, DomainError, ResourceError, ValidationError
from .filters import Carrier, Filter, HittingFilter, PredicateFilter, SetMap, finest_filter

# size guard defaults; see ``check_guard``
MAX_ATOMS = 8
MAX_DEPTH = 4
MAX_LEVEL_SIZE = 50_000


def check_guard(n_atoms=None, depth=None, level_size=None, override=False):
    if override:
        return
    if n_atoms is not None and n_atoms > MAX_ATOMS:
        raise ResourceError(f"{n_atoms} atoms exceeds the guard of {MAX_ATOMS}", ("atoms", MAX_ATOMS))
    if depth is not None and depth > MAX_DEPTH:
        raise ResourceError(f"depth {depth} exceeds the guard of {MAX_DEPTH}", ("depth", MAX_DEPTH))
    if level_size is not None and level_size > MAX_LEVEL_SIZE:
        raise ResourceError(
            f"level carrier of size {level_size} exceeds the guard of {MAX_LEVEL_SIZE}",
            ("level", MAX_LEVEL_SIZE),
        )


@lru_cache(maxsize=None)
def face_indices(m: int, n: int) -> tuple[tuple[int, ...], ...]:
    """All weakly increasing index lists of length n with entries in 1..m."""
    return tuple(combinations_with_replacement(range(1, m + 1), n))


def compose_indices(outer: Sequence[int], inner: Sequence[int]) -> tuple[int, ...]:
    """Index list of ``face(inner) ∘ face(outer)``.

    ``outer`` goes from level m to level k, ``inner`` from level k to level n;
    the composite selects ``outer[j-1]`` for each j in ``inner``.
    """
    return tuple(outer[j - 1] for j in inner)


class FinPreorder:
    """Finite transitive relation; reflexivity is needed for corepresentation."""

    def __init__(self, elements: Iterable[Hashable], leq):
        self.elements = Carrier(elements)
        if callable(leq):
            rel = {(a, b) for a in self.elements for b in self.elements if leq(a, b)}
        else:
            rel = set(leq)
        for a, b in rel:
            if a not in self.elements or b not in self.elements:
                raise DomainError(f"pair {(a, b)!r} outside the elements")
        self.rel = frozenset(rel)
        els = list(self.elements)
        for a in els:
            for b in els:
                if (a, b) in rel:
                    for c in els:
                        if (b, c) in rel and (a, c) not in rel:
                            raise DomainError(f"relation not transitive at {(a, b, c)!r}")
        self.reflexive = all((a, a) in rel for a in els)
        self.total = all((a, b) in rel or (b, a) in rel for a in els for b in els)
        self.antisymmetric = all(not ((a, b) in rel and (b, a) in rel) or a == b for a in els for b in els)
        self.is_linear = self.reflexive and self.total and self.antisymmetric
        self.is_set = len(rel) == len(els) ** 2

    def leq(self, a, b) -> bool:
        return (a, b) in self.rel

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        kind = "set" if self.is_set else "chain" if self.is_linear else "preorder"
        return f"FinPreorder({kind}, {list(self.elements)!r})"

    @classmethod
    def chain(cls, n_or_labels) -> "FinPreorder":
        labels = list(range(1, n_or_labels + 1)) if isinstance(n_or_labels, int) else list(n_or_labels)
        pos = {a: i for i, a in enumerate(labels)}
        return cls(labels, lambda a, b: pos[a] <= pos[b])

    @classmethod
    def set(cls, atoms) -> "FinPreorder":
        atoms = list(atoms)
        return cls(atoms, lambda a, b: True)

    @classmethod
    def discrete(cls, atoms) -> "FinPreorder":
        atoms = list(atoms)
        return cls(atoms, lambda a, b: a == b)

    def weakly_increasing(self, n: int) -> list[tuple]:
        out = []
        els = list(self.elements)

        def rec(prefix):
            if len(prefix) == n:
                out.append(tuple(prefix))
                return
            for a in els:
                if not prefix or self.leq(prefix[-1], a):
                    rec(prefix + [a])

        rec([])
        return out


class TruncatedSitus:
    """Levels 1..depth with carriers, filters and face maps.

    ``face_fn(idx, x)`` returns the face of level-m simplex ``x`` selected by
    index list ``idx``.  For tuple situses leave it out: faces then select
    coordinates.
    """

    def __init__(
        self,
        depth: int,
        carriers: Sequence[Sequence[Hashable]],
        filters: Sequence[Filter] | None = None,
        face_fn: Callable[[tuple, Hashable], Hashable] | None = None,
        *,
        vertices: Sequence[Hashable] | None = None,
        preorder: FinPreorder | None = None,
        name: str = "",
        guard_override: bool = False,
    ):
        if depth < 1:
            raise DepthError("depth must be positive")
        if len(carriers) != depth:
            raise DomainError("need one carrier per level")
        check_guard(depth=depth, override=guard_override)
        self.depth = depth
        self.name = name
        self.vertices = tuple(vertices) if vertices is not None else None
        self.preorder = preorder
        self.carriers = [None] + [Carrier(c) for c in carriers]
        for n in range(1, depth + 1):
            check_guard(level_size=len(self.carriers[n]), override=guard_override)
        if filters is None:
            filters = [Filter.antidiscrete(self.carriers[n]) for n in range(1, depth + 1)]
        if len(filters) != depth:
            raise DomainError("need one filter per level")
        self.filters = [None] + list(filters)
        for n in range(1, depth + 1):
            if self.filters[n].carrier != self.carriers[n]:
                raise DomainError(f"filter at level {n} lives on a different carrier")
        if face_fn is None:
            if self.vertices is None:
                raise DomainError("face_fn required unless the situs is a tuple situs")
            face_fn = _select
        self._face_fn = face_fn
        self._faces: dict = {}
        self._masks: dict = {}

    # -- basic access -------------------------------------------------
    def level(self, n: int) -> Carrier:
        return self.carriers[n]

    def size(self, n: int) -> int:
        return len(self.carriers[n])

    @property
    def is_tuple(self) -> bool:
        return self.vertices is not None

    def face(self, idx: Sequence[int], m: int) -> np.ndarray:
        """Face map ``idx`` from level m, as positions in level ``len(idx)``."""
        idx = tuple(idx)
        key = (idx, m)
        arr = self._faces.get(key)
        if arr is None:
            n = len(idx)
            if not (1 <= n <= self.depth and 1 <= m <= self.depth):
                raise DepthError(f"face {idx} from level {m} outside depth {self.depth}")
            if any(not (1 <= i <= m) for i in idx) or list(idx) != sorted(idx):
                raise DomainError(f"{idx} is not a weakly increasing index list into level {m}")
            target = self.carriers[n]
            out = np.empty(len(self.carriers[m]), dtype=np.int64)
            for p, x in enumerate(self.carriers[m]):
                y = self._face_fn(idx, x)
                if y not in target:
                    raise ValidationError(
                        f"face {list(idx)} of {x!r} is {y!r}, not a level-{n} simplex",
                        [{"level": m, "face": list(idx), "witness": repr(x), "kind": "carrier"}],
                    )
                out[p] = target.index(y)
            arr = out
            self._faces[key] = arr
        return arr

    def face_of(self, idx: Sequence[int], x):
        m = None
        for k in range(1, self.depth + 1):
            if x in self.carriers[k]:
                m = k
                break
        if m is None:
            raise DomainError(f"{x!r} is not a simplex")
        n = len(idx)
        return self.carriers[n].elements[self.face(idx, m)[self.carriers[m].index(x)]]

    def face_setmap(self, idx: Sequence[int], m: int) -> SetMap:
        arr = self.face(idx, m)
        src = self.carriers[m]
        tgt = self.carriers[len(idx)]
        return SetMap(src, tgt, {x: tgt.elements[arr[p]] for p, x in enumerate(src)})

    def core_mask(self, n: int) -> np.ndarray | None:
        """Boolean mask of the least neighbourhood, or None for non-principal filters."""
        if n in self._masks:
            return self._masks[n]
        F = self.filters[n]
        if isinstance(F, PredicateFilter):
            mask = None
        else:
            carrier = self.carriers[n]
            mask = np.zeros(len(carrier), dtype=bool)
            for x in F.core:
                mask[carrier.index(x)] = True
        self._masks[n] = mask
        return mask

    def all_faces(self):
        for m in range(1, self.depth + 1):
            for n in range(1, self.depth + 1):
                for idx in face_indices(m, n):
                    yield m, idx

    def __repr__(self):
        sizes = [len(self.carriers[n]) for n in range(1, self.depth + 1)]
        label = f"{self.name} " if self.name else ""
        return f"TruncatedSitus({label}depth={self.depth}, sizes={sizes})"


def _select(idx, x):
    return tuple(x[i - 1] for i in idx)


# -- continuity of a level map, used by validate and homlift -------------------

def level_map_continuous(arr: np.ndarray, Fx: Filter, Fy: Filter, mask_x=None, mask_y=None) -> bool:
    """Continuity of a map given as an index array between filtered carriers."""
    if mask_x is not None and mask_y is not None:
        return bool(np.all(mask_y[arr[mask_x]]))
    src = Fx.carrier.elements
    tgt = Fy.carrier.elements

    def image(S):
        return frozenset(tgt[arr[Fx.carrier.index(x)]] for x in S)

    def preimage(S):
        idx = {Fy.carrier.index(y) for y in S}
        return frozenset(src[p] for p in range(len(src)) if arr[p] in idx)

    from .filters import continuous_image

    return continuous_image(image, preimage, Fx, Fy)


def validate(X: TruncatedSitus) -> list[dict]:
    """Simplicial identities and face continuity; empty list when both hold."""
    violations: list[dict] = []
    N = X.depth
    faces = {}
    for m, idx in X.all_faces():
        try:
            faces[(idx, m)] = X.face(idx, m)
        except ValidationError as e:
            violations.extend(e.violations)
    if violations:
        return violations
    # identities: face(inner) ∘ face(outer) = face(composite)
    for m in range(1, N + 1):
        for k in range(1, N + 1):
            for outer in face_indices(m, k):
                a = faces[(outer, m)]
                for n in range(1, N + 1):
                    for inner in face_indices(k, n):
                        lhs = faces[(inner, k)][a]
                        rhs = faces[(compose_indices(outer, inner), m)]
                        if not np.array_equal(lhs, rhs):
                            p = int(np.nonzero(lhs != rhs)[0][0])
                            violations.append(
                                {
                                    "kind": "identity",
                                    "level": m,
                                    "face": [list(outer), list(inner)],
                                    "witness": repr(X.carriers[m].elements[p]),
                                }
                            )
    # continuity of every face map
    for (idx, m), arr in faces.items():
        n = len(idx)
        Fx, Fy = X.filters[m], X.filters[n]
        if not level_map_continuous(arr, Fx, Fy, X.core_mask(m), X.core_mask(n)):
            witness = None
            if not isinstance(Fy, PredicateFilter) and not isinstance(Fx, PredicateFilter):
                bad = [
                    X.carriers[m].elements[p]
                    for p in np.nonzero(X.core_mask(m))[0]
                    if not X.core_mask(n)[arr[p]]
                ]
                witness = repr(bad[0]) if bad else None
            violations.append(
                {
                    "kind": "continuity",
                    "level": m,
                    "face": list(idx),
                    "witness": witness,
                    "base_element_size": None if isinstance(Fy, PredicateFilter) else len(Fy.core),
                }
            )
    return violations


# -- constructors ------------------------------------------------------------------

def corepresented_by_preorder(
    P: FinPreorder,
    N: int = 3,
    filters: Sequence[Filter] | None = None,
    *,
    name: str = "",
    guard_override: bool = False,
    check: bool = True,
) -> TruncatedSitus:
    """Level n is the set of weakly increasing n-tuples of P."""
    if not P.reflexive:
        raise DomainError("corepresentation needs a reflexive relation (degeneracies repeat coordinates)")
    check_guard(n_atoms=len(P), depth=N, override=guard_override)
    if P.is_set:
        carriers = [list(product(P.elements, repeat=n)) for n in range(1, N + 1)]
    else:
        carriers = [P.weakly_increasing(n) for n in range(1, N + 1)]
    if filters is not None:
        filters = [
            F if F.carrier == Carrier(c) else _refit(F, c) for F, c in zip(filters, carriers)
        ]
    X = TruncatedSitus(
        N, carriers, filters, vertices=P.elements, preorder=P, name=name, guard_override=guard_override
    )
    if check and filters is not None:
        bad = validate(X)
        if bad:
            raise ValidationError(f"supplied filters violate face continuity: {bad[0]}", bad)
    return X


def _refit(F: Filter, carrier) -> Filter:
    carrier = Carrier(carrier)
    if set(F.carrier) != set(carrier):
        raise DomainError("supplied filter carrier does not match the level")
    if isinstance(F, HittingFilter):
        return HittingFilter(carrier, F.blocks, F.required)
    return Filter(carrier, core=F.core)


def corepresented_by_set(atoms, N: int = 3, filters=None, **kw) -> TruncatedSitus:
    return corepresented_by_preorder(FinPreorder.set(atoms), N, filters, **kw)


def tuple_situs(
    vertices, N: int, carriers: Sequence[Sequence[tuple]], filters=None, *, name="", preorder=None, **kw
) -> TruncatedSitus:
    """Tuple situs with explicit level carriers (they must be closed under faces)."""
    return TruncatedSitus(N, carriers, filters, vertices=vertices, preorder=preorder, name=name, **kw)


def terminal(N: int = 3) -> TruncatedSitus:
    return corepresented_by_set(["pt"], N, name="top")


def initial(N: int = 3) -> TruncatedSitus:
    carriers = [[] for _ in range(N)]
    filters = [Filter([], core=frozenset()) for _ in range(N)]
    return TruncatedSitus(N, carriers, filters, vertices=(), name="bottom")


# -- shift [+inf] -----------------------------------------------------------------

def shift(X: TruncatedSitus) -> TruncatedSitus:
    """Level n of the result is level n+1 of X; faces keep the last coordinate."""
    if X.depth < 2:
        raise DepthError("shift needs depth at least 2")
    N = X.depth - 1
    carriers = [X.carriers[n + 1].elements for n in range(1, N + 1)]
    filters = [X.filters[n + 1] for n in range(1, N + 1)]

    def face_fn(idx, x):
        m = None
        for k in range(2, X.depth + 1):
            if x in X.carriers[k]:
                m = k
                break
        full = tuple(idx) + (m,)
        return X.carriers[len(full)].elements[X.face(full, m)[X.carriers[m].index(x)]]

    # the level-membership lookup above is ambiguous only if carriers share
    # labels across levels; tuple situses never do (lengths differ)
    return TruncatedSitus(N, carriers, filters, face_fn, name=f"{X.name}[+inf]" if X.name else "shift")


def shift_nat(X: TruncatedSitus):
    """The natural map X[+inf] -> X (truncated to depth N-1), face [1..n] at level n."""
    from .homlift import SitusMorphism

    S = shift(X)
    maps = []
    for n in range(1, S.depth + 1):
        maps.append(X.face(tuple(range(1, n + 1)), n + 1).copy())
    target = truncate(X, S.depth)
    return SitusMorphism(S, target, maps)


def truncate(X: TruncatedSitus, N: int) -> TruncatedSitus:
    if N == X.depth:
        return X
    if N > X.depth or N < 1:
        raise DepthError("can only truncate to a smaller positive depth")
    carriers = [X.carriers[n].elements for n in range(1, N + 1)]
    filters = [X.filters[n] for n in range(1, N + 1)]
    Y = TruncatedSitus(
        N, carriers, filters, None if X.is_tuple else X._face_fn,
        vertices=X.vertices, preorder=X.preorder, name=X.name,
    )
    for (idx, m), arr in X._faces.items():
        if m <= N and len(idx) <= N:
            Y._faces[(idx, m)] = arr
    return Y


# -- quotients ---------------------------------------------------------------------

class LevelEquivalence:
    """Per-level partitions, given as class-label functions or explicit blocks."""

    def __init__(self, classify: dict[int, Callable[[Hashable], Hashable]] | None = None, blocks=None):
        self._classify = classify or {}
        self._blocks = blocks or {}

    def label(self, n: int, x):
        if n in self._classify:
            return self._classify[n](x)
        for i, b in enumerate(self._blocks.get(n, ())):
            if x in b:
                return i
        return ("singleton", x)

    @classmethod
    def identity(cls):
        return cls({})

    @classmethod
    def total(cls, depth: int):
        return cls({n: (lambda x: 0) for n in range(1, depth + 1)})


def quotient(X: TruncatedSitus, E: LevelEquivalence, *, name: str = "") -> TruncatedSitus:
    """Quotient by a face-compatible equivalence with pushforward filters."""
    N = X.depth
    classes_of = [None]
    class_lists = [None]
    for n in range(1, N + 1):
        groups: dict = {}
        for x in X.carriers[n]:
            groups.setdefault(E.label(n, x), []).append(x)
        cls_of = {}
        classes = []
        for members in groups.values():
            c = frozenset(members)
            classes.append(c)
            for x in members:
                cls_of[x] = c
        classes_of.append(cls_of)
        class_lists.append(classes)
    # compatibility
    for m, idx in X.all_faces():
        arr = X.face(idx, m)
        n = len(idx)
        seen = {}
        for p, x in enumerate(X.carriers[m]):
            c = classes_of[m][x]
            fc = classes_of[n][X.carriers[n].elements[arr[p]]]
            if c in seen and seen[c][1] != fc:
                raise ValidationError(
                    f"equivalence not compatible with face {list(idx)}: {seen[c][0]!r} ~ {x!r}",
                    [{"kind": "compatibility", "level": m, "face": list(idx), "witness": (repr(seen[c][0]), repr(x))}],
                )
            seen.setdefault(c, (x, fc))
    filters = []
    for n in range(1, N + 1):
        proj = SetMap(X.carriers[n], class_lists[n], classes_of[n])
        filters.append(finest_filter(proj, X.filters[n]))

    def face_fn(idx, c):
        x = next(iter(c))
        return classes_of[len(idx)][X.face_of(idx, x)]

    Q = TruncatedSitus(N, class_lists[1:], filters, face_fn, name=name or f"{X.name}/~")
    Q.projection_classes = classes_of
    return Q


def quotient_projection(X: TruncatedSitus, Q: TruncatedSitus):
    from .homlift import SitusMorphism

    maps = []
    for n in range(1, X.depth + 1):
        cls_of = Q.projection_classes[n]
        maps.append(np.array([Q.carriers[n].index(cls_of[x]) for x in X.carriers[n]], dtype=np.int64))
    return SitusMorphism(X, Q, maps)
