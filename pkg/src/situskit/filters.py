"""Finite filters, continuity of set maps, induced filters.

A filter here is an upward closed family of subsets of a finite carrier that
is closed under pairwise intersection.  The empty set is allowed to be a
neighbourhood.  On a finite carrier such a family always has a least element,
so a filter is stored through that single set (its *core*); ``base`` exposes
it as the list of minimal base elements.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import DomainError


class Carrier:
    """Ordered finite set of atoms.  Order is the interning order."""

    __slots__ = ("elements", "_index")

    def __init__(self, elements: Iterable[Hashable] = ()):
        elements = tuple(elements)
        index = {}
        for i, a in enumerate(elements):
            if a in index:
                raise DomainError(f"duplicate atom {a!r} in carrier")
            index[a] = i
        self.elements = elements
        self._index = index

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, a):
        return a in self._index

    def __eq__(self, other):
        return isinstance(other, Carrier) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"Carrier({list(self.elements)!r})"

    def index(self, a) -> int:
        return self._index[a]

    def as_set(self) -> frozenset:
        return frozenset(self.elements)

    def check_subset(self, S: Iterable) -> frozenset:
        S = frozenset(S)
        bad = [a for a in S if a not in self._index]
        if bad:
            raise DomainError(f"atoms outside carrier: {bad[:3]!r}")
        return S


def _as_carrier(c) -> Carrier:
    return c if isinstance(c, Carrier) else Carrier(c)


class Filter:
    """Filter on a finite carrier.

    Either give ``base`` (any family of subsets; its intersection closure is
    taken) or ``core`` (the least neighbourhood) directly.  An empty base means
    the antidiscrete filter, whose only neighbourhood is the carrier.
    """

    __slots__ = ("carrier", "core")

    def __init__(self, carrier, base: Iterable[Iterable] | None = None, *, core=None):
        self.carrier = _as_carrier(carrier)
        if core is not None:
            if base is not None:
                raise DomainError("give either base or core, not both")
            self.core = self.carrier.check_subset(core)
            return
        least = self.carrier.as_set()
        for b in base or ():
            least = least & self.carrier.check_subset(b)
        self.core = least

    # constructors
    @classmethod
    def antidiscrete(cls, carrier) -> "Filter":
        carrier = _as_carrier(carrier)
        return cls(carrier, core=carrier.as_set())

    @classmethod
    def discrete(cls, carrier) -> "Filter":
        """All subsets are neighbourhoods; the least one is the empty set."""
        return cls(carrier, core=frozenset())

    @classmethod
    def principal(cls, carrier, S) -> "Filter":
        return cls(carrier, core=S)

    @property
    def base(self) -> tuple[frozenset, ...]:
        """Minimal elements of the intersection-closed base."""
        if self.is_antidiscrete():
            return ()
        return (self.core,)

    @property
    def generators(self) -> tuple[frozenset, ...]:
        """Base elements to test continuity against (the carrier included)."""
        return (self.core,)

    def is_antidiscrete(self) -> bool:
        return len(self.core) == len(self.carrier)

    def is_neighborhood(self, S: Iterable) -> bool:
        S = self.carrier.check_subset(S)
        return self.core <= S

    def __eq__(self, other):
        return (
            isinstance(other, Filter)
            and type(other) is type(self)
            and self.carrier == other.carrier
            and self.core == other.core
        )

    def __hash__(self):
        return hash((self.carrier, self.core))

    def __repr__(self):
        if self.is_antidiscrete():
            return f"Filter(antidiscrete, |carrier|={len(self.carrier)})"
        return f"Filter(core of size {len(self.core)}, |carrier|={len(self.carrier)})"


class PredicateFilter(Filter):
    """Upward closed family given by a membership predicate.

    Used when a base would be too large to materialise.  Only
    ``is_neighborhood`` is meaningful; such a filter can be the source of a
    continuous map but not the target of a continuity check.
    """

    __slots__ = ("_pred",)

    def __init__(self, carrier, predicate: Callable[[frozenset], bool]):
        self.carrier = _as_carrier(carrier)
        self.core = None
        self._pred = predicate

    @property
    def base(self):
        raise DomainError("predicate-backed filter has no materialised base")

    @property
    def generators(self):
        raise DomainError("predicate-backed filter has no materialised base")

    def is_antidiscrete(self) -> bool:
        return False

    def is_neighborhood(self, S: Iterable) -> bool:
        S = self.carrier.check_subset(S)
        return bool(self._pred(S))

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)

    def __repr__(self):
        return f"PredicateFilter(|carrier|={len(self.carrier)})"


class HittingFilter(PredicateFilter):
    """S is large iff it contains ``required`` and meets every block.

    Upward closed but not intersection closed in general.  Continuity against
    it can still be decided exactly from the blocks (see ``continuous_image``).
    """

    __slots__ = ("blocks", "required")

    def __init__(self, carrier, blocks: Iterable[Iterable], required: Iterable = ()):
        carrier = _as_carrier(carrier)
        blocks = tuple(sorted({carrier.check_subset(b) for b in blocks}, key=_set_key))
        required = carrier.check_subset(required)
        super().__init__(carrier, lambda S: required <= S and all(S & b for b in blocks))
        self.blocks = blocks
        self.required = required

    def __eq__(self, other):
        return (
            isinstance(other, HittingFilter)
            and self.carrier == other.carrier
            and self.required == other.required
            and set(self.blocks) == set(other.blocks)
        )

    def __hash__(self):
        return hash((self.carrier, self.required, frozenset(self.blocks)))

    def __repr__(self):
        return f"HittingFilter({len(self.blocks)} blocks, |required|={len(self.required)}, |carrier|={len(self.carrier)})"


def _set_key(S):
    return (len(S), sorted(map(repr, S)))


class SetMap:
    """Total map between finite carriers."""

    __slots__ = ("source", "target", "table")

    def __init__(self, source, target, table: Mapping | Callable | Sequence):
        self.source = _as_carrier(source)
        self.target = _as_carrier(target)
        if callable(table) and not isinstance(table, Mapping):
            table = {a: table(a) for a in self.source}
        elif not isinstance(table, Mapping):
            table = dict(zip(self.source, table))
        missing = [a for a in self.source if a not in table]
        if missing:
            raise DomainError(f"map not total, missing {missing[:3]!r}")
        bad = [table[a] for a in self.source if table[a] not in self.target]
        if bad:
            raise DomainError(f"map leaves target carrier: {bad[:3]!r}")
        self.table = {a: table[a] for a in self.source}

    def __call__(self, a):
        return self.table[a]

    def image(self, S: Iterable) -> frozenset:
        return frozenset(self.table[a] for a in S)

    def preimage(self, S: Iterable) -> frozenset:
        S = frozenset(S)
        return frozenset(a for a, b in self.table.items() if b in S)

    def compose(self, first: "SetMap") -> "SetMap":
        """``self ∘ first``."""
        if first.target != self.source:
            raise DomainError("carrier mismatch in composition")
        return SetMap(first.source, self.target, {a: self.table[b] for a, b in first.table.items()})

    @classmethod
    def identity(cls, carrier) -> "SetMap":
        carrier = _as_carrier(carrier)
        return cls(carrier, carrier, {a: a for a in carrier})

    def __eq__(self, other):
        return (
            isinstance(other, SetMap)
            and self.source == other.source
            and self.target == other.target
            and self.table == other.table
        )

    def __hash__(self):
        return hash((self.source, tuple(self.table[a] for a in self.source)))

    def __repr__(self):
        return f"SetMap({self.table!r})"


def is_neighborhood(F: Filter, S: Iterable) -> bool:
    return F.is_neighborhood(S)


def is_continuous(f: SetMap, Fx: Filter, Fy: Filter) -> bool:
    """Preimage of every base element of ``Fy`` is a neighbourhood of ``Fx``."""
    if f.source != Fx.carrier or f.target != Fy.carrier:
        raise DomainError("carrier mismatch between map and filters")
    return continuous_image(f.image, f.preimage, Fx, Fy)


def _shape(F: Filter):
    """(required set, blocks) with the blocks already met by the required set dropped."""
    if isinstance(F, HittingFilter):
        return F.required, [b for b in F.blocks if not (b & F.required)]
    if type(F) is PredicateFilter:
        raise DomainError("continuity through an opaque predicate filter is not decidable")
    return F.core, []


def continuous_image(image, preimage, Fx: Filter, Fy: Filter) -> bool:
    """Continuity given image/preimage callables on frozensets.

    Both filters are read as "contains K and meets every block" (a principal
    filter has no blocks).  Every large target set pulls back to a large set
    iff f(K) lies in the points common to all large target sets, and each
    source block not met by K has an image that meets K' or contains a target
    block.
    """
    K, blocks = _shape(Fx)
    K2, blocks2 = _shape(Fy)
    if frozenset() in blocks2:
        return True  # nothing is large in the target
    forced = K2 | {next(iter(b)) for b in blocks2 if len(b) == 1}
    if not image(K) <= forced:
        return False
    for b in blocks:
        fb = image(b)
        if fb & K2:
            continue
        if not any(b2 <= fb for b2 in blocks2):
            return False
    return True


def is_continuous_exhaustive(f: SetMap, Fx: Filter, Fy: Filter) -> bool:
    """Same question, checked over every subset of the target carrier."""
    if f.source != Fx.carrier or f.target != Fy.carrier:
        raise DomainError("carrier mismatch between map and filters")
    for S in all_subsets(Fy.carrier):
        if Fy.is_neighborhood(S) and not Fx.is_neighborhood(f.preimage(S)):
            return False
    return True


def all_subsets(carrier) -> Iterable[frozenset]:
    elements = list(carrier)
    for k in range(len(elements) + 1):
        for c in combinations(elements, k):
            yield frozenset(c)


def coarsest_filter(target_maps: Sequence[tuple[SetMap, Filter]], source=None) -> Filter:
    """Coarsest filter on the common source making every listed map continuous."""
    if not target_maps:
        if source is None:
            raise DomainError("empty map list needs an explicit source carrier")
        return Filter.antidiscrete(source)
    carrier = target_maps[0][0].source
    if source is not None and _as_carrier(source) != carrier:
        raise DomainError("inconsistent source carriers")
    preimages = []
    for f, F in target_maps:
        if f.source != carrier:
            raise DomainError("inconsistent source carriers")
        if f.target != F.carrier:
            raise DomainError("map target does not match its filter")
        preimages.extend(f.preimage(b) for b in F.base)
    return Filter(carrier, preimages)


def finest_filter(source_map: SetMap, F: Filter) -> Filter:
    """Finest filter on the target making ``source_map`` continuous."""
    if source_map.source != F.carrier:
        raise DomainError("map source does not match filter carrier")
    if isinstance(F, PredicateFilter):
        raise DomainError("cannot push forward a predicate-backed filter")
    return Filter(source_map.target, [source_map.image(F.core)])
