"""Colourings of simplices: homogeneity, the c-neighbourhood filter, the colour quotient."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Mapping

import numpy as np

from .errors import DomainError, ResourceError
from .filters import Filter
from .homlift import SitusMorphism
from .simplex import LevelEquivalence, TruncatedSitus, corepresented_by_set, face_indices, quotient

__all__ = [
    "Coloring",
    "is_hereditarily_nondegenerate",
    "homogeneous_simplices",
    "homogeneous_mask",
    "neighbourhood_situs",
    "coloring_quotient",
    "ramsey_search",
]


@dataclass(frozen=True)
class Coloring:
    """A colour for every simplex at one level."""

    level: int
    color: Mapping | Callable

    def __call__(self, x):
        return self.color[x] if isinstance(self.color, Mapping) else self.color(x)


def _require_tuple(X: TruncatedSitus):
    if not X.is_tuple:
        raise DomainError("degeneracy is decided on tuple situses only")


def _level_of(X, x):
    for n in range(1, X.depth + 1):
        if x in X.carriers[n]:
            return n
    raise DomainError(f"{x!r} is not a simplex of X")


def is_nondegenerate(x: tuple) -> bool:
    """Not the image of a degeneracy: no two consecutive coordinates agree."""
    return all(a != b for a, b in zip(x, x[1:]))


def is_hereditarily_nondegenerate(X: TruncatedSitus, x) -> bool:
    """Every strictly increasing face is non-degenerate, i.e. all coordinates differ."""
    _require_tuple(X)
    _level_of(X, x)
    return len(set(x)) == len(x)


def _strict_faces(m, n):
    return [idx for idx in face_indices(m, n) if len(set(idx)) == n]


def homogeneous_mask(X: TruncatedSitus, c: Coloring, m: int) -> np.ndarray:
    """Boolean mask over level m: all hereditarily non-degenerate level-n faces share one colour."""
    _require_tuple(X)
    n = c.level
    if not 1 <= n <= X.depth or not 1 <= m <= X.depth:
        raise DomainError("levels outside the situs depth")
    lvl = X.carriers[n].elements
    hnd = np.array([len(set(y)) == len(y) for y in lvl], dtype=bool)
    codes: dict = {}
    col = np.array([codes.setdefault(c(y), len(codes)) if hnd[k] else -1 for k, y in enumerate(lvl)], dtype=np.int64)
    out = np.ones(X.size(m), dtype=bool)
    if m < n:
        return out
    faces = np.stack([X.face(idx, m) for idx in _strict_faces(m, n)], axis=1)
    fc = col[faces]
    first = np.full(X.size(m), -1, dtype=np.int64)
    for j in range(fc.shape[1]):
        v = fc[:, j]
        take = (first < 0) & (v >= 0)
        first[take] = v[take]
        out &= (v < 0) | (first < 0) | (v == first)
    return out


def homogeneous_simplices(X: TruncatedSitus, c: Coloring, m: int) -> set:
    mask = homogeneous_mask(X, c, m)
    lvl = X.carriers[m].elements
    return {lvl[k] for k in np.flatnonzero(mask)}


def neighbourhood_situs(X: TruncatedSitus, c: Coloring) -> TruncatedSitus:
    """X with the filter of c-neighbourhoods of the main diagonal."""
    _require_tuple(X)
    filters = []
    for m in range(1, X.depth + 1):
        filters.append(Filter(X.carriers[m], core=homogeneous_simplices(X, c, m)))
    Y = TruncatedSitus(X.depth, [X.carriers[m].elements for m in range(1, X.depth + 1)], filters,
                       vertices=X.vertices, name=f"{X.name}[c-nbhd]" if X.name else "c-nbhd")
    return Y


def _approx_key(X, c, m, x):
    n = c.level
    parts = []
    for idx in face_indices(m, n):
        y = X.face_of(idx, x) if m != n or idx != tuple(range(1, n + 1)) else x
        h = len(set(y)) == len(y)
        parts.append((h, c(y) if h else None))
    return tuple(parts)


def coloring_quotient(X: TruncatedSitus, c: Coloring):
    """The quotient c_: X -> C by matching colours and degeneracy of faces.

    Returns ``(C, c_)`` where the source of ``c_`` carries the
    c-neighbourhood filter and C the filter of classes of homogeneous
    simplices (the main diagonal).
    """
    _require_tuple(X)
    src = neighbourhood_situs(X, c)
    keys = {m: {x: _approx_key(X, c, m, x) for x in X.carriers[m]} for m in range(1, X.depth + 1)}
    E = LevelEquivalence({m: keys[m].__getitem__ for m in keys})
    C = quotient(src, E, name="colours")
    maps = []
    for m in range(1, X.depth + 1):
        cls_of = C.projection_classes[m]
        maps.append(np.array([C.carriers[m].index(cls_of[x]) for x in X.carriers[m]], dtype=np.int64))
    return C, SitusMorphism(src, C, maps)


def ramsey_search(atoms: int, k: int = 3, colors: int = 2, *, batch: int = 4096):
    """Look for a colouring of pairs of ``atoms`` points with no homogeneous k-set.

    Sweeps every colouring; returns the first one without a homogeneous
    hereditarily non-degenerate k-simplex (as a dict on pairs), or None.
    """
    if atoms > 7 or k > 4:
        raise ResourceError("sweep limited to 7 atoms and k <= 4", ("atoms", 7))
    X = corepresented_by_set(list(range(1, atoms + 1)), k)
    pairs = list(combinations(range(1, atoms + 1), 2))
    lvl2 = X.carriers[2].elements
    pair_of = np.array([pairs.index(tuple(sorted(y))) if y[0] != y[1] else -1 for y in lvl2])
    tops = X.carriers[k].elements
    hnd = np.array([len(set(t)) == k for t in tops])
    faces = np.stack([X.face(idx, k) for idx in _strict_faces(k, 2)], axis=1)[hnd]
    edge = pair_of[faces]  # (simplices, faces) -> pair index
    total = colors ** len(pairs)
    weights = colors ** np.arange(len(pairs))
    for start in range(0, total, batch):
        codes = np.arange(start, min(total, start + batch))
        cols = (codes[:, None] // weights[None, :]) % colors  # (batch, pairs)
        fc = cols[:, edge]  # (batch, simplices, faces)
        homog = (fc == fc[:, :, :1]).all(axis=2).any(axis=1)
        bad = np.flatnonzero(~homog)
        if bad.size:
            row = cols[bad[0]]
            return {p: int(row[j]) for j, p in enumerate(pairs)}
    return None
