"""Cell complexes: abstract simplicial complexes and regular CW face posets."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence


class SimplicialComplex:
    """Abstract simplicial complex given by its facets.

    Vertices must be mutually orderable (ints in practice).  Non-maximal
    entries of ``facets`` are discarded so that no facet contains another.
    """

    def __init__(self, facets: Iterable[Iterable[Hashable]], vertices: Iterable[Hashable] = ()):
        fs = {frozenset(f) for f in facets}
        fs.discard(frozenset())
        # drop facets contained in bigger ones (inverted vertex index)
        flist = list(fs)
        containing: dict = {}
        for i, f in enumerate(flist):
            for v in f:
                containing.setdefault(v, set()).add(i)
        kept: list[frozenset] = []
        for i, f in enumerate(flist):
            it = iter(f)
            common = set(containing[next(it)])
            for v in it:
                common &= containing[v]
                if len(common) == 1:
                    break
            if not any(len(flist[j]) > len(f) for j in common):
                kept.append(f)
        extra = set(vertices) - set().union(*kept) if kept else set(vertices)
        kept.extend(frozenset([v]) for v in extra)
        self.facets: frozenset[frozenset] = frozenset(kept)
        self.vertices: frozenset = frozenset(v for f in kept for v in f)

    def __repr__(self) -> str:
        return f"SimplicialComplex(f_vector={self.f_vector})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SimplicialComplex) and self.facets == other.facets

    def __hash__(self) -> int:
        return hash(self.facets)

    @property
    def dim(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    @cached_property
    def simplices(self) -> list[list[tuple]]:
        """All non-empty simplices as sorted vertex tuples, grouped by dimension."""
        seen: set[tuple] = set()
        for f in self.facets:
            t = tuple(sorted(f))
            for k in range(1, len(t) + 1):
                seen.update(itertools.combinations(t, k))
        out: list[list[tuple]] = [[] for _ in range(self.dim + 1)]
        for s in seen:
            out[len(s) - 1].append(s)
        for layer in out:
            layer.sort()
        return out

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.simplices)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector))

    def subcomplex(self, keep_vertices: Iterable[Hashable]) -> "SimplicialComplex":
        """Full subcomplex induced on ``keep_vertices``."""
        keep = set(keep_vertices)
        return SimplicialComplex((f & keep for f in self.facets), keep & self.vertices)

    def relabel(self, mapping) -> "SimplicialComplex":
        return SimplicialComplex(([mapping[v] for v in f] for f in self.facets))

    def to_cw(self) -> "RegularCW":
        return RegularCW.from_simplicial(self)

    def to_json(self) -> str:
        facets = sorted(sorted(f) for f in self.facets)
        return json.dumps({"facets": facets}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SimplicialComplex":
        return cls(json.loads(text)["facets"])


def disjoint_union(a: SimplicialComplex, b: SimplicialComplex) -> SimplicialComplex:
    """Disjoint union with vertices tagged ``(0, v)`` and ``(1, v)``."""
    fa = [[(0, v) for v in f] for f in a.facets]
    fb = [[(1, v) for v in f] for f in b.facets]
    return SimplicialComplex(fa + fb)


@dataclass
class RegularCW:
    """Regular CW complex presented by its face poset.

    ``facets[c]`` lists the ids of the codimension-one faces of cell ``c``
    (empty for vertices).  ``keys`` optionally carries a payload per cell.
    """

    dims: list[int]
    facets: list[tuple[int, ...]]
    keys: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.dims) != len(self.facets):
            raise ValueError("dims and facets differ in length")
        for c, fs in enumerate(self.facets):
            for f in fs:
                if self.dims[f] != self.dims[c] - 1:
                    raise ValueError(f"cell {c}: facet {f} has wrong dimension")
        if not self.keys:
            self.keys = list(range(len(self.dims)))

    def __len__(self) -> int:
        return len(self.dims)

    @cached_property
    def cofacets(self) -> list[list[int]]:
        co: list[list[int]] = [[] for _ in self.dims]
        for c, fs in enumerate(self.facets):
            for f in fs:
                co[f].append(c)
        return co

    @cached_property
    def index(self) -> dict:
        return {k: i for i, k in enumerate(self.keys)}

    @property
    def dim(self) -> int:
        return max(self.dims, default=-1)

    def f_vector(self) -> tuple[int, ...]:
        counts = [0] * (self.dim + 1)
        for d in self.dims:
            counts[d] += 1
        return tuple(counts)

    def euler_characteristic(self) -> int:
        return sum((-1) ** d for d in self.dims)

    def closure(self, cell: int) -> set[int]:
        seen = {cell}
        stack = [cell]
        while stack:
            for f in self.facets[stack.pop()]:
                if f not in seen:
                    seen.add(f)
                    stack.append(f)
        return seen

    def vertices_of(self, cell: int) -> set[int]:
        return {c for c in self.closure(cell) if self.dims[c] == 0}

    @classmethod
    def from_simplicial(cls, K: SimplicialComplex) -> "RegularCW":
        simplices = [s for layer in K.simplices for s in layer]
        idx = {s: i for i, s in enumerate(simplices)}
        facets = []
        for s in simplices:
            if len(s) == 1:
                facets.append(())
            else:
                facets.append(tuple(idx[s[:i] + s[i + 1:]] for i in range(len(s))))
        return cls([len(s) - 1 for s in simplices], facets, simplices)

    @classmethod
    def from_face_relation(cls, keys: Sequence, dims: Sequence[int], facets_of) -> "RegularCW":
        """Build from payload keys, their dimensions and a facet function on keys."""
        idx = {k: i for i, k in enumerate(keys)}
        facets = [tuple(sorted(idx[f] for f in facets_of(k))) for k in keys]
        return cls(list(dims), facets, list(keys))
