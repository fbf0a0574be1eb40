"""Ordered partition labels ``(S_1, ..., S_p)`` and the barycentric complex.

A label is a linearly ordered partition of an arrangement whose first block
is itself admissible.  ``L1 <= L2`` exactly when ``L1`` arises from ``L2``
by dropping trailing blocks and then merging runs of consecutive blocks.

When the empty arrangement is admissible (polygons without free vertices)
the first block may be empty; such labels are the chains through the top
cell, so the label poset over a polygon poset is the full order complex.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from .cells import SimplicialComplex
from .poset import Poset, _bits


class LabelError(ValueError):
    pass


def _sorted(items: Iterable) -> list:
    items = list(items)
    try:
        return sorted(items)
    except TypeError:
        return sorted(items, key=repr)


@dataclass(frozen=True)
class PartitionLabel:
    blocks: tuple[frozenset, ...]

    def __post_init__(self):
        blocks = tuple(frozenset(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if not blocks:
            raise LabelError("a label needs at least one block")
        for i, b in enumerate(blocks[1:], start=2):
            if not b:
                raise LabelError(f"block {i} is empty")
        seen: set = set()
        for b in blocks:
            if seen & b:
                raise LabelError("blocks are not disjoint")
            seen |= b

    @classmethod
    def of(cls, *blocks: Iterable[Hashable]) -> "PartitionLabel":
        return cls(tuple(frozenset(b) for b in blocks))

    @property
    def p(self) -> int:
        return len(self.blocks)

    @property
    def dim(self) -> int:
        return len(self.blocks) - 1

    @cached_property
    def arrangement(self) -> frozenset:
        return frozenset().union(*self.blocks)

    def prefix_unions(self) -> list[frozenset]:
        out, acc = [], frozenset()
        for b in self.blocks:
            acc = acc | b
            out.append(acc)
        return out

    def sort_key(self) -> tuple:
        return tuple(tuple(_sorted(b)) for b in self.blocks)

    def __lt__(self, other: "PartitionLabel") -> bool:
        return repr(self.sort_key()) < repr(other.sort_key())

    def __str__(self) -> str:
        return "(" + ", ".join("{" + ",".join(map(str, _sorted(b))) + "}" for b in self.blocks) + ")"

    def to_obj(self, encode: Callable = lambda d: d) -> list:
        return [[encode(d) for d in _sorted(b)] for b in self.blocks]

    def to_json(self, arrangement=None, encode: Callable = lambda d: d) -> str:
        return json.dumps({"arrangement": arrangement, "blocks": self.to_obj(encode)}, sort_keys=True)

    @classmethod
    def from_obj(cls, blocks: Sequence[Sequence], decode: Callable = lambda d: d) -> "PartitionLabel":
        return cls(tuple(frozenset(decode(d) for d in b) for b in blocks))

    def truncate(self, m: int) -> "PartitionLabel":
        return PartitionLabel(self.blocks[:m])

    def merge(self, i: int) -> "PartitionLabel":
        """Merge blocks ``i`` and ``i+1`` (0-based)."""
        b = self.blocks
        return PartitionLabel(b[:i] + (b[i] | b[i + 1],) + b[i + 2:])


def leq_labels(l1: PartitionLabel, l2: PartitionLabel) -> bool:
    """Whether ``l1`` is a face of ``l2`` (truncation then consecutive merges)."""
    j = 0
    blocks2 = l2.blocks
    for target in l1.blocks:
        acc: frozenset = frozenset()
        while True:
            if j >= len(blocks2):
                return False
            acc = acc | blocks2[j]
            j += 1
            if acc == target:
                break
            if not acc <= target:
                return False
    return True


def facets(label: PartitionLabel) -> list[PartitionLabel]:
    """Codimension-one faces: one truncation and every adjacent merge."""
    if label.p == 1:
        return []
    out = [label.truncate(label.p - 1)]
    out.extend(label.merge(i) for i in range(label.p - 1))
    return out


def faces(label: PartitionLabel, admissible: Callable[[frozenset], bool] | None = None) -> set[PartitionLabel]:
    """All labels strictly below ``label``.

    ``admissible`` optionally filters on the first block; faces of a valid
    label always pass, so the filter only matters for foreign inputs.
    """
    out = set()
    blocks = label.blocks
    for m in range(1, label.p + 1):
        for cuts in itertools.product((False, True), repeat=m - 1):
            merged = [blocks[0]]
            for cut, b in zip(cuts, blocks[1:m]):
                if cut:
                    merged.append(b)
                else:
                    merged[-1] = merged[-1] | b
            lab = PartitionLabel(tuple(merged))
            if lab != label and (admissible is None or admissible(lab.blocks[0])):
                out.add(lab)
    return out


def faces_by_closure(label: PartitionLabel) -> set[PartitionLabel]:
    """Brute-force transitive closure of the two single-step rules."""
    seen: set[PartitionLabel] = set()
    frontier = [label]
    while frontier:
        cur = frontier.pop()
        for f in facets(cur):
            if f not in seen:
                seen.add(f)
                frontier.append(f)
    seen.discard(label)
    return seen


def ordered_set_partitions(items: Sequence) -> Iterator[tuple[frozenset, ...]]:
    """All ordered partitions of ``items`` into non-empty blocks."""
    items = list(items)
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for part in ordered_set_partitions(rest):
        # put ``first`` into an existing block or into a new block at any position
        for i in range(len(part)):
            yield part[:i] + (part[i] | {first},) + part[i + 1:]
        for i in range(len(part) + 1):
            yield part[:i] + (frozenset([first]),) + part[i:]


def is_symmetric_label(label: PartitionLabel, inv: Callable[[Hashable], Hashable]) -> bool:
    return all(frozenset(inv(d) for d in b) == b for b in label.blocks)


@dataclass
class BDComplex:
    labels: list[PartitionLabel]
    poset: Poset
    complex: SimplicialComplex
    vertex_of: dict[frozenset, int]  # arrangement -> element id in D

    def index(self, label: PartitionLabel) -> int:
        return self.poset.index_of(label)


def label_poset(labels: Iterable[PartitionLabel]) -> Poset:
    """Poset on a face-closed label set, covers given by the single-step faces."""
    labs = sorted(set(labels), key=lambda l: (l.p, l))
    idx = {l: i for i, l in enumerate(labs)}
    covers = []
    for l in labs:
        for f in facets(l):
            if f not in idx:
                raise LabelError(f"label set is not closed under faces: {f} missing")
            covers.append((idx[f], idx[l]))
    return Poset(labs, covers, check=False)


def bd_complex(D: Poset, diagonals_of: Callable = lambda a: a.diagonals) -> BDComplex:
    """All labels over the arrangements of ``D`` and the simplicial complex they form.

    A label ``(S_1, ..., S_p)`` corresponds to the chain of arrangements
    ``S_1 ⊂ S_1∪S_2 ⊂ ...``, read in ``D`` as a descending chain, so the
    labels are enumerated as the chains of ``D``.
    """
    sets = [frozenset(diagonals_of(a)) for a in D.elements]
    vertex_of = {s: i for i, s in enumerate(sets)}
    labels: list[PartitionLabel] = []
    for top in range(len(D)):
        # chains whose smallest arrangement is ``top``, extended by strictly larger ones
        stack = [(top, (top,))]
        while stack:
            last, chain = stack.pop()
            prev: frozenset = frozenset()
            blocks = []
            for i in chain:
                blocks.append(sets[i] - prev)
                prev = sets[i]
            labels.append(PartitionLabel(tuple(blocks)))
            for b in _bits(D.down_sets[last] & ~(1 << last)):
                stack.append((b, chain + (b,)))
    K = SimplicialComplex(D.maximal_chains(), vertices=range(len(D)))
    return BDComplex(labels, label_poset(labels), K, vertex_of)


def label_vertices(label: PartitionLabel, vertex_of: dict[frozenset, int]) -> frozenset[int]:
    """Vertex set of the simplex carried by ``label`` (its prefix unions)."""
    return frozenset(vertex_of[u] for u in label.prefix_unions())
