"""Discrete Morse theory on regular cell complexes.

Cells are integer ids of a :class:`~diagcx.cells.RegularCW`.  A discrete
vector field is a partial matching ``alpha -> beta`` of cells with
``alpha`` a facet of ``beta``.  Besides the generic machinery (V-paths,
acyclicity, collapses, a greedy collapsing field) this module generates
the preimage complexes over a closed simplex obtained by adding new
diagonals at a free vertex ``v``, and the three-step matching that
contracts them to one cell.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .cells import RegularCW, SimplicialComplex
from .labels import PartitionLabel, faces, facets, leq_labels, ordered_set_partitions


class MatchingError(ValueError):
    """The pairs do not form a discrete vector field on the complex."""


class CyclicFieldError(ValueError):
    pass


@dataclass
class DiscreteVectorField:
    pairs: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        self.up: dict[int, int] = {}
        self.down: dict[int, int] = {}
        for a, b in self.pairs:
            self._register(a, b)

    def _register(self, a: int, b: int) -> None:
        if a in self.up or a in self.down or b in self.up or b in self.down or a == b:
            raise MatchingError(f"cell matched twice in pair {(a, b)}")
        self.up[a] = b
        self.down[b] = a

    def add(self, a: int, b: int) -> None:
        self._register(a, b)
        self.pairs.append((a, b))

    def is_matched(self, c: int) -> bool:
        return c in self.up or c in self.down

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair) -> bool:
        a, b = pair
        return self.up.get(a) == b

    def critical(self, n_cells: int) -> list[int]:
        return [c for c in range(n_cells) if not self.is_matched(c)]

    def validate(self, cw: RegularCW) -> None:
        for a, b in self.pairs:
            if not (0 <= a < len(cw) and 0 <= b < len(cw)):
                raise MatchingError(f"pair {(a, b)} references unknown cells")
            if a not in cw.facets[b]:
                raise MatchingError(f"cell {a} is not a facet of {b}")

    def to_obj(self, cw: RegularCW | None = None, encode=lambda k: k) -> list:
        if cw is None:
            return sorted([a, b] for a, b in self.pairs)
        return sorted([encode(cw.keys[a]), encode(cw.keys[b])] for a, b in self.pairs)


@dataclass
class CollapseResult:
    field: DiscreteVectorField
    critical: set[int]
    order: list[tuple]  # ("collapse", a, b) or ("critical", c), in removal order

    @property
    def single_vertex(self) -> bool:
        return len(self.critical) == 1


def _rank_order(cw: RegularCW) -> list[int]:
    def key(c):
        return (cw.dims[c], cw.keys[c])

    ids = list(range(len(cw)))
    try:
        ids.sort(key=key)
    except TypeError:
        ids.sort(key=lambda c: (cw.dims[c], repr(cw.keys[c])))
    rank = [0] * len(cw)
    for r, c in enumerate(ids):
        rank[c] = r
    return rank


def greedy_collapse(cw: RegularCW) -> CollapseResult:
    """Collapse free faces greedily, lowest dimension first, ties by key.

    When no free face is left, the largest remaining maximal cell is declared
    critical and removed, so the result is always an acyclic field.
    """
    n = len(cw)
    rank = _rank_order(cw)
    by_rank = sorted(range(n), key=rank.__getitem__)
    co = cw.cofacets
    alive = [True] * n
    live_co = [len(co[c]) for c in range(n)]
    remaining = n
    V = DiscreteVectorField()
    order: list[tuple] = []
    critical: set[int] = set()
    heap = [rank[c] for c in range(n) if live_co[c] == 1]
    heapq.heapify(heap)

    def kill(c: int) -> None:
        nonlocal remaining
        alive[c] = False
        remaining -= 1
        for f in cw.facets[c]:
            live_co[f] -= 1
            if alive[f] and live_co[f] == 1:
                heapq.heappush(heap, rank[f])

    while remaining:
        while heap:
            a = by_rank[heapq.heappop(heap)]
            if not alive[a] or live_co[a] != 1:
                continue
            b = next(x for x in co[a] if alive[x])
            V.add(a, b)
            order.append(("collapse", a, b))
            kill(b)
            kill(a)
        if not remaining:
            break
        # stuck: remove a top-dimensional maximal cell as critical
        c = max((x for x in range(n) if alive[x] and live_co[x] == 0), key=lambda x: (cw.dims[x], -rank[x]))
        critical.add(c)
        order.append(("critical", c))
        kill(c)
    return CollapseResult(V, critical, order)


def validate_vpath(cw: RegularCW, V: DiscreteVectorField, path: Sequence[int]) -> bool:
    """Check ``alpha_0, beta_0, alpha_1, ...``; an odd tail may end on a beta."""
    if not path:
        return False
    for i in range(0, len(path) - 1, 2):
        a, b = path[i], path[i + 1]
        if (a, b) not in V:
            return False
        if i + 2 < len(path):
            nxt = path[i + 2]
            if nxt not in cw.facets[b] or nxt == a:
                return False
    return True


def is_closed_vpath(path: Sequence[int]) -> bool:
    return len(path) >= 3 and len(path) % 2 == 1 and path[0] == path[-1]


def check_acyclic(cw: RegularCW, V: DiscreteVectorField) -> tuple[bool, list[int] | None]:
    """``(True, None)`` if there is no closed V-path, else ``(False, witness)``.

    The witness is a closed V-path ``alpha_0, beta_0, ..., alpha_0``.
    """
    V.validate(cw)
    n = len(cw)

    # modified Hasse diagram restricted to alternating moves: alpha -> V(alpha) -> other facets
    def succ(a: int) -> Iterable[int]:
        b = V.up.get(a)
        if b is None:
            return ()
        return [x for x in cw.facets[b] if x != a and x in V.up]

    color = [0] * n  # 0 new, 1 on stack, 2 done
    for s in V.up:
        if color[s]:
            continue
        stack = [(s, iter(succ(s)))]
        color[s] = 1
        trail = [s]
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                trail.pop()
                color[node] = 2
                continue
            if color[nxt] == 1:
                cyc = trail[trail.index(nxt):] + [nxt]
                witness = []
                for a in cyc[:-1]:
                    witness += [a, V.up[a]]
                witness.append(nxt)
                return False, witness
            if color[nxt] == 0:
                color[nxt] = 1
                trail.append(nxt)
                stack.append((nxt, iter(succ(nxt))))
    return True, None


def collapse(cw: RegularCW, V: DiscreteVectorField) -> CollapseResult:
    """Remove matched pairs by elementary collapses, critical cells when maximal.

    Raises :class:`CyclicFieldError` if the process gets stuck, which for a
    valid matching happens exactly when it has a closed path.
    """
    V.validate(cw)
    n = len(cw)
    rank = _rank_order(cw)
    co = cw.cofacets
    alive = [True] * n
    live_co = [len(co[c]) for c in range(n)]
    order: list[tuple] = []

    def ready(c: int) -> bool:
        if not alive[c]:
            return False
        if c in V.down:  # beta: needs to be maximal and its alpha to have it as only coface
            a = V.down[c]
            return live_co[c] == 0 and live_co[a] == 1
        if c in V.up:
            return False
        return live_co[c] == 0

    def kill(c: int, heap: list) -> None:
        alive[c] = False
        for f in cw.facets[c]:
            live_co[f] -= 1
            heapq.heappush(heap, (-cw.dims[f], rank[f], f))
            if f in V.up and alive[V.up[f]]:
                b = V.up[f]
                heapq.heappush(heap, (-cw.dims[b], rank[b], b))

    heap = [(-cw.dims[c], rank[c], c) for c in range(n)]
    heapq.heapify(heap)
    removed = 0
    while heap:
        _, _, c = heapq.heappop(heap)
        if not ready(c):
            continue
        if c in V.down:
            a = V.down[c]
            order.append(("collapse", a, c))
            kill(c, heap)
            kill(a, heap)
            removed += 2
        else:
            order.append(("critical", c))
            kill(c, heap)
            removed += 1
    if removed != n:
        raise CyclicFieldError("collapse got stuck; the field has a closed path")
    critical = {step[1] for step in order if step[0] == "critical"}
    return CollapseResult(V, critical, order)


# --- preimage complexes at a free vertex ---------------------------------------------------------

def old(j: int) -> tuple:
    return ("o", j)


def new(c: int) -> tuple:
    return ("d", c)


def is_new(x: Hashable) -> bool:
    return isinstance(x, tuple) and len(x) == 2 and x[0] == "d"


def base_from_sizes(sizes: Sequence[int]) -> PartitionLabel:
    """Base label with blocks of the given sizes over old diagonals ``("o", j)``."""
    if not sizes or any(s < 1 for s in sizes):
        raise ValueError("block sizes must be positive")
    blocks, j = [], 1
    for s in sizes:
        blocks.append({old(j + t) for t in range(s)})
        j += s
    return PartitionLabel.of(*blocks)


@dataclass
class PreimageInstance:
    base: PartitionLabel
    q: int
    cells: list[PartitionLabel]

    @property
    def new_diagonals(self) -> list[tuple]:
        return [new(c) for c in range(1, self.q + 1)]

    @property
    def critical_label(self) -> PartitionLabel:
        return PartitionLabel.of(self.base.blocks[0] | set(self.new_diagonals))

    def cw(self) -> RegularCW:
        present = set(self.cells)
        return RegularCW.from_face_relation(
            self.cells, [c.dim for c in self.cells], lambda L: [f for f in facets(L) if f in present]
        )

    def simplicial_complex(self) -> SimplicialComplex:
        """The cells as simplices on 1-block labels (prefix unions)."""
        verts = {c.blocks[0]: i for i, c in enumerate(self.cells) if c.p == 1}
        return SimplicialComplex(
            ([verts[u] for u in c.prefix_unions()] for c in self.cells), vertices=verts.values()
        )

    def to_obj(self) -> dict:
        return {
            "base": self.base.to_obj(list),
            "q": self.q,
            "cells": [c.to_obj(list) for c in self.cells],
        }


def _with_new(T: tuple[frozenset, ...], rest: Sequence, first: frozenset) -> Iterable[tuple[frozenset, ...]]:
    """Distribute ``rest`` over blocks ``T[1:]`` or into new-only gap blocks after each ``T_i``."""
    m = len(T)
    rest = list(rest)
    # slot 0..m-2: join T[1+s]; slot (m-1)+i: gap after T[i]
    for slots in itertools.product(range(2 * m - 1), repeat=len(rest)):
        joined = [set() for _ in range(m)]
        gaps: list[list] = [[] for _ in range(m)]
        for x, s in zip(rest, slots):
            if s < m - 1:
                joined[s + 1].add(x)
            else:
                gaps[s - (m - 1)].append(x)
        for parts in itertools.product(*(list(ordered_set_partitions(g)) for g in gaps)):
            blocks = []
            for i in range(m):
                blocks.append((first if i == 0 else T[i]) | joined[i])
                blocks.extend(parts[i])
            yield tuple(blocks)


def generate_preimage(base: PartitionLabel | Sequence[int], q: int) -> PreimageInstance:
    """All cells over the closed simplex of ``base`` once new diagonals ``d_1..d_q`` are added."""
    if q < 1:
        raise ValueError("q must be at least 1")
    if not isinstance(base, PartitionLabel):
        base = base_from_sizes(base)
    NEW = [new(c) for c in range(1, q + 1)]
    if base.arrangement & set(NEW):
        raise ValueError("base label already uses new-diagonal ids")
    cells: set[PartitionLabel] = set()
    for T in faces(base) | {base}:
        for r in range(1, q + 1):
            for D in itertools.combinations(NEW, r):
                for k in range(1, len(D) + 1):
                    for D1 in itertools.combinations(D, k):
                        rest = [x for x in D if x not in D1]
                        first = T.blocks[0] | frozenset(D1)
                        for blocks in _with_new(T.blocks, rest, first):
                            cells.add(PartitionLabel(blocks))
    return PreimageInstance(base, q, sorted(cells, key=lambda c: (c.p, c)))


def preimage_oracle(base: PartitionLabel, q: int) -> set[PartitionLabel]:
    """Slow generator: filter every ordered partition of every diagonal subset."""
    NEW = [new(c) for c in range(1, q + 1)]
    old_ids = sorted(base.arrangement)
    out = set()
    for r in range(1, len(old_ids) + 1):
        for O in itertools.combinations(old_ids, r):
            for s in range(1, q + 1):
                for D in itertools.combinations(NEW, s):
                    for blocks in ordered_set_partitions(list(O) + list(D)):
                        L = PartitionLabel(blocks)
                        if not any(is_new(x) for x in blocks[0]):
                            continue
                        olds = [frozenset(x for x in b if not is_new(x)) for b in blocks]
                        if not olds[0]:
                            continue
                        restricted = PartitionLabel(tuple(b for b in olds if b))
                        if leq_labels(restricted, base):
                            out.add(L)
    return out


def thmhalf_matching(inst: PreimageInstance, cw: RegularCW | None = None) -> tuple[DiscreteVectorField, RegularCW]:
    """The three-step matching on a preimage instance; returns the field and its complex."""
    if cw is None:
        cw = inst.cw()
    idx = cw.index
    V = DiscreteVectorField()
    canon = sorted(range(len(cw)), key=lambda c: cw.keys[c])
    NEW = set(inst.new_diagonals)
    S1 = inst.base.blocks[0]

    # Step 1: pull d_c out of a mixed block (not the first) into a singleton in front of it
    for c in range(1, inst.q + 1):
        d = new(c)
        earlier = {frozenset([new(j)]) for j in range(1, c)}
        for a in canon:
            if V.is_matched(a):
                continue
            L = cw.keys[a]
            for i in range(1, L.p):
                blk = L.blocks[i]
                if d in blk:
                    rest = blk - {d}
                    if rest and rest not in earlier:
                        B = PartitionLabel(L.blocks[:i] + (frozenset([d]), rest) + L.blocks[i + 1:])
                        b = idx[B]
                        if V.is_matched(b):
                            raise MatchingError(f"step 1 partner {B} already matched")
                        V.add(a, b)
                    break

    # Step 2: split off the old diagonals of the first block beyond S_1
    for a in canon:
        if V.is_matched(a):
            continue
        L = cw.keys[a]
        Q1 = L.blocks[0]
        extra = Q1 - NEW - S1
        if not extra:
            continue
        B = PartitionLabel((Q1 - extra, extra) + L.blocks[1:])
        b = idx.get(B)
        if b is not None and not V.is_matched(b):
            V.add(a, b)

    # Step 3: drop trailing new singletons, smallest index first
    for c in range(1, inst.q + 1):
        tail = frozenset([new(c)])
        for b in canon:
            L = cw.keys[b]
            if V.is_matched(b) or L.p < 2 or L.blocks[-1] != tail:
                continue
            a = idx[L.truncate(L.p - 1)]
            if not V.is_matched(a):
                V.add(a, b)
    return V, cw


def example_gradient_path(inst: PreimageInstance) -> list[PartitionLabel]:
    """The six-cell gradient path for a three-block base and q = 3.

    With ``Q1 = S1 + {d3}``, ``Q2 = S2``, ``Q3 = S3`` it reads
    (Q1, Q2+d2, Q3+d1), (Q1, Q2+d2, {d1}, Q3), (Q1, Q2+d1+d2, Q3),
    (Q1, {d1}, Q2+d2, Q3), (Q1+d1, Q2+d2, Q3), (Q1+d1, {d2}, Q2, Q3).
    """
    if inst.base.p != 3 or inst.q != 3:
        raise ValueError("needs a three-block base and q = 3")
    S1, S2, S3 = inst.base.blocks
    d1, d2, d3 = (frozenset([new(c)]) for c in (1, 2, 3))
    Q1 = S1 | d3
    L = PartitionLabel.of
    return [
        L(Q1, S2 | d2, S3 | d1),
        L(Q1, S2 | d2, d1, S3),
        L(Q1, S2 | d2 | d1, S3),
        L(Q1, d1, S2 | d2, S3),
        L(Q1 | d1, S2 | d2, S3),
        L(Q1 | d1, d2, S2, S3),
    ]


def corner_count(rg, puncture: Hashable) -> int:
    """Number of corners of the face of ``rg`` that holds ``puncture``."""
    return len(rg.faces[rg.punctures[puncture]])
