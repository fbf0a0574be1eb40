"""Finite posets stored by their Hasse diagram.

Order queries go through reachability bitsets (Python ints), computed once
per poset.  Isomorphism testing is colour refinement followed by
backtracking over the cover graph; payloads are ignored unless asked for.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

from .cells import SimplicialComplex


class PosetError(ValueError):
    pass


class Poset:
    """A finite poset with dense integer ids ``0..n-1``.

    ``covers`` holds pairs ``(a, b)`` meaning *a is covered by b*; the set
    must be acyclic and transitively reduced.
    """

    def __init__(self, elements: Sequence[Any], covers: Iterable[tuple[int, int]], check: bool = True):
        self.elements: tuple = tuple(elements)
        self.covers: frozenset[tuple[int, int]] = frozenset((int(a), int(b)) for a, b in covers)
        n = len(self.elements)
        up = [[] for _ in range(n)]
        down = [[] for _ in range(n)]
        for a, b in self.covers:
            if not (0 <= a < n and 0 <= b < n):
                raise PosetError(f"cover ({a}, {b}) refers to an unknown id")
            if a == b:
                raise PosetError(f"self-cover at {a}")
            up[a].append(b)
            down[b].append(a)
        self.up_covers: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(u)) for u in up)
        self.down_covers: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(d)) for d in down)
        self._topo = self._topological_order()
        if check:
            self._check_reduced()

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"Poset(n={len(self)}, covers={len(self.covers)})"

    @classmethod
    def from_relation(cls, elements: Sequence[Any], leq: Callable[[Any, Any], bool]) -> "Poset":
        """Build from an order predicate on payloads (quadratic; small inputs)."""
        n = len(elements)
        below = [0] * n
        for i in range(n):
            for j in range(n):
                if i != j and leq(elements[i], elements[j]):
                    below[j] |= 1 << i
        covers = []
        for b in range(n):
            strict = below[b]
            for a in _bits(strict):
                # a is covered by b unless some c with a < c < b
                if not any((below[c] >> a) & 1 for c in _bits(strict) if c != a):
                    covers.append((a, b))
        return cls(elements, covers)

    def _topological_order(self) -> list[int]:
        n = len(self)
        indeg = [len(d) for d in self.down_covers]
        queue = deque(i for i in range(n) if indeg[i] == 0)
        order = []
        while queue:
            a = queue.popleft()
            order.append(a)
            for b in self.up_covers[a]:
                indeg[b] -= 1
                if indeg[b] == 0:
                    queue.append(b)
        if len(order) != n:
            raise PosetError("cover relation has a cycle")
        return order

    def _check_reduced(self) -> None:
        up = self.up_sets
        for a in range(len(self)):
            ups = self.up_covers[a]
            if len(ups) < 2:
                continue
            for b in ups:
                other = 0
                for c in ups:
                    if c != b:
                        other |= up[c]
                if (other >> b) & 1:
                    raise PosetError(f"cover ({a}, {b}) is implied by other covers")

    @cached_property
    def up_sets(self) -> list[int]:
        """Bitset of ``{b : a <= b}`` for each ``a``."""
        up = [0] * len(self)
        for a in reversed(self._topo):
            bits = 1 << a
            for b in self.up_covers[a]:
                bits |= up[b]
            up[a] = bits
        return up

    @cached_property
    def down_sets(self) -> list[int]:
        down = [0] * len(self)
        for b in self._topo:
            bits = 1 << b
            for a in self.down_covers[b]:
                bits |= down[a]
            down[b] = bits
        return down

    def _check_id(self, a: int) -> None:
        if not (0 <= a < len(self)):
            raise PosetError(f"unknown id {a}")

    def leq(self, a: int, b: int) -> bool:
        self._check_id(a)
        self._check_id(b)
        return bool((self.up_sets[a] >> b) & 1)

    def less(self, a: int, b: int) -> bool:
        return a != b and self.leq(a, b)

    def minimal(self) -> list[int]:
        return [i for i in range(len(self)) if not self.down_covers[i]]

    def maximal(self) -> list[int]:
        return [i for i in range(len(self)) if not self.up_covers[i]]

    @cached_property
    def height(self) -> list[int]:
        """Length of the longest chain ending at each element (minimal -> 0)."""
        h = [0] * len(self)
        for b in self._topo:
            for a in self.down_covers[b]:
                h[b] = max(h[b], h[a] + 1)
        return h

    @cached_property
    def depth(self) -> list[int]:
        d = [0] * len(self)
        for a in reversed(self._topo):
            for b in self.up_covers[a]:
                d[a] = max(d[a], d[b] + 1)
        return d

    def index_of(self, payload: Hashable) -> int:
        if not hasattr(self, "_payload_index"):
            self._payload_index = {e: i for i, e in enumerate(self.elements)}
        return self._payload_index[payload]

    def maximal_chains(self) -> list[tuple[int, ...]]:
        out = []
        for m in self.minimal():
            stack = [(m, (m,))]
            while stack:
                a, chain = stack.pop()
                if not self.up_covers[a]:
                    out.append(chain)
                for b in self.up_covers[a]:
                    stack.append((b, chain + (b,)))
        out.sort()
        return out

    def chain_counts(self) -> list[int]:
        """Number of chains with ``k+1`` elements, for each ``k`` (dynamic programming)."""
        n = len(self)
        ending: list[list[int]] = [[] for _ in range(n)]
        for b in self._topo:
            counts = [1]
            for a in _bits(self.down_sets[b] & ~(1 << b)):
                ca = ending[a]
                if len(counts) < len(ca) + 1:
                    counts.extend([0] * (len(ca) + 1 - len(counts)))
                for k, c in enumerate(ca):
                    counts[k + 1] += c
            ending[b] = counts
        total: list[int] = []
        for counts in ending:
            if len(total) < len(counts):
                total.extend([0] * (len(counts) - len(total)))
            for k, c in enumerate(counts):
                total[k] += c
        return total

    def induced(self, ids: Iterable[int]) -> tuple["Poset", list[int]]:
        """Induced subposet; returns it together with the old id of each new id."""
        keep = sorted(set(ids))
        new_id = {old: i for i, old in enumerate(keep)}
        mask = 0
        for i in keep:
            mask |= 1 << i
        covers = []
        for a in keep:
            above = self.up_sets[a] & mask & ~(1 << a)
            for b in _bits(above):
                if not (self.down_sets[b] & above & ~(1 << b)):
                    covers.append((new_id[a], new_id[b]))
        return Poset([self.elements[i] for i in keep], covers, check=False), keep

    def to_json(self, encode: Callable[[Any], Any] = lambda x: x) -> str:
        return json.dumps(
            {"elements": [encode(e) for e in self.elements], "covers": sorted(map(list, self.covers))},
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str, decode: Callable[[Any], Any] = lambda x: x) -> "Poset":
        data = json.loads(text)
        return cls([decode(e) for e in data["elements"]], [tuple(c) for c in data["covers"]])

    def to_dot(self, label: Callable[[Any], str] = str) -> str:
        lines = ["digraph hasse {", "  rankdir=BT;"]
        by_rank: dict[int, list[int]] = {}
        for i, h in enumerate(self.height):
            by_rank.setdefault(h, []).append(i)
        for i, e in enumerate(self.elements):
            text = label(e).replace('"', '\\"')
            lines.append(f'  n{i} [label="{text}"];')
        for h in sorted(by_rank):
            lines.append("  { rank=same; " + " ".join(f"n{i};" for i in by_rank[h]) + " }")
        for a, b in sorted(self.covers):
            lines.append(f"  n{a} -> n{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _bits(x: int) -> Iterable[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def leq(p: Poset, a: int, b: int) -> bool:
    return p.leq(a, b)


def chain(n: int) -> Poset:
    return Poset(list(range(n)), [(i, i + 1) for i in range(n - 1)])


def antichain(n: int) -> Poset:
    return Poset(list(range(n)), [])


def order_complex(p: Poset) -> SimplicialComplex:
    """Simplicial complex of chains of ``p`` (its barycentric subdivision)."""
    return SimplicialComplex(p.maximal_chains(), vertices=range(len(p)))


def face_poset(K: SimplicialComplex) -> Poset:
    """Poset of non-empty simplices of ``K`` ordered by inclusion."""
    simplices = [s for layer in K.simplices for s in layer]
    idx = {s: i for i, s in enumerate(simplices)}
    covers = []
    for s in simplices:
        if len(s) > 1:
            for i in range(len(s)):
                covers.append((idx[s[:i] + s[i + 1:]], idx[s]))
    return Poset(simplices, covers, check=False)


def graded_f_vector(p: Poset, rank: Mapping[int, int] | Sequence[int]) -> tuple[int, ...]:
    """Element counts per rank value, from the lowest rank to the highest."""
    r = [rank[i] for i in range(len(p))]
    for a, b in p.covers:
        if not r[a] < r[b]:
            raise PosetError(f"rank is not monotone along cover ({a}, {b})")
    if not r:
        return ()
    lo, hi = min(r), max(r)
    counts = Counter(r)
    return tuple(counts.get(k, 0) for k in range(lo, hi + 1))


# ----------------------------------------------------------------- isomorphism


def _refine(posets: Sequence[Poset], payload: bool) -> list[list[int]]:
    n_total = sum(len(p) for p in posets)
    colours: list[list] = []
    for p in posets:
        base = []
        for i in range(len(p)):
            inv = (
                p.height[i],
                p.depth[i],
                len(p.up_covers[i]),
                len(p.down_covers[i]),
                p.up_sets[i].bit_count(),
                p.down_sets[i].bit_count(),
            )
            if payload:
                inv = inv + (repr(p.elements[i]),)
            base.append(inv)
        colours.append(base)
    # relabel into small ints shared across posets
    current = _compress(colours)
    n_classes = len({c for cs in current for c in cs})
    while True:
        sig = []
        for p, cs in zip(posets, current):
            sig.append(
                [
                    (cs[i], tuple(sorted(cs[b] for b in p.up_covers[i])), tuple(sorted(cs[a] for a in p.down_covers[i])))
                    for i in range(len(p))
                ]
            )
        nxt = _compress(sig)
        k = len({c for cs in nxt for c in cs})
        current = nxt
        if k == n_classes or k == n_total:
            return current
        n_classes = k


def _compress(keys: list[list]) -> list[list[int]]:
    table = {k: i for i, k in enumerate(sorted({k for ks in keys for k in ks}))}
    return [[table[k] for k in ks] for ks in keys]


def poset_isomorphism(p: Poset, q: Poset, respect_payload: bool = False) -> dict[int, int] | None:
    """An order isomorphism ``p -> q`` as a dict of ids, or ``None``."""
    if len(p) != len(q) or len(p.covers) != len(q.covers):
        return None
    if len(p) == 0:
        return {}
    cp, cq = _refine([p, q], respect_payload)
    if Counter(cp) != Counter(cq):
        return None
    by_colour: dict[int, list[int]] = {}
    for y, c in enumerate(cq):
        by_colour.setdefault(c, []).append(y)
    class_size = Counter(cp)

    # search order: BFS over the cover graph, each component seeded at its rarest colour
    nbr_p = [set(p.up_covers[i]) | set(p.down_covers[i]) for i in range(len(p))]
    order: list[int] = []
    placed = [False] * len(p)
    for seed in sorted(range(len(p)), key=lambda i: (class_size[cp[i]], cp[i], i)):
        if placed[seed]:
            continue
        placed[seed] = True
        queue = deque([seed])
        while queue:
            a = queue.popleft()
            order.append(a)
            for b in sorted(nbr_p[a], key=lambda i: (class_size[cp[i]], i)):
                if not placed[b]:
                    placed[b] = True
                    queue.append(b)

    up_q = [set(u) for u in q.up_covers]
    down_q = [set(d) for d in q.down_covers]
    fwd: dict[int, int] = {}
    used: set[int] = set()

    def consistent(x: int, y: int) -> bool:
        for b in p.up_covers[x]:
            if b in fwd and fwd[b] not in up_q[y]:
                return False
        for a in p.down_covers[x]:
            if a in fwd and fwd[a] not in down_q[y]:
                return False
        mapped_up = sum(1 for b in p.up_covers[x] if b in fwd)
        mapped_down = sum(1 for a in p.down_covers[x] if a in fwd)
        if sum(1 for b in up_q[y] if b in used) != mapped_up:
            return False
        if sum(1 for a in down_q[y] if a in used) != mapped_down:
            return False
        return True

    stack: list[list[int]] = []
    depth = 0
    candidates = [y for y in by_colour[cp[order[0]]]]
    stack.append(candidates)
    while stack:
        cands = stack[-1]
        x = order[depth]
        if x in fwd:
            used.discard(fwd.pop(x))
        advanced = False
        while cands:
            y = cands.pop()
            if y in used or not consistent(x, y):
                continue
            fwd[x] = y
            used.add(y)
            advanced = True
            break
        if not advanced:
            stack.pop()
            depth -= 1
            continue
        depth += 1
        if depth == len(order):
            return dict(sorted(fwd.items()))
        nx = order[depth]
        stack.append(list(reversed(by_colour[cp[nx]])))
    return None


def is_order_isomorphism(p: Poset, q: Poset, f: Mapping[int, int]) -> bool:
    """Check that ``f`` is a bijection preserving and reflecting covers."""
    if sorted(f) != list(range(len(p))) or sorted(f.values()) != list(range(len(q))):
        return False
    return {(f[a], f[b]) for a, b in p.covers} == set(q.covers)
