"""Non-crossing chord sets on polygons and their arrangement posets.

Three flavours are enumerated exhaustively:

* plain n-gon: every non-crossing set of diagonals, reverse inclusion;
* once-punctured n-gon, through its branched double cover, a 2n-gon with
  central symmetry ``i -> i + n``.  An orbit of size one (a diameter
  ``{i, i+n}``) is a loop at ``i`` around the puncture;
* axis-symmetric 2k-gon with reflection ``i -> 2k-1-i`` whose axis
  passes through edge midpoints.

Arrangements are ordered by reverse inclusion, so the empty arrangement
is the top element.  Each arrangement exposes ``diagonals``: chords for
the plain and axial cases, orbit representatives for the punctured case.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .poset import Poset

Chord = tuple[int, int]
NONE, CENTRAL, AXIAL = "none", "central", "axial"


class ChordError(ValueError):
    pass


def chord(i: int, j: int) -> Chord:
    return (i, j) if i < j else (j, i)


def adjacent(N: int, i: int, j: int) -> bool:
    return (i - j) % N in (1, N - 1)


def crosses(c1: Chord, c2: Chord) -> bool:
    """Strict interleaving of four distinct endpoints around the cycle."""
    a, b = c1
    c, d = c2
    if len({a, b, c, d}) < 4:
        return False
    return (a < c < b) != (a < d < b)


def all_diagonals(N: int) -> list[Chord]:
    return [(i, j) for i in range(N) for j in range(i + 2, N) if not (i == 0 and j == N - 1)]


def involution(N: int, symmetry: str) -> Callable[[int], int]:
    if symmetry == CENTRAL:
        if N % 2:
            raise ChordError("central symmetry needs an even polygon")
        return lambda i: (i + N // 2) % N
    if symmetry == AXIAL:
        if N % 2:
            raise ChordError("the axial reflection needs an even polygon")
        return lambda i: (N - 1 - i) % N
    return lambda i: i


def image(c: Chord, inv: Callable[[int], int]) -> Chord:
    return chord(inv(c[0]), inv(c[1]))


@dataclass(frozen=True)
class ChordSet:
    N: int
    chords: frozenset
    symmetry: str = NONE

    def __post_init__(self):
        chords = frozenset(chord(*c) for c in self.chords)
        object.__setattr__(self, "chords", chords)
        if self.symmetry not in (NONE, CENTRAL, AXIAL):
            raise ChordError(f"unknown symmetry {self.symmetry!r}")
        for i, j in chords:
            if not (0 <= i < self.N and 0 <= j < self.N) or i == j:
                raise ChordError(f"bad chord {(i, j)}")
            if adjacent(self.N, i, j):
                raise ChordError(f"chord {(i, j)} joins adjacent vertices")
        for c1, c2 in itertools.combinations(sorted(chords), 2):
            if crosses(c1, c2):
                raise ChordError(f"chords {c1} and {c2} cross")
        if self.symmetry != NONE:
            inv = involution(self.N, self.symmetry)
            for c in chords:
                if image(c, inv) not in chords:
                    raise ChordError(f"chord set not invariant: image of {c} missing")

    @property
    def inv(self) -> Callable[[int], int]:
        return involution(self.N, self.symmetry)

    @property
    def diagonals(self) -> frozenset:
        return self.chords

    def orbits(self) -> list[frozenset]:
        seen, out = set(), []
        for c in sorted(self.chords):
            if c not in seen:
                o = frozenset({c, image(c, self.inv)})
                seen |= o
                out.append(o)
        return out

    def sort_key(self) -> tuple:
        return (len(self.chords), tuple(sorted(self.chords)))

    def __lt__(self, other: "ChordSet") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        body = ",".join(f"{i}-{j}" for i, j in sorted(self.chords))
        return f"{{{body}}}"

    def to_obj(self) -> dict:
        return {"N": self.N, "symmetry": self.symmetry, "chords": [list(c) for c in sorted(self.chords)]}

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), sort_keys=True)

    @classmethod
    def from_obj(cls, obj: dict) -> "ChordSet":
        return cls(obj["N"], frozenset(tuple(c) for c in obj["chords"]), obj.get("symmetry", NONE))


def orbit_rep(c: Chord, inv: Callable[[int], int]) -> Chord:
    return min(c, image(c, inv))


@dataclass(frozen=True)
class PuncturedPolygonArrangement:
    """Arrangement on a once-punctured n-gon, stored as its centrally symmetric double."""

    n: int
    doubled: ChordSet

    def __post_init__(self):
        if self.doubled.N != 2 * self.n or self.doubled.symmetry != CENTRAL:
            raise ChordError("doubled chord set must be centrally symmetric on 2n vertices")

    @classmethod
    def from_reps(cls, n: int, reps: Iterable[Chord]) -> "PuncturedPolygonArrangement":
        inv = involution(2 * n, CENTRAL)
        chords = set()
        for c in reps:
            c = chord(*c)
            chords |= {c, image(c, inv)}
        return cls(n, ChordSet(2 * n, frozenset(chords), CENTRAL))

    @cached_property
    def diagonals(self) -> frozenset:
        inv = self.doubled.inv
        return frozenset(orbit_rep(c, inv) for c in self.doubled.chords)

    def kind(self, rep: Chord) -> str:
        return diagonal_kind(self.n, rep)

    def arcs(self) -> list[tuple[int, int, str]]:
        """Diagonals on the punctured n-gon as ``(a, b, kind)``."""
        return [(a % self.n, b % self.n, self.kind((a, b))) for a, b in sorted(self.diagonals)]

    def sort_key(self) -> tuple:
        return (len(self.diagonals), tuple(sorted(self.diagonals)))

    def __lt__(self, other: "PuncturedPolygonArrangement") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return "{" + ",".join(f"{a}-{b}:{k}" for a, b, k in self.arcs()) + "}"

    def to_obj(self) -> dict:
        return {"n": self.n, "diagonals": [list(c) for c in sorted(self.diagonals)], "arcs": [list(a) for a in self.arcs()]}


def diagonal_kind(n: int, rep: Chord) -> str:
    """``loop`` (embraces the puncture), ``outer`` or ``inner``.

    The cut of the double cover runs from the puncture to edge (n-1, 0).
    For ``a < b`` an ``outer`` diagonal leaves the puncture on the side of
    that edge; an ``inner`` one has it on the side of the arc ``a..b``.
    """
    a, b = rep
    if b == a + n:
        return "loop"
    return "outer" if b < n else "inner"


def punctured_diagonal_reps(n: int) -> list[Chord]:
    """Orbit representatives of all diagonals of the punctured n-gon."""
    N = 2 * n
    inv = involution(N, CENTRAL)
    return sorted({orbit_rep(c, inv) for c in all_diagonals(N)})


def _symmetric_orbits(N: int, symmetry: str) -> list[frozenset]:
    """Orbits of diagonals that do not cross their own image."""
    inv = involution(N, symmetry)
    seen, out = set(), []
    for c in all_diagonals(N):
        if c in seen:
            continue
        o = frozenset({c, image(c, inv)})
        seen |= o
        if len(o) == 2 and crosses(*sorted(o)):
            continue
        out.append(o)
    return out


def _orbit_conflict(o1: frozenset, o2: frozenset) -> bool:
    return any(crosses(a, b) for a in o1 for b in o2)


def independent_sets(items: Sequence, conflict: Callable) -> list[tuple[int, ...]]:
    """All conflict-free index subsets (backtracking, items in order)."""
    m = len(items)
    bad = [0] * m
    for i, j in itertools.combinations(range(m), 2):
        if conflict(items[i], items[j]):
            bad[i] |= 1 << j
            bad[j] |= 1 << i
    out: list[tuple[int, ...]] = []

    def rec(start: int, chosen: tuple[int, ...], forbidden: int) -> None:
        out.append(chosen)
        for i in range(start, m):
            if not (forbidden >> i) & 1:
                rec(i + 1, chosen + (i,), forbidden | bad[i])

    rec(0, (), 0)
    return out


def _reverse_inclusion_poset(elements: list, sets: list[frozenset], units: Callable) -> Poset:
    """Covers ``(A, A - u)`` for every removable unit ``u`` of ``A``."""
    index = {s: i for i, s in enumerate(sets)}
    covers = []
    for i, s in enumerate(sets):
        for u in units(s):
            covers.append((i, index[s - u]))
    return Poset(elements, covers, check=False)


def enumerate_plain(n: int) -> Poset:
    """Non-crossing diagonal sets of the n-gon by reverse inclusion."""
    if n < 3:
        raise ChordError("need n >= 3")
    diags = all_diagonals(n)
    subsets = independent_sets(diags, crosses)
    elems = sorted(ChordSet(n, frozenset(diags[i] for i in s)) for s in subsets)
    sets = [e.chords for e in elems]
    return _reverse_inclusion_poset(elems, sets, lambda s: (frozenset([c]) for c in s))


def enumerate_punctured(n: int) -> Poset:
    """Arrangements of the once-punctured n-gon, via centrally symmetric 2n-gon sets."""
    if n < 2:
        raise ChordError("need n >= 2")
    orbits = _symmetric_orbits(2 * n, CENTRAL)
    subsets = independent_sets(orbits, _orbit_conflict)
    elems = sorted(
        PuncturedPolygonArrangement(n, ChordSet(2 * n, frozenset().union(*(orbits[i] for i in s)), CENTRAL))
        for s in subsets
    )
    sets = [e.diagonals for e in elems]
    return _reverse_inclusion_poset(elems, sets, lambda s: (frozenset([c]) for c in s))


def enumerate_axis_symmetric(k: int) -> Poset:
    """Reflection-invariant non-crossing sets of the 2k-gon (axis through edge midpoints)."""
    if k < 2:
        raise ChordError("need k >= 2")
    N = 2 * k
    orbits = _symmetric_orbits(N, AXIAL)
    subsets = independent_sets(orbits, _orbit_conflict)
    elems = sorted(ChordSet(N, frozenset().union(*(orbits[i] for i in s)), AXIAL) for s in subsets)
    sets = [e.chords for e in elems]
    inv = involution(N, AXIAL)
    return _reverse_inclusion_poset(elems, sets, lambda s: {frozenset({c, image(c, inv)}) for c in s})


def plain_rank(p: Poset) -> list[int]:
    """``n - 3 - |A|`` for each element of a plain poset."""
    return [e.N - 3 - len(e.chords) for e in p.elements]


def punctured_rank(p: Poset) -> list[int]:
    return [(e.n - 1) - len(e.diagonals) for e in p.elements]


def axial_rank(p: Poset) -> list[int]:
    return [e.N // 2 - 2 - len(e.orbits()) for e in p.elements]


# --- folding -------------------------------------------------------------------------------------

def fold_chord_axial(k: int, c: Chord) -> Chord:
    """Image in the (k+1)-gon (new vertex ``v = k``) of an axial orbit containing ``c``."""
    i, j = c
    if j == 2 * k - 1 - i:
        return (min(i, j), k)
    if i < k and j < k:
        return (i, j)
    r = (2 * k - 1 - j, 2 * k - 1 - i)
    if r[0] < k and r[1] < k:
        return chord(*r)
    raise ChordError(f"chord {c} crosses the axis without being self-symmetric")


def unfold_chord_axial(k: int, c: Chord) -> frozenset:
    i, j = c
    if j == k:
        return frozenset([(i, 2 * k - 1 - i)])
    return frozenset({(i, j), chord(2 * k - 1 - j, 2 * k - 1 - i)})


def fold(cs: ChordSet) -> ChordSet | PuncturedPolygonArrangement:
    """Cut a symmetric polygon along the axis (or undo the double cover)."""
    if cs.symmetry == AXIAL:
        k = cs.N // 2
        return ChordSet(k + 1, frozenset(fold_chord_axial(k, c) for c in cs.chords))
    if cs.symmetry == CENTRAL:
        return PuncturedPolygonArrangement(cs.N // 2, cs)
    raise ChordError("fold needs a symmetric chord set")


def unfold(x: ChordSet | PuncturedPolygonArrangement, k: int | None = None) -> ChordSet:
    """Inverse of :func:`fold`; a plain (k+1)-gon set is read with ``v = k``."""
    if isinstance(x, PuncturedPolygonArrangement):
        return x.doubled
    if x.symmetry != NONE:
        raise ChordError("unfold needs a plain chord set or a punctured arrangement")
    k = x.N - 1 if k is None else k
    if x.N != k + 1:
        raise ChordError("polygon size does not match k")
    chords: set = set()
    for c in x.chords:
        chords |= unfold_chord_axial(k, c)
    return ChordSet(2 * k, frozenset(chords), AXIAL)


# --- independent oracles ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def catalan(m: int) -> int:
    """Catalan numbers by the convolution recursion."""
    if m == 0:
        return 1
    return sum(catalan(i) * catalan(m - 1 - i) for i in range(m))


def brute_force_f_vector(items: Sequence, conflict: Callable) -> list[int]:
    """Counts of conflict-free subsets by size, filtering all 2^m subsets at once."""
    m = len(items)
    if m > 24:
        raise ValueError("too many items for the subset filter")
    masks = np.arange(1 << m, dtype=np.int64)
    ok = np.ones(1 << m, dtype=bool)
    for i, j in itertools.combinations(range(m), 2):
        if conflict(items[i], items[j]):
            ok &= ((masks >> i) & (masks >> j) & 1) == 0
    sizes = np.zeros(1 << m, dtype=np.int64)
    for i in range(m):
        sizes += (masks >> i) & 1
    counts = np.bincount(sizes[ok], minlength=m + 1)
    return [int(x) for x in counts]


def plain_f_vector_oracle(n: int) -> tuple[int, ...]:
    """Elements per rank ``n - 3 - |A|``, low to high, from the subset filter."""
    by_size = brute_force_f_vector(all_diagonals(n), crosses)
    top = n - 3
    return tuple(by_size[top - r] if top - r < len(by_size) else 0 for r in range(top + 1))


def punctured_f_vector_oracle(n: int) -> tuple[int, ...]:
    inv = involution(2 * n, CENTRAL)
    orbits = [frozenset({c, image(c, inv)}) for c in punctured_diagonal_reps(n)]
    by_size = brute_force_f_vector(orbits, _orbit_conflict)
    top = n - 1
    return tuple(by_size[top - r] if top - r < len(by_size) else 0 for r in range(top + 1))
