"""Fibers of the puncture-forgetting projection.

Over a base label ``(S_1, ..., S_r)`` of an arrangement ``A`` the fiber
consists of the labels ``tau`` of the punctured surface with
``pi(tau) = (S_1, ..., S_r)``; such a cell meets the preimage of an interior
point of the base cell in a cell of dimension ``blocks(tau) - r``.

These labels are generated from the blow-up ``F(A)`` by putting the
puncture near one of its cells and adding the new diagonals that become
trivial once the puncture is forgotten:

* 2-cell (face): puncture in the face, nothing added;
* boundary edge: a parallel copy on the interior side, puncture in the bigon;
* corner: a loop in the corner around the puncture;
* diagonal ``d`` in ``S_k``: a parallel copy, puncture in the bigon;
* germ (an end of an edge): the parallel copy plus a loop in the bigon's
  corner at that end.

New diagonals go into some ``S_j`` or into new blocks right after ``S_j``;
of the two copies of a diagonal in ``S_k`` one stays in ``S_k``, the other
goes to a position at or after ``S_k``.  Cells are identified by the
canonical form of the resulting labelled map, and incidences come from the
single-step face rules.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cells import RegularCW
from .labels import PartitionLabel, ordered_set_partitions
from .ribbon import MarkedSurfaceSpec, RibbonError, RibbonGraph, canonical_form, polygon_ribbon

PUNCTURE = "P"


# --- blow-up ---------------------------------------------------------------------------------------

@dataclass
class BlowupComplex:
    cw: RegularCW
    provenance: list[str]  # per cell: germ | diagonal | boundary | corner | face

    def boundary_circles(self) -> int:
        return _boundary_cycles(self.cw)[0]

    def euler_characteristic(self) -> int:
        return self.cw.euler_characteristic()


def blowup(rg: RibbonGraph) -> BlowupComplex:
    """Replace every interior corner by an edge; free vertices become holes."""
    if rg.punctures:
        rg = RibbonGraph(rg.sigma, rg.iota, rg.boundary, rg.vertex_labels)
    for v, c in enumerate(rg.sigma):
        if not c:
            raise RibbonError(f"vertex {v} has no incident diagonal")
    keys: list = []
    dims: list[int] = []
    facets: list[tuple[int, ...]] = []
    prov: list[str] = []
    for h in range(rg.n_darts):
        keys.append(("germ", h))
        dims.append(0)
        facets.append(())
        prov.append("germ")
    edge_cell = {}
    for e, (a, b) in enumerate(rg.iota):
        edge_cell[e] = len(keys)
        keys.append(("edge", e))
        dims.append(1)
        facets.append((a, b))
        prov.append("boundary" if e in rg.boundary else "diagonal")
    corner_cell = {}
    for f in rg.interior_faces:
        for y in rg.faces[f]:
            corner_cell[y] = len(keys)
            keys.append(("corner", y))
            dims.append(1)
            facets.append((rg.s_inv(y), y))
            prov.append("corner")
    for f in rg.interior_faces:
        keys.append(("face", f))
        dims.append(2)
        cells = set()
        for y in rg.faces[f]:
            cells.add(edge_cell[rg.edge_of[y]])
            cells.add(corner_cell[y])
        facets.append(tuple(sorted(cells)))
        prov.append("face")
    return BlowupComplex(RegularCW(dims, facets, keys), prov)


# --- map surgery -----------------------------------------------------------------------------------

def _insert_after(sigma: list[list[int]], v: int, after: int, new: Sequence[int]) -> None:
    c = sigma[v]
    i = c.index(after)
    c[i + 1:i + 1] = list(new)


def _copy(rg: RibbonGraph) -> tuple[list[list[int]], list[tuple[int, int]], dict, dict]:
    return [list(c) for c in rg.sigma], list(rg.iota), dict(rg.dart_labels), dict(rg.edge_colors)


def double_edge(rg: RibbonGraph, x: int) -> tuple[RibbonGraph, int]:
    """Add a copy of edge(x) on the side of face(x); the puncture goes in the new bigon.

    Returns the new map and the new edge id.  The copy's darts inherit the
    labels of the darts they run parallel to.
    """
    sigma, iota, dl, ec = _copy(rg)
    p, q = rg.n_darts, rg.n_darts + 1
    u, ix = rg.vertex_of[x], rg.i(x)
    _insert_after(sigma, u, rg.s_inv(x), [p])
    _insert_after(sigma, rg.vertex_of[ix], ix, [q])
    iota.append((p, q))
    dl[p] = rg.dart_labels.get(x, x)
    dl[q] = rg.dart_labels.get(ix, ix)
    out = RibbonGraph(sigma, iota, rg.boundary, rg.vertex_labels, {}, dl, ec)
    out.punctures = {PUNCTURE: out.face_of[x]}
    return out, len(iota) - 1


def add_loop(rg: RibbonGraph, y: int) -> tuple[RibbonGraph, int]:
    """Add a loop in the corner ``(sigma^-1 y, y)`` enclosing the puncture."""
    sigma, iota, dl, ec = _copy(rg)
    p, q = rg.n_darts, rg.n_darts + 1
    _insert_after(sigma, rg.vertex_of[y], rg.s_inv(y), [p, q])
    iota.append((p, q))
    dl[p] = dl[q] = "loop"
    out = RibbonGraph(sigma, iota, rg.boundary, rg.vertex_labels, {}, dl, ec)
    out.punctures = {PUNCTURE: out.face_of[q]}
    return out, len(iota) - 1


def delete_edge(rg: RibbonGraph, e: int) -> RibbonGraph:
    """Remove edge ``e``; the puncture moves into the merged face."""
    a, b = rg.iota[e]
    gone = {a, b}
    pf = rg.punctures.get(PUNCTURE)
    candidates = []
    if pf is not None:
        candidates = [h for h in rg.faces[pf] if h not in gone]
        if not candidates:
            candidates = [h for h in rg.faces[rg.face_of[a]] + rg.faces[rg.face_of[b]] if h not in gone]
    ren = {}
    for h in range(rg.n_darts):
        if h not in gone:
            ren[h] = len(ren)
    sigma = [[ren[h] for h in c if h not in gone] for c in rg.sigma]
    iota = [(ren[x], ren[y]) for k, (x, y) in enumerate(rg.iota) if k != e]
    eren = {k: k - (k > e) for k in range(rg.n_edges) if k != e}
    out = RibbonGraph(
        sigma,
        iota,
        frozenset(eren[k] for k in rg.boundary if k != e),
        rg.vertex_labels,
        {},
        {ren[h]: v for h, v in rg.dart_labels.items() if h not in gone},
        {eren[k]: v for k, v in rg.edge_colors.items() if k != e},
    )
    if candidates:
        out.punctures = {PUNCTURE: out.face_of[ren[candidates[0]]]}
    return out


# --- fiber cells -------------------------------------------------------------------------------------

@dataclass
class FiberCell:
    rg: RibbonGraph  # edge_colors: diagonal -> 1-based block index
    p: int
    r: int
    origin: str

    @property
    def dim(self) -> int:
        return self.p - self.r

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.p)]
        for e, c in self.rg.edge_colors.items():
            out[c - 1].append(e)
        return [sorted(b) for b in out]

    def key(self) -> bytes:
        return canonical_form(self.rg)

    def with_colors(self, colors: dict, p: int) -> "FiberCell":
        rg = RibbonGraph(self.rg.sigma, self.rg.iota, self.rg.boundary, self.rg.vertex_labels, dict(self.rg.punctures), self.rg.dart_labels, colors)
        return FiberCell(rg, p, self.r, self.origin)

    def facet_cells(self) -> list["FiberCell"]:
        out = []
        colors = self.rg.edge_colors
        for i in range(1, self.p):  # merge blocks i and i+1
            out.append(self.with_colors({e: (c if c <= i else c - 1) for e, c in colors.items()}, self.p - 1))
        if self.p > 1:
            rg = self.rg
            last = sorted((e for e, c in colors.items() if c == self.p), reverse=True)
            for e in last:
                rg = delete_edge(rg, e)
            out.append(FiberCell(rg, self.p - 1, self.r, self.origin))
        return out


def _placements(r: int, base_colors: dict[int, int], items: list[tuple]) -> Iterable[tuple[dict, int]]:
    """Assign slots to new items and expand gap slots into ordered new blocks.

    ``items`` entries are ``("free", e)`` (any slot), or ``("pair", old, new)``
    for two copies of a diagonal in ``S_k``.
    """
    slots_all = [("in", j) for j in range(1, r + 1)] + [("gap", j) for j in range(1, r + 1)]
    per_item: list[list[list[tuple[int, tuple]]]] = []
    for it in items:
        if it[0] == "free":
            per_item.append([[(it[1], s)] for s in slots_all])
        else:
            _, e_old, e_new = it
            k = base_colors[e_old]
            opts = []
            for s in slots_all:
                if s[1] < k or s == ("gap", k - 1):
                    continue
                opts.append([(e_old, ("in", k)), (e_new, s)])
                if s != ("in", k):
                    opts.append([(e_new, ("in", k)), (e_old, s)])
            per_item.append(opts)
    for choice in itertools.product(*per_item):
        slot = {e: s for group in choice for e, s in group}
        gaps: dict[int, list[int]] = defaultdict(list)
        ins: dict[int, list[int]] = defaultdict(list)
        for e, s in slot.items():
            (ins if s[0] == "in" else gaps)[s[1]].append(e)
        gap_parts = [list(ordered_set_partitions(sorted(gaps[j]))) for j in range(1, r + 1)]
        for parts in itertools.product(*gap_parts):
            colors = {}
            idx = 0
            for j in range(1, r + 1):
                idx += 1
                for e, c in base_colors.items():
                    if c == j and e not in slot:
                        colors[e] = idx
                for e in ins[j]:
                    colors[e] = idx
                for blk in parts[j - 1]:
                    idx += 1
                    for e in blk:
                        colors[e] = idx
            yield colors, idx


def _base_map(rg: RibbonGraph, base_colors: dict[int, int]) -> RibbonGraph:
    dl = {h: h for h in range(rg.n_darts)}
    return RibbonGraph(rg.sigma, rg.iota, rg.boundary, rg.vertex_labels, {}, dl, dict(base_colors))


def _r_of(base_colors: dict[int, int], r: int | None) -> int:
    return r if r is not None else max(base_colors.values(), default=1)


def fiber_cells(rg: RibbonGraph, base_colors: dict[int, int], r: int | None = None) -> dict[bytes, FiberCell]:
    """All fiber cells over the base label given as diagonal edge -> block index (1-based).

    ``r`` must be passed when the first block is empty (no edge has colour 1 ... r).
    """
    r = _r_of(base_colors, r)
    if set(base_colors) != set(rg.diagonal_edges()):
        raise RibbonError("base label must colour exactly the diagonals of the map")
    present = set(base_colors.values())
    if any(j not in present for j in range(2, r + 1)):
        raise RibbonError("base label has an empty block after the first")
    M = _base_map(rg, base_colors)
    cells: dict[bytes, FiberCell] = {}

    def add(g: RibbonGraph, items: list[tuple], origin: str) -> None:
        for colors, p in _placements(r, base_colors, items):
            c = FiberCell(g, p, r, origin).with_colors(colors, p)
            cells.setdefault(c.key(), c)

    for f in M.interior_faces:
        g = RibbonGraph(M.sigma, M.iota, M.boundary, M.vertex_labels, {PUNCTURE: f}, M.dart_labels, M.edge_colors)
        add(g, [], "face")
        for y in M.faces[f]:
            g, e_loop = add_loop(M, y)
            add(g, [("free", e_loop)], "corner")
    for e, (a, b) in enumerate(M.iota):
        sides = [b] if e in M.boundary else [a, b]
        for x in sides:
            g, e_new = double_edge(M, x)
            pair = ("free", e_new) if e in M.boundary else ("pair", e, e_new)
            add(g, [pair], "boundary" if e in M.boundary else "diagonal")
            # the two corners of the new bigon: at the tail of x and at its head
            bigon = g.faces[g.puncture_face()]
            for y in bigon:
                g2, e_loop = add_loop(g, y)
                add(g2, [pair, ("free", e_loop)], "germ")
    return cells


@dataclass
class FiberComplex:
    cells: list[FiberCell]
    keys: list[bytes]
    cw: RegularCW

    @property
    def dims(self) -> list[int]:
        return self.cw.dims

    def euler_characteristic(self) -> int:
        return self.cw.euler_characteristic()

    def boundary_subcomplex(self) -> list[list[int]]:
        """Boundary circles as cyclic lists of 1-cells."""
        return _boundary_cycles(self.cw)[1]

    def to_obj(self) -> dict:
        return {
            "cells": [
                {"dim": c.dim, "origin": c.origin, "blocks": c.blocks(), "ribbon": c.rg.to_obj()} for c in self.cells
            ],
            "facets": [list(f) for f in self.cw.facets],
        }


def build_fiber(rg: RibbonGraph, base_colors: dict[int, int], r: int | None = None) -> FiberComplex:
    cell_map = fiber_cells(rg, base_colors, r)
    keys = sorted(cell_map, key=lambda k: (cell_map[k].dim, k))
    cells = [cell_map[k] for k in keys]
    index = {k: i for i, k in enumerate(keys)}
    facets = []
    for c in cells:
        fs = set()
        for f in c.facet_cells():
            i = index.get(f.key())
            if i is not None:
                fs.add(i)
        facets.append(tuple(sorted(fs)))
    cw = RegularCW([c.dim for c in cells], facets, keys)
    return FiberComplex(cells, keys, cw)


def polygon_fiber(n: int, base: PartitionLabel) -> tuple[FiberComplex, RibbonGraph]:
    """Fiber over a label of the plain n-gon (chords as diagonal ids)."""
    chords = sorted(base.arrangement)
    rg = polygon_ribbon(n, chords)
    edge = {c: n + k for k, c in enumerate(chords)}
    colors = {edge[c]: i for i, b in enumerate(base.blocks, start=1) for c in b}
    return build_fiber(rg, colors, base.p), rg


# --- surface checks ----------------------------------------------------------------------------------

def _boundary_cycles(cw: RegularCW) -> tuple[int, list[list[int]], list[int]]:
    """Count boundary circles; also return them and the 0-cells where they fail to be cycles."""
    co = cw.cofacets
    bd_edges = [c for c in range(len(cw)) if cw.dims[c] == 1 and sum(1 for x in co[c] if cw.dims[x] == 2) == 1]
    adj: dict[int, list[int]] = defaultdict(list)
    for e in bd_edges:
        for v in cw.facets[e]:
            adj[v].append(e)
    bad = [v for v, es in adj.items() if len(es) != 2]
    seen: set[int] = set()
    cycles = []
    for e in bd_edges:
        if e in seen:
            continue
        cyc, stack = [], [e]
        seen.add(e)
        while stack:
            x = stack.pop()
            cyc.append(x)
            for v in cw.facets[x]:
                for y in adj[v]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
        cycles.append(cyc)
    return len(cycles), cycles, bad


@dataclass
class SurfaceReport:
    ok: bool
    euler: int
    expected_euler: int | None
    boundary_circles: int
    expected_boundary: int | None
    problems: list[str] = field(default_factory=list)

    def to_obj(self) -> dict:
        return {
            "ok": self.ok,
            "euler": self.euler,
            "expected_euler": self.expected_euler,
            "boundary_circles": self.boundary_circles,
            "expected_boundary": self.expected_boundary,
            "problems": self.problems,
        }


def verify_surface(fc: FiberComplex | RegularCW, spec: MarkedSurfaceSpec | None = None) -> SurfaceReport:
    """Check that a 2-dimensional regular complex is a connected compact surface of the expected type."""
    cw = fc.cw if isinstance(fc, FiberComplex) else fc
    problems = []
    co = cw.cofacets
    if cw.dim > 2:
        problems.append(f"dimension {cw.dim} > 2")
    for c in range(len(cw)):
        if cw.dims[c] == 1:
            if len(cw.facets[c]) != 2:
                problems.append(f"1-cell {c} has {len(cw.facets[c])} end points")
            tops = sum(1 for x in co[c] if cw.dims[x] == 2)
            if tops > 2:
                problems.append(f"1-cell {c} lies in {tops} 2-cells")
    for v in range(len(cw)):
        if cw.dims[v] != 0:
            continue
        # link: nodes are incident 1-cells, arcs are incident 2-cells
        edges = co[v]
        adj: dict[int, list[int]] = {e: [] for e in edges}
        for e in edges:
            for t in co[e]:
                adj[e].append(t)
        by_face: dict[int, list[int]] = defaultdict(list)
        for e, ts in adj.items():
            for t in ts:
                by_face[t].append(e)
        deg: Counter = Counter()
        for t, es in by_face.items():
            if len(es) != 2:
                problems.append(f"2-cell {t} meets 0-cell {v} in {len(es)} edges")
                continue
            deg[es[0]] += 1
            deg[es[1]] += 1
        if not edges or any(deg[e] > 2 for e in edges):
            problems.append(f"link of 0-cell {v} is not an arc or circle")
            continue
        # connectivity of the link
        seen, stack = {edges[0]}, [edges[0]]
        while stack:
            e = stack.pop()
            for t in adj[e]:
                for e2 in by_face[t]:
                    if e2 not in seen:
                        seen.add(e2)
                        stack.append(e2)
        if len(seen) != len(edges):
            problems.append(f"link of 0-cell {v} is disconnected")
    # connectivity of the complex
    if len(cw):
        seen, stack = {0}, [0]
        while stack:
            c = stack.pop()
            for x in list(cw.facets[c]) + co[c]:
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
        if len(seen) != len(cw):
            problems.append("complex is disconnected")
    nb, _, bad = _boundary_cycles(cw)
    if bad:
        problems.append(f"boundary is not a union of circles at 0-cells {sorted(bad)[:5]}")
    chi = cw.euler_characteristic()
    exp_chi = exp_b = None
    if spec is not None:
        exp_chi = spec.euler_blowup()
        exp_b = spec.b + spec.n
        if chi != exp_chi:
            problems.append(f"Euler characteristic {chi}, expected {exp_chi}")
        if nb != exp_b:
            problems.append(f"{nb} boundary circles, expected {exp_b}")
    return SurfaceReport(not problems, chi, exp_chi, nb, exp_b, problems)


# --- polygon oracle ------------------------------------------------------------------------------------

def _side_faces(rg: RibbonGraph, start_face: int, cut_edge: int) -> set[int]:
    """Interior faces reachable from ``start_face`` without crossing ``cut_edge``."""
    seen, stack = {start_face}, [start_face]
    while stack:
        f = stack.pop()
        for h in rg.faces[f]:
            e = rg.edge_of[h]
            if e == cut_edge or e in rg.boundary:
                continue
            g = rg.face_of[rg.i(h)]
            if g not in seen:
                seen.add(g)
                stack.append(g)
    return seen


def cell_to_punctured_label(cell: FiberCell, n: int) -> PartitionLabel:
    """Read a fiber cell over the n-gon as a label of the punctured n-gon (orbit representatives)."""
    rg = cell.rg
    ref_face = rg.face_of[rg.iota[n - 1][1]]  # interior side of edge (n-1, 0)
    pf = rg.puncture_face()
    blocks: list[set] = [set() for _ in range(cell.p)]
    for e, c in rg.edge_colors.items():
        a, b = (rg.vertex_labels[rg.vertex_of[h]] for h in rg.iota[e])
        if a == b:
            rep = (a, a + n)
        else:
            a, b = min(a, b), max(a, b)
            outer = pf in _side_faces(rg, ref_face, e)
            rep = (a, b) if outer else (a, b + n)
        blocks[c - 1].add(rep)
    return PartitionLabel(tuple(frozenset(b) for b in blocks))


def fiber_oracle(n: int, base: PartitionLabel, punctured_labels: Iterable[PartitionLabel]) -> set[PartitionLabel]:
    """Punctured labels projecting onto ``base`` (brute force over a label corpus)."""
    from .forgetful import project_pi

    return {L for L in punctured_labels if project_pi(L, n)[0] == base}
