"""Ribbon graphs (rotation systems) encoding diagonal arrangements on surfaces.

Darts are ``0..2E-1``.  ``iota[e] = (h, h')`` pairs the two darts of edge
``e``; ``sigma`` lists, per vertex, the darts leaving it in counter-clockwise
order (an empty list is a vertex with no incident edge).  Faces are the
orbits of ``phi = sigma o iota``; the corner between ``sigma^-1(y)`` and
``y`` lies in the face of ``y``.

Boundary components are capped: for a boundary edge ``e`` the dart
``iota[e][0]`` runs along the cap, and every cap face consists of such
darts only.  With caps counted, ``V - E + F = 2 - 2g``.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Hashable, Iterable, Mapping, Sequence

from .config import load_config


class RibbonError(ValueError):
    pass


@dataclass(frozen=True)
class MarkedSurfaceSpec:
    """Genus ``g``, ``b`` boundary circles with ``n_i`` marked points each, ``n`` free points, ``f`` punctures."""

    g: int
    b: int
    n: int
    f: int
    n_i: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "n_i", tuple(self.n_i))
        if min(self.g, self.b, self.n, self.f) < 0:
            raise RibbonError("negative surface parameter")
        if len(self.n_i) != self.b:
            raise RibbonError("need one marked-point count per boundary component")
        if any(x <= 0 for x in self.n_i):
            raise RibbonError("boundary components without marked points are punctures")
        if self.N < 1:
            raise RibbonError("no marked points")
        if self.is_small():
            raise RibbonError(f"excluded small case {self}")

    @property
    def N(self) -> int:
        return self.n + sum(self.n_i)

    def is_small(self, config: Mapping | None = None) -> bool:
        cfg = load_config() if config is None else config
        for entry in cfg["small_cases"]:
            if all(getattr(self, key) == (tuple(v) if key == "n_i" else v) for key, v in entry.items()):
                return True
        return False

    def euler_blowup(self) -> int:
        """Euler characteristic of the surface with punctures removed and a hole per free point."""
        return 2 - 2 * self.g - (self.b + self.n)


@dataclass
class RibbonGraph:
    sigma: list[list[int]]
    iota: list[tuple[int, int]]
    boundary: frozenset = frozenset()
    vertex_labels: dict = field(default_factory=dict)
    punctures: dict = field(default_factory=dict)  # label -> face id
    dart_labels: dict = field(default_factory=dict)  # optional structure for canonical forms
    edge_colors: dict = field(default_factory=dict)

    def __post_init__(self):
        self.sigma = [list(c) for c in self.sigma]
        self.iota = [tuple(p) for p in self.iota]
        self.boundary = frozenset(self.boundary)
        darts = [h for p in self.iota for h in p]
        if sorted(darts) != list(range(2 * len(self.iota))):
            raise RibbonError("iota must pair the darts 0..2E-1")
        if sorted(h for c in self.sigma for h in c) != list(range(2 * len(self.iota))):
            raise RibbonError("sigma must be a permutation of the darts")
        if any(e < 0 or e >= len(self.iota) for e in self.boundary):
            raise RibbonError("unknown boundary edge")
        if not self.vertex_labels:
            self.vertex_labels = {v: v for v in range(len(self.sigma))}
        for lab, fc in self.punctures.items():
            if not 0 <= fc < len(self.faces):
                raise RibbonError(f"puncture {lab!r} assigned to unknown face {fc}")
            if fc in self.cap_faces:
                raise RibbonError(f"puncture {lab!r} sits on a boundary cap")

    # basic maps

    @property
    def n_darts(self) -> int:
        return 2 * len(self.iota)

    @property
    def n_edges(self) -> int:
        return len(self.iota)

    @cached_property
    def _next(self) -> list[int]:
        nxt = [0] * self.n_darts
        for c in self.sigma:
            for i, h in enumerate(c):
                nxt[h] = c[(i + 1) % len(c)]
        return nxt

    @cached_property
    def _prev(self) -> list[int]:
        prv = [0] * self.n_darts
        for h, s in enumerate(self._next):
            prv[s] = h
        return prv

    @cached_property
    def _inv(self) -> list[int]:
        out = [0] * self.n_darts
        for a, b in self.iota:
            out[a], out[b] = b, a
        return out

    @cached_property
    def edge_of(self) -> list[int]:
        out = [0] * self.n_darts
        for e, (a, b) in enumerate(self.iota):
            out[a] = out[b] = e
        return out

    @cached_property
    def vertex_of(self) -> list[int]:
        out = [0] * self.n_darts
        for v, c in enumerate(self.sigma):
            for h in c:
                out[h] = v
        return out

    def s(self, h: int) -> int:
        return self._next[h]

    def s_inv(self, h: int) -> int:
        return self._prev[h]

    def i(self, h: int) -> int:
        return self._inv[h]

    def phi(self, h: int) -> int:
        return self._next[self._inv[h]]

    def head(self, h: int) -> int:
        return self.vertex_of[self._inv[h]]

    @cached_property
    def faces(self) -> list[list[int]]:
        seen = [False] * self.n_darts
        out = []
        for h in range(self.n_darts):
            if seen[h]:
                continue
            orbit = []
            x = h
            while not seen[x]:
                seen[x] = True
                orbit.append(x)
                x = self.phi(x)
            out.append(orbit)
        return out

    @cached_property
    def face_of(self) -> list[int]:
        out = [0] * self.n_darts
        for f, orbit in enumerate(self.faces):
            for h in orbit:
                out[h] = f
        return out

    @cached_property
    def cap_darts(self) -> frozenset:
        return frozenset(self.iota[e][0] for e in self.boundary)

    @cached_property
    def cap_faces(self) -> frozenset:
        caps = set()
        for f, orbit in enumerate(self.faces):
            inside = [h in self.cap_darts for h in orbit]
            if any(inside):
                if not all(inside):
                    raise RibbonError(f"face {f} mixes boundary caps with interior corners")
                caps.add(f)
        return frozenset(caps)

    @property
    def interior_faces(self) -> list[int]:
        return [f for f in range(len(self.faces)) if f not in self.cap_faces]

    def puncture_count(self, face: int) -> int:
        return sum(1 for fc in self.punctures.values() if fc == face)

    def puncture_face(self, label: Hashable | None = None) -> int:
        if label is None:
            if len(self.punctures) != 1:
                raise RibbonError("ambiguous puncture")
            return next(iter(self.punctures.values()))
        return self.punctures[label]

    def diagonal_edges(self) -> list[int]:
        return [e for e in range(self.n_edges) if e not in self.boundary]

    def free_vertices(self) -> list[int]:
        on_boundary = {self.vertex_of[h] for e in self.boundary for h in self.iota[e]}
        return [v for v in range(len(self.sigma)) if v not in on_boundary]

    def components(self) -> list[set[int]]:
        """Vertex sets of connected components."""
        parent = list(range(len(self.sigma)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.iota:
            ra, rb = find(self.vertex_of[a]), find(self.vertex_of[b])
            parent[ra] = rb
        groups: dict[int, set[int]] = {}
        for v in range(len(self.sigma)):
            groups.setdefault(find(v), set()).add(v)
        return list(groups.values())

    # serialization

    def to_obj(self) -> dict:
        obj = {
            "sigma": self.sigma,
            "iota": [list(p) for p in self.iota],
            "boundary": sorted(self.boundary),
            "vertex_labels": {str(k): v for k, v in sorted(self.vertex_labels.items())},
            "punctures": {str(k): v for k, v in sorted(self.punctures.items(), key=lambda kv: str(kv[0]))},
        }
        if self.dart_labels:
            obj["dart_labels"] = {str(k): v for k, v in sorted(self.dart_labels.items())}
        if self.edge_colors:
            obj["edge_colors"] = {str(k): v for k, v in sorted(self.edge_colors.items())}
        return obj

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), sort_keys=True)

    @classmethod
    def from_obj(cls, obj: Mapping[str, Any]) -> "RibbonGraph":
        return cls(
            sigma=obj["sigma"],
            iota=[tuple(p) for p in obj["iota"]],
            boundary=frozenset(obj.get("boundary", ())),
            vertex_labels={int(k): v for k, v in obj.get("vertex_labels", {}).items()},
            punctures=dict(obj.get("punctures", {})),
            dart_labels={int(k): v for k, v in obj.get("dart_labels", {}).items()},
            edge_colors={int(k): v for k, v in obj.get("edge_colors", {}).items()},
        )

    @classmethod
    def from_json(cls, text: str) -> "RibbonGraph":
        return cls.from_obj(json.loads(text))

    def relabel_darts(self, perm: Sequence[int]) -> "RibbonGraph":
        """Same map with dart ``h`` renamed ``perm[h]`` (edge ids follow the darts' pairs)."""
        old_faces = self.faces
        rg = RibbonGraph(
            sigma=[[perm[h] for h in c] for c in self.sigma],
            iota=[(perm[a], perm[b]) for a, b in self.iota],
            boundary=self.boundary,
            vertex_labels=dict(self.vertex_labels),
            dart_labels={perm[h]: v for h, v in self.dart_labels.items()},
            edge_colors=dict(self.edge_colors),
        )
        rename = {f: rg.face_of[perm[orbit[0]]] for f, orbit in enumerate(old_faces)}
        rg.punctures = {k: rename[f] for k, f in self.punctures.items()}
        return rg


# --- validation ----------------------------------------------------------------------------------

@dataclass
class AdmissibilityReport:
    ok: bool
    violations: list[tuple[str, str]]
    face_punctures: dict[int, list]

    def to_obj(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [list(v) for v in self.violations],
            "face_punctures": {str(k): v for k, v in sorted(self.face_punctures.items())},
        }


def genus_and_faces(rg: RibbonGraph, spec: MarkedSurfaceSpec | None = None) -> tuple[int, int, int]:
    """``(genus, interior face count, boundary count)`` of a connected map."""
    if len(rg.components()) != 1:
        raise RibbonError("ribbon graph is not connected")
    V, E, F = len(rg.sigma), rg.n_edges, len(rg.faces)
    chi = V - E + F
    if chi % 2 or chi > 2:
        raise RibbonError(f"impossible Euler characteristic {chi}")
    g = (2 - chi) // 2
    b = len(rg.cap_faces)
    out = (g, F - b, b)
    if spec is not None and (spec.g, spec.b) != (g, b):
        raise RibbonError(f"map has genus {g} and {b} boundary circles, spec says {spec.g} and {spec.b}")
    return out


def validate(rg: RibbonGraph, spec: MarkedSurfaceSpec | None = None) -> AdmissibilityReport:
    """Admissibility of the arrangement carried by ``rg``."""
    bad: list[tuple[str, str]] = []
    face_punctures: dict[int, list] = {f: [] for f in rg.interior_faces}
    for lab, f in sorted(rg.punctures.items(), key=lambda kv: str(kv[0])):
        face_punctures[f].append(lab)

    for v, c in enumerate(rg.sigma):
        if not c:
            bad.append(("free vertex covered", f"vertex {rg.vertex_labels.get(v, v)} has no incident diagonal"))
    for f in rg.interior_faces:
        darts = rg.faces[f]
        if face_punctures[f]:
            continue
        edges = [rg.edge_of[h] for h in darts]
        if len(darts) == 1:
            bad.append(("non-contractible", f"diagonal {edges[0]} bounds an unpunctured monogon (face {f})"))
        elif len(darts) == 2:
            diag = [e for e in edges if e not in rg.boundary]
            if len(diag) == 2 and diag[0] != diag[1]:
                bad.append(("not homotopic", f"diagonals {diag[0]} and {diag[1]} bound an unpunctured bigon (face {f})"))
            elif len(diag) == 1:
                bd = next(e for e in edges if e in rg.boundary)
                bad.append(("not homotopic to an edge", f"diagonal {diag[0]} is parallel to boundary edge {bd} (face {f})"))
            elif not diag:
                bad.append(("small", f"face {f} is an unpunctured bigon of boundary edges"))
    if spec is not None:
        try:
            g, _, b = genus_and_faces(rg, spec)
        except RibbonError as exc:
            bad.append(("spec", str(exc)))
        else:
            caps = sorted(len(rg.faces[f]) for f in rg.cap_faces)
            if caps != sorted(spec.n_i):
                bad.append(("spec", f"boundary marked points {caps} differ from {sorted(spec.n_i)}"))
            if len(rg.free_vertices()) != spec.n:
                bad.append(("spec", f"{len(rg.free_vertices())} free vertices, spec says {spec.n}"))
            if len(rg.punctures) != spec.f:
                bad.append(("spec", f"{len(rg.punctures)} punctures, spec says {spec.f}"))
    return AdmissibilityReport(not bad, bad, face_punctures)


# --- canonical forms -------------------------------------------------------------------------------

def _dart_features(rg: RibbonGraph, face_tags: list) -> list[tuple]:
    out = []
    for h in range(rg.n_darts):
        e = rg.edge_of[h]
        out.append((
            repr(rg.vertex_labels.get(rg.vertex_of[h])),
            int(e in rg.boundary),
            int(h in rg.cap_darts),
            repr(rg.dart_labels.get(h)),
            repr(rg.edge_colors.get(e)),
            face_tags[rg.face_of[h]],
        ))
    return out


def _component_code(rg: RibbonGraph, start: int, feats: list[tuple]) -> tuple:
    num = {start: 0}
    order = [start]
    q = deque([start])
    while q:
        h = q.popleft()
        for x in (rg.s(h), rg.i(h)):
            if x not in num:
                num[x] = len(order)
                order.append(x)
                q.append(x)
    return tuple(feats[h] + (num[rg.s(h)], num[rg.i(h)]) for h in order)


def canonical_form(rg: RibbonGraph) -> bytes:
    """Label-respecting canonical encoding; equal iff the maps are isomorphic.

    The code of a component is the least breadth-first traversal code over
    all starting darts.  Each code opens with the start dart's own labels,
    so only darts with the least labels need to be tried.
    """
    face_tags = [repr(sorted(map(repr, (k for k, f in rg.punctures.items() if f == fc)))) for fc in range(len(rg.faces))]
    feats = _dart_features(rg, face_tags)
    comp_codes = []
    for comp in rg.components():
        darts = [h for v in comp for h in rg.sigma[v]]
        if not darts:
            comp_codes.append(("isolated", repr(rg.vertex_labels.get(next(iter(comp))))))
            continue
        least = min(feats[h] for h in darts)
        comp_codes.append(min(_component_code(rg, h, feats) for h in darts if feats[h] == least))
    comp_codes.sort(key=repr)
    return json.dumps(comp_codes).encode()


# --- constructors --------------------------------------------------------------------------------

def polygon_ribbon(
    n: int,
    chords: Iterable[tuple[int, int]] = (),
    puncture: Hashable | None = None,
    puncture_dart: int | None = None,
) -> RibbonGraph:
    """The n-gon with the given chords.

    Edge ``i < n`` is the boundary edge ``(i, i+1)`` with cap dart ``2i``
    running ``i -> i+1``; chord edges follow in sorted order, dart ``2e``
    leaving the smaller endpoint.  The puncture, if any, goes in the face
    of ``puncture_dart`` (default: the face right of the first boundary edge).
    """
    chords = sorted({(min(c), max(c)) for c in chords})
    iota = [(2 * e, 2 * e + 1) for e in range(n + len(chords))]
    out: list[list[tuple[int, int]]] = [[] for _ in range(n)]  # (offset, dart)
    for i in range(n):
        j = (i + 1) % n
        out[i].append((1, 2 * i))
        out[j].append((n - 1, 2 * i + 1))
    for k, (a, b) in enumerate(chords):
        e = n + k
        out[a].append(((b - a) % n, 2 * e))
        out[b].append(((a - b) % n, 2 * e + 1))
    sigma = [[h for _, h in sorted(c)] for c in out]
    rg = RibbonGraph(sigma, iota, boundary=frozenset(range(n)))
    if puncture is not None:
        h = 1 if puncture_dart is None else puncture_dart
        rg.punctures = {puncture: rg.face_of[h]}
    return rg


def polygon_chord_edges(n: int, chords: Iterable[tuple[int, int]]) -> dict[tuple[int, int], int]:
    """Edge id of each chord in :func:`polygon_ribbon`."""
    return {c: n + k for k, c in enumerate(sorted({(min(c), max(c)) for c in chords}))}


def one_vertex_torus(free: bool = True) -> RibbonGraph:
    """One vertex, two loops, rotation ``(0 1 2 3)`` with ``iota = (0 2)(1 3)``: a torus square."""
    return RibbonGraph([[0, 1, 2, 3]], [(0, 2), (1, 3)], vertex_labels={0: "x"})


def faces_with_corner_counts(rg: RibbonGraph, v: int) -> dict[int, int]:
    """Number of corners at vertex ``v`` in every interior face."""
    counts: Counter = Counter()
    for h in rg.sigma[v]:
        counts[rg.face_of[h]] += 1
    return {f: counts[f] for f in rg.interior_faces}
