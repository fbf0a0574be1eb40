"""Maps between label complexes.

* :func:`project_pi` forgets the puncture of a once-punctured n-gon;
* :func:`half_surgery_pi1` cuts an axis-symmetric 2k-gon along its axis
  and contracts the cut to a new vertex ``v = k`` of a (k+1)-gon;
* :func:`puncture_v_pi2` deletes the diagonals at ``v`` and turns ``v``
  into a puncture of the k-gon.

An emptied first block is kept as the empty set: the result is then the
chain through the top cell (the empty arrangement), which keeps both maps
monotone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable

from .labels import LabelError, PartitionLabel
from .polygon import (
    AXIAL,
    ChordError,
    adjacent,
    chord,
    diagonal_kind,
    fold_chord_axial,
    image,
    involution,
    unfold_chord_axial,
)
from .ribbon import RibbonGraph, faces_with_corner_counts, polygon_ribbon


@dataclass
class ProjectionTrace:
    dropped_contractible: list = field(default_factory=list)
    dropped_edge_homotopic: list = field(default_factory=list)
    dedup_groups: list[tuple[list, Hashable]] = field(default_factory=list)  # (members, survivor)
    removed_empty_blocks: list[int] = field(default_factory=list)  # 1-based indices
    survivors: dict = field(default_factory=dict)  # input id -> chord of the n-gon

    def accounts_for(self, label: PartitionLabel) -> bool:
        """Every diagonal of ``label`` is survived, dropped or deduplicated exactly once."""
        seen: list = list(self.survivors)
        seen += self.dropped_contractible + self.dropped_edge_homotopic
        for members, keep in self.dedup_groups:
            seen += [m for m in members if m != keep]
        return len(seen) == len(set(seen)) and set(seen) == set(label.arrangement)

    @property
    def is_empty(self) -> bool:
        return not (self.dropped_contractible or self.dropped_edge_homotopic or self.dedup_groups or self.removed_empty_blocks)

    def to_obj(self) -> dict:
        return {
            "dropped_contractible": [list(x) for x in sorted(self.dropped_contractible)],
            "dropped_edge_homotopic": [list(x) for x in sorted(self.dropped_edge_homotopic)],
            "dedup_groups": [
                {"members": [list(m) for m in sorted(g)], "survivor": list(s)} for g, s in self.dedup_groups
            ],
            "removed_empty_blocks": self.removed_empty_blocks,
        }


def _drop_empty_blocks(blocks: list[frozenset]) -> tuple[PartitionLabel, list[int]]:
    kept = [blocks[0]]
    removed = []
    for i, b in enumerate(blocks[1:], start=2):
        if b:
            kept.append(b)
        else:
            removed.append(i)
    return PartitionLabel(tuple(kept)), removed


def project_pi(label: PartitionLabel, n: int, puncture: Hashable | None = None) -> tuple[PartitionLabel, ProjectionTrace]:
    """Forget the puncture of a label over the punctured n-gon (orbit-representative ids).

    ``puncture`` is accepted for interface symmetry; only one puncture exists.
    """
    trace = ProjectionTrace()
    block_of = {d: i for i, b in enumerate(label.blocks) for d in b}
    groups: dict[tuple[int, int], list] = {}
    for d in sorted(label.arrangement):
        a, b = d
        if not (0 <= a < 2 * n and 0 <= b < 2 * n):
            raise LabelError(f"diagonal {d} is not a punctured {n}-gon diagonal")
        if diagonal_kind(n, d) == "loop":
            trace.dropped_contractible.append(d)
            continue
        img = chord(a % n, b % n)
        if adjacent(n, *img):
            trace.dropped_edge_homotopic.append(d)
            continue
        groups.setdefault(img, []).append(d)
    blocks: list[set] = [set() for _ in label.blocks]
    for img, members in sorted(groups.items()):
        keep = min(members, key=lambda d: (block_of[d], d))
        if len(members) > 1:
            trace.dedup_groups.append((members, keep))
        trace.survivors[keep] = img
        blocks[block_of[keep]].add(img)
    out, removed = _drop_empty_blocks([frozenset(b) for b in blocks])
    trace.removed_empty_blocks = removed
    return out, trace


def half_surgery_pi1(label: PartitionLabel, k: int) -> PartitionLabel:
    """Fold a label over the axis-symmetric 2k-gon to the (k+1)-gon with ``v = k``."""
    inv = involution(2 * k, AXIAL)
    blocks = []
    for i, b in enumerate(label.blocks, start=1):
        if any(image(c, inv) not in b for c in b):
            raise LabelError(f"block {i} is not invariant under the reflection")
        try:
            blocks.append(frozenset(fold_chord_axial(k, c) for c in b))
        except ChordError as exc:
            raise LabelError(str(exc)) from exc
    return PartitionLabel(tuple(blocks))


def unfold_label(label: PartitionLabel, k: int) -> PartitionLabel:
    """Inverse of :func:`half_surgery_pi1`."""
    return PartitionLabel(tuple(frozenset().union(*(unfold_chord_axial(k, c) for c in b)) for b in label.blocks))


def in_image_pi1_ribbon(rg: RibbonGraph, v: int) -> bool:
    """No interior face of ``rg`` has more than one corner at ``v``."""
    return all(c <= 1 for c in faces_with_corner_counts(rg, v).values())


def in_image_pi1(label: PartitionLabel, k: int) -> bool:
    """Image test for labels over the (k+1)-gon with distinguished vertex ``v = k``."""
    for c in label.arrangement:
        if not (len(c) == 2 and 0 <= min(c) and max(c) <= k) or adjacent(k + 1, *c):
            raise LabelError(f"{c} is not a diagonal of the {k + 1}-gon")
    rg = polygon_ribbon(k + 1, label.blocks[0])
    return in_image_pi1_ribbon(rg, k)


def puncture_v_pi2(label: PartitionLabel, k: int) -> PartitionLabel:
    """Remove the diagonals at ``v = k`` and make ``v`` the puncture of the k-gon.

    A chord ``(i, j)``, ``i < j < k``, becomes the punctured-k-gon diagonal with
    representative ``(i, j)``: the puncture sits where ``v`` was, between the
    vertices ``k-1`` and ``0``.
    """
    if not in_image_pi1(label, k):
        raise LabelError("label is not in the image of the half surgery")
    blocks = [frozenset(c for c in b if k not in c) for b in label.blocks]
    out, _ = _drop_empty_blocks(blocks)
    return out
