"""Integer simplicial homology via Smith normal form.

Boundary matrices are kept sparse (column -> {row: value}).  Unit pivots
are eliminated first, which on complexes of this kind leaves little or
nothing; the remainder goes through a dense exact Smith normal form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .cells import RegularCW, SimplicialComplex

SparseMatrix = dict[int, dict[int, int]]


def boundary_matrices(K: SimplicialComplex) -> list[tuple[SparseMatrix, int, int]]:
    """``[(d_k, rows, cols)]`` for k = 1..dim; columns are k-simplices."""
    simp = K.simplices
    index = [{s: i for i, s in enumerate(layer)} for layer in simp]
    out = []
    for k in range(1, len(simp)):
        lower = index[k - 1]
        cols: SparseMatrix = {}
        for j, s in enumerate(simp[k]):
            col = {}
            for i in range(len(s)):
                col[lower[s[:i] + s[i + 1:]]] = -1 if i % 2 else 1
            cols[j] = col
        out.append((cols, len(simp[k - 1]), len(simp[k])))
    return out


@dataclass
class ChainComplex:
    """Simplicial chain complex; ``boundaries[k-1]`` is the k-th boundary map."""

    sizes: list[int]
    boundaries: list[SparseMatrix]

    @classmethod
    def from_complex(cls, K: SimplicialComplex) -> "ChainComplex":
        mats = boundary_matrices(K)
        return cls(list(K.f_vector), [m for m, _, _ in mats])

    def check_dd_zero(self) -> bool:
        for k in range(1, len(self.boundaries)):
            lower, upper = self.boundaries[k - 1], self.boundaries[k]
            for col in upper.values():
                acc: dict[int, int] = {}
                for r, v in col.items():
                    for r2, v2 in lower.get(r, {}).items():
                        acc[r2] = acc.get(r2, 0) + v * v2
                if any(acc.values()):
                    return False
        return True


def _dense_invariant_factors(rows: list[list[int]]) -> list[int]:
    """Non-zero diagonal of the Smith normal form of a dense integer matrix."""
    A = [r[:] for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    factors = []
    t = 0
    while t < m and t < n:
        # pivot: smallest non-zero absolute value in the remaining block
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    if q:
                        rt, ri = A[t], A[i]
                        for j in range(t, n):
                            ri[j] -= q * rt[j]
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    if q:
                        for row in A[t:]:
                            row[j] -= q * row[t]
                    if A[t][j]:
                        done = False
            if done:
                # divisibility of the rest of the block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                rt, rb = A[t], A[bad]
                for j in range(t, n):
                    rt[j] += rb[j]
                continue
            # move the smallest remaining entry of row/col t onto the pivot
            best = (abs(A[t][t]), t, t)
            for i in range(t + 1, m):
                if A[i][t] and abs(A[i][t]) < best[0]:
                    best = (abs(A[i][t]), i, t)
            for j in range(t + 1, n):
                if A[t][j] and abs(A[t][j]) < best[0]:
                    best = (abs(A[t][j]), t, j)
            _, i, j = best
            if i != t:
                A[t], A[i] = A[i], A[t]
            if j != t:
                for row in A:
                    row[t], row[j] = row[j], row[t]
        factors.append(abs(A[t][t]))
        t += 1
    return factors


def _eliminate(cols: SparseMatrix, rows: dict[int, set[int]], r: int, c: int) -> None:
    """Clear row ``r`` and column ``c`` around the unit entry at ``(r, c)``."""
    pcol = cols.pop(c)
    u = pcol[r]
    for c2 in list(rows[r]):
        if c2 == c:
            continue
        col2 = cols[c2]
        f = col2[r] * u  # u = +-1, so u^-1 = u
        for r2, v in pcol.items():
            nv = col2.get(r2, 0) - f * v
            if nv:
                if r2 not in col2:
                    rows[r2].add(c2)
                col2[r2] = nv
            elif r2 in col2:
                del col2[r2]
                rows[r2].discard(c2)
        if not col2:
            del cols[c2]
    for r2 in pcol:
        rows[r2].discard(c)
    del rows[r]


def invariant_factors(cols: SparseMatrix, n_rows: int) -> list[int]:
    """Non-zero invariant factors of a sparse integer matrix, sorted ascending."""
    cols = {c: dict(v) for c, v in cols.items() if v}
    rows: dict[int, set[int]] = {}
    for c, col in cols.items():
        for r in col:
            rows.setdefault(r, set()).add(c)
    units = 0
    progress = True
    while progress:
        progress = False
        # one pass over the columns, smallest first; pivot on a unit entry in the sparsest row
        for c in sorted(cols, key=lambda k: (len(cols[k]), k)):
            col = cols.get(c)
            if not col:
                continue
            best = None
            for r, v in col.items():
                if v == 1 or v == -1:
                    cost = len(rows[r])
                    if best is None or cost < best[0]:
                        best = (cost, r)
            if best is None:
                continue
            _eliminate(cols, rows, best[1], c)
            units += 1
            progress = True
    factors = [1] * units
    live_rows = sorted(r for r, cs in rows.items() if cs)
    if cols and live_rows:
        ridx = {r: i for i, r in enumerate(live_rows)}
        ckeys = sorted(cols)
        dense = [[0] * len(ckeys) for _ in live_rows]
        for j, c in enumerate(ckeys):
            for r, v in cols[c].items():
                dense[ridx[r]][j] = v
        factors.extend(_dense_invariant_factors(dense))
    return sorted(factors)


def smith_normal_form_diagonal(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors of a dense matrix (convenience wrapper)."""
    cols: SparseMatrix = {}
    for i, row in enumerate(matrix):
        for j, v in enumerate(row):
            if v:
                cols.setdefault(j, {})[i] = int(v)
    return invariant_factors(cols, len(matrix))


@dataclass
class HomologyReport:
    betti: list[int]
    torsion: list[list[int]]
    euler: int
    reduced_betti: list[int] = field(default_factory=list)

    @property
    def is_acyclic(self) -> bool:
        """All reduced homology vanishes (integer coefficients)."""
        return not any(self.reduced_betti) and not any(self.torsion)

    def to_dict(self) -> dict:
        return {
            "betti": self.betti,
            "reduced_betti": self.reduced_betti,
            "torsion": self.torsion,
            "euler": self.euler,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def table(self) -> str:
        lines = ["dim  betti  torsion"]
        for k, b in enumerate(self.betti):
            tors = ",".join(map(str, self.torsion[k])) or "-"
            lines.append(f"{k:>3}  {b:>5}  {tors}")
        lines.append(f"euler characteristic: {self.euler}")
        return "\n".join(lines)


def homology(K: SimplicialComplex) -> HomologyReport:
    sizes = list(K.f_vector)
    if not sizes:
        return HomologyReport([], [], 0, [])
    mats = boundary_matrices(K)
    facs = [invariant_factors(m, rows) for m, rows, _ in mats]
    ranks = [0] + [len(f) for f in facs] + [0]
    betti = [sizes[k] - ranks[k] - ranks[k + 1] for k in range(len(sizes))]
    torsion = [sorted(x for x in (facs[k] if k < len(facs) else []) if x > 1) for k in range(len(sizes))]
    reduced = betti[:]
    reduced[0] -= 1
    euler = sum((-1) ** k * n for k, n in enumerate(sizes))
    return HomologyReport(betti, torsion, euler, reduced)


def euler_characteristic(K: SimplicialComplex | RegularCW) -> int:
    return K.euler_characteristic()


@dataclass
class ContractibilityCertificate:
    kind: str  # "collapsible" | "homology_point" | "fail"
    field: object = None
    report: HomologyReport | None = None

    def __bool__(self) -> bool:
        return self.kind != "fail"


def is_contractible_certificate(K: SimplicialComplex, allow_homology: bool = True) -> ContractibilityCertificate:
    """Greedy collapse to one vertex if possible, else reduced homology of a point."""
    from .morse import greedy_collapse

    cw = K.to_cw()
    result = greedy_collapse(cw)
    if len(result.critical) == 1 and cw.dims[next(iter(result.critical))] == 0:
        return ContractibilityCertificate("collapsible", result.field)
    if not allow_homology:
        return ContractibilityCertificate("fail")
    rep = homology(K)
    if rep.is_acyclic:
        return ContractibilityCertificate("homology_point", report=rep)
    return ContractibilityCertificate("fail", report=rep)


def sphere_homology(rep: HomologyReport, d: int) -> bool:
    """Integer homology of the d-sphere (d = -1 means empty)."""
    if d == -1:
        return not rep.betti
    want = [0] * (d + 1)
    want[0] += 1
    want[d] += 1
    return rep.betti == want and not any(rep.torsion)

