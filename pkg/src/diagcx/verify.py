"""Verification pipelines.  Each ``check_*`` returns a JSON-ready dict with a ``passed`` flag."""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Sequence

from . import __version__
from .config import load_config
from .fiber import (
    FiberCell,
    _base_map,
    add_loop,
    build_fiber,
    cell_to_punctured_label,
    double_edge,
    polygon_fiber,
    verify_surface,
)
from .forgetful import project_pi
from .homology import homology, is_contractible_certificate, sphere_homology
from .labels import PartitionLabel, bd_complex, faces, faces_by_closure, leq_labels
from .morse import (
    base_from_sizes,
    check_acyclic,
    collapse,
    generate_preimage,
    example_gradient_path,
    preimage_oracle,
    thmhalf_matching,
    validate_vpath,
)
from .polygon import (
    catalan,
    enumerate_axis_symmetric,
    enumerate_plain,
    enumerate_punctured,
    fold,
    plain_f_vector_oracle,
    plain_rank,
    punctured_f_vector_oracle,
    punctured_rank,
    unfold,
)
from .poset import graded_f_vector, is_order_isomorphism, order_complex, poset_isomorphism
from .ribbon import MarkedSurfaceSpec, RibbonGraph, one_vertex_torus, polygon_ribbon


def threads() -> int:
    try:
        return max(1, int(os.environ.get("DIAGCX_THREADS", "1")))
    except ValueError:
        return 1


def pmap(fn: Callable, items: Sequence) -> list:
    """Map in worker processes when DIAGCX_THREADS > 1; order of results follows ``items``."""
    items = list(items)
    k = threads()
    if k == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=k) as pool:
        return list(pool.map(fn, items))


def _ridge_ok(K) -> bool:
    d = K.dim
    count: dict = {}
    for f in K.facets:
        if len(f) != d + 1:
            continue
        t = tuple(sorted(f))
        for i in range(len(t)):
            r = t[:i] + t[i + 1:]
            count[r] = count.get(r, 0) + 1
    return all(c <= 2 for c in count.values())


# 1 ---------------------------------------------------------------------------------------------

def _assoc_one(n: int) -> dict:
    p = enumerate_plain(n)
    triangulations = sum(1 for e in p.elements if len(e.chords) == n - 3)
    fv = list(graded_f_vector(p, plain_rank(p)))
    oracle = list(plain_f_vector_oracle(n))
    cert = is_contractible_certificate(order_complex(p), allow_homology=False)
    ok = triangulations == catalan(n - 2) and fv == oracle and cert.kind == "collapsible"
    return {
        "n": n,
        "triangulations": triangulations,
        "catalan": catalan(n - 2),
        "f_vector": fv,
        "oracle_f_vector": oracle,
        "certificate": cert.kind,
        "passed": ok,
    }


def check_associahedron(ns: Iterable[int] = range(4, 9)) -> dict:
    rows = pmap(_assoc_one, list(ns))
    return {"criterion": 1, "name": "associahedron", "rows": rows, "passed": all(r["passed"] for r in rows)}


# 2 ---------------------------------------------------------------------------------------------

def _cyclo_one(n: int) -> dict:
    p = enumerate_punctured(n)
    ranks = punctured_rank(p)
    top = [i for i in p.maximal()]
    top_ok = len(top) == 1 and not p.elements[top[0]].diagonals
    K = order_complex(p)
    rep = homology(K)
    bd = order_complex(p.induced([i for i in range(len(p)) if i not in top])[0])
    bd_rep = homology(bd)
    fv = list(graded_f_vector(p, ranks))
    ok = (
        max(ranks) == n - 1
        and K.dim == n - 1
        and top_ok
        and rep.is_acyclic
        and sphere_homology(bd_rep, n - 2)
        and _ridge_ok(K)
        and fv == list(punctured_f_vector_oracle(n))
    )
    return {
        "n": n,
        "dimension": max(ranks),
        "f_vector": fv,
        "unique_top_is_empty": top_ok,
        "reduced_betti": rep.reduced_betti,
        "boundary_betti": bd_rep.betti,
        "ridge_condition": _ridge_ok(K),
        "passed": ok,
    }


def check_cyclohedron(ns: Iterable[int] = range(2, 6)) -> dict:
    rows = pmap(_cyclo_one, list(ns))
    return {"criterion": 2, "name": "cyclohedron", "rows": rows, "passed": all(r["passed"] for r in rows)}


# 3 ---------------------------------------------------------------------------------------------

def _axis_one(k: int) -> dict:
    a = enumerate_axis_symmetric(k)
    b = enumerate_plain(k + 1)
    f = poset_isomorphism(a, b)
    iso = f is not None and is_order_isomorphism(a, b, f)
    roundtrip = all(unfold(fold(e)) == e for e in a.elements)
    index = {e: i for i, e in enumerate(b.elements)}
    folded = [index.get(fold(e)) for e in a.elements]
    # folding itself is an order isomorphism onto the plain poset
    fold_iso = None not in folded and is_order_isomorphism(a, b, dict(enumerate(folded)))
    return {"k": k, "sizes": [len(a), len(b)], "isomorphic": iso, "round_trip": roundtrip, "fold_is_isomorphism": fold_iso,
            "passed": iso and roundtrip and fold_iso}


def check_axis(ks: Iterable[int] = range(2, 6)) -> dict:
    rows = pmap(_axis_one, list(ks))
    return {"criterion": 3, "name": "symmetric associahedron", "rows": rows, "passed": all(r["passed"] for r in rows)}


# 4 ---------------------------------------------------------------------------------------------

def incidence_examples() -> list[tuple[PartitionLabel, PartitionLabel]]:
    L = PartitionLabel.of
    big = L({"d5", "d2"}, {"d3"}, {"d1", "d6"}, {"d4"}, {"d7"}, {"d8"})
    return [
        (big, L({"d5", "d2"}, {"d3", "d1", "d6"}, {"d4", "d7"})),
        (big, L({"d5", "d2"}, {"d3"}, {"d1", "d6"}, {"d4"}, {"d7"})),
        (big, L({"d5", "d2"}, {"d3"}, {"d1", "d6"}, {"d4"}, {"d7", "d8"})),
    ]


def check_incidence() -> dict:
    examples = [leq_labels(lo, hi) and not leq_labels(hi, lo) for hi, lo in incidence_examples()]
    corpora = {"pentagon": bd_complex(enumerate_plain(5)).labels, "punctured triangle": bd_complex(enumerate_punctured(3)).labels}
    rows = []
    for name, labels in corpora.items():
        mismatches = 0
        for lab in labels:
            fs = faces(lab)
            if fs != faces_by_closure(lab) or any(not leq_labels(f, lab) for f in fs):
                mismatches += 1
        rows.append({"corpus": name, "labels": len(labels), "mismatches": mismatches})
    ok = all(examples) and all(r["mismatches"] == 0 for r in rows)
    return {"criterion": 4, "name": "incidence rules", "examples": examples, "rows": rows, "passed": ok}


# 5 ---------------------------------------------------------------------------------------------

def _projection_one(n: int) -> dict:
    bd = bd_complex(enumerate_punctured(n))
    P = bd.poset
    images, unaccounted = [], 0
    for lab in P.elements:
        img, trace = project_pi(lab, n)
        images.append(img)
        unaccounted += not trace.accounts_for(lab)
    # monotone on covers implies monotone everywhere
    violations = sum(1 for a in range(len(P)) for b in P.up_covers[a] if not leq_labels(images[a], images[b]))
    return {"n": n, "labels": len(P), "monotonicity_violations": violations, "unaccounted_traces": unaccounted,
            "passed": violations == 0 and unaccounted == 0}


def check_projection(ns: Iterable[int] = range(2, 5)) -> dict:
    rows = pmap(_projection_one, list(ns))
    return {"criterion": 5, "name": "forgetful projection", "rows": rows, "passed": all(r["passed"] for r in rows)}


# 6 ---------------------------------------------------------------------------------------------

def _fiber_polygon(n: int) -> dict:
    groups: dict = {}
    for lab in bd_complex(enumerate_punctured(n)).labels:
        groups.setdefault(project_pi(lab, n)[0], set()).add(lab)
    spec = MarkedSurfaceSpec(0, 1, 0, 1, (n,))
    bases = bd_complex(enumerate_plain(n)).labels
    bad_surface, bad_oracle = [], []
    for base in bases:
        fc, _ = polygon_fiber(n, base)
        rep = verify_surface(fc, spec)
        if not (rep.ok and rep.euler == 1 and rep.boundary_circles == 1):
            bad_surface.append(str(base))
        got = [cell_to_punctured_label(c, n) for c in fc.cells]
        if len(set(got)) != len(got) or set(got) != groups.get(base, set()):
            bad_oracle.append(str(base))
    return {"n": n, "bases": len(bases), "surface_failures": bad_surface, "oracle_mismatches": bad_oracle,
            "passed": not bad_surface and not bad_oracle}


def triangulated_torus() -> RibbonGraph:
    """One vertex, three loops: the hexagonal one-vertex torus."""
    return RibbonGraph([[0, 1, 2, 3, 4, 5]], [(0, 3), (1, 4), (2, 5)], vertex_labels={0: "x"})


def _fiber_torus() -> list[dict]:
    spec = MarkedSurfaceSpec(1, 0, 1, 1)
    cases = [
        ("two loops, r=1", one_vertex_torus(), {0: 1, 1: 1}),
        ("three loops, r=1", triangulated_torus(), {0: 1, 1: 1, 2: 1}),
        ("three loops, r=2", triangulated_torus(), {0: 1, 1: 1, 2: 2}),
    ]
    rows = []
    for name, rg, colors in cases:
        rep = verify_surface(build_fiber(rg, colors), spec)
        rows.append({"case": name, "report": rep.to_obj(),
                     "passed": rep.ok and rep.euler == -1 and rep.boundary_circles == 1})
    return rows


def worked_example() -> dict:
    """Hexagon with S1 = {02}, S2 = {03} = d, S3 = {04}; locate five cells of the fiber built by hand."""
    n = 6
    base = PartitionLabel.of({(0, 2)}, {(0, 3)}, {(0, 4)})
    fc, rg = polygon_fiber(n, base)
    keys = set(fc.keys)
    e02, e03, e04 = n, n + 1, n + 2  # chord edge ids in sorted order
    M = _base_map(rg, {e02: 1, e03: 2, e04: 3})
    x = next(h for h in M.sigma[0] if M.edge_of[h] == e03)  # d leaving vertex 0
    assert M.edge_of[M.s_inv(x)] == e02  # so the corner (s_inv x, x) lies between 02 and 03

    def cell(g: RibbonGraph, colors: dict, p: int) -> FiberCell:
        return FiberCell(g, p, 3, "example").with_colors(colors, p)

    g_l, loop_l = add_loop(M, x)
    g_d, dcopy = double_edge(M, x)
    bigon = g_d.faces[g_d.puncture_face()]
    near = next(y for y in bigon if g_d.vertex_of[y] == 0)
    far = next(y for y in bigon if g_d.vertex_of[y] == 3)
    g_near, loop_near = add_loop(g_d, near)
    g_far, loop_far = add_loop(g_d, far)
    listed = {
        "a": cell(g_l, {e02: 1, loop_l: 2, e03: 3, e04: 4}, 4),
        "b": cell(g_d, {e02: 1, e03: 2, dcopy: 2, e04: 3}, 3),
        "c": cell(g_near, {e02: 1, loop_near: 1, e03: 2, dcopy: 2, e04: 3}, 3),
        "d": cell(g_far, {e02: 1, e03: 2, loop_far: 3, dcopy: 3, e04: 4}, 4),
        "e": cell(g_d, {e02: 1, e03: 2, e04: 3, dcopy: 4}, 4),
    }
    rows = {
        name: {"label": str(cell_to_punctured_label(c, n)), "dim": c.dim, "present": c.key() in keys}
        for name, c in listed.items()
    }
    return {"cells": rows, "passed": all(r["present"] for r in rows.values())}


def check_fibers(ns: Iterable[int] = range(3, 6)) -> dict:
    poly = pmap(_fiber_polygon, list(ns))
    torus = _fiber_torus()
    ex = worked_example()
    ok = all(r["passed"] for r in poly) and all(r["passed"] for r in torus) and ex["passed"]
    return {"criterion": 6, "name": "fibers of the projection", "polygon": poly, "torus": torus,
            "worked_example": ex, "passed": ok}


# 7 ---------------------------------------------------------------------------------------------

def morse_instances(max_k: int = 3, max_block: int = 2, max_q: int = 4) -> list[tuple[tuple[int, ...], int]]:
    out = []
    for k in range(1, max_k + 1):
        for sizes in sorted(_products(range(1, max_block + 1), k)):
            for q in range(1, max_q + 1):
                out.append((sizes, q))
    return out


def _products(values: Iterable[int], k: int) -> list[tuple[int, ...]]:
    import itertools

    return list(itertools.product(list(values), repeat=k))


def morse_instance_report(args: tuple[tuple[int, ...], int], oracle_limit: int = 6) -> dict:
    sizes, q = args
    inst = generate_preimage(sizes, q)
    oracle = None
    if sum(sizes) + q <= oracle_limit:
        oracle = set(inst.cells) == preimage_oracle(inst.base, q)
    V, cw = thmhalf_matching(inst)
    V.validate(cw)
    acyclic, witness = check_acyclic(cw, V)
    crit = V.critical(len(cw))
    crit_labels = [str(cw.keys[c]) for c in crit]
    single = len(crit) == 1 and cw.keys[crit[0]] == inst.critical_label
    collapsed = collapse(cw, V) if acyclic else None
    collapses = bool(collapsed) and collapsed.single_vertex and cw.dims[next(iter(collapsed.critical))] == 0
    rep = homology(inst.simplicial_complex())
    ok = acyclic and single and collapses and rep.is_acyclic and oracle in (None, True)
    return {"blocks": list(sizes), "q": q, "cells": len(cw), "pairs": len(V), "acyclic": acyclic, "critical": crit_labels,
            "collapses_to_vertex": collapses, "reduced_betti": rep.reduced_betti, "oracle_agrees": oracle, "passed": ok}


def gradient_path_check() -> dict:
    inst = generate_preimage((1, 1, 1), 3)
    V, cw = thmhalf_matching(inst)
    path = [cw.index[L] for L in example_gradient_path(inst)]
    prefix_ok = validate_vpath(cw, V, path)
    ext = [f for f in cw.facets[path[-1]] if f != path[-2]]
    extended_ok = bool(ext) and validate_vpath(cw, V, path + [ext[0]])
    return {"cells": [str(L) for L in example_gradient_path(inst)], "valid": prefix_ok and extended_ok, "passed": prefix_ok and extended_ok}


def check_morse(max_k: int = 3, max_block: int = 2, max_q: int = 4) -> dict:
    rows = pmap(morse_instance_report, morse_instances(max_k, max_block, max_q))
    path = gradient_path_check()
    ok = all(r["passed"] for r in rows) and path["passed"]
    return {"criterion": 7, "name": "discrete Morse matching", "rows": rows, "gradient_path": path, "passed": ok}


# manifest ------------------------------------------------------------------------------------------

def _sha(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()


def run_all(max_k: int | None = None, max_q: int | None = None, timing: bool = False, config: str | None = None,
            seed: int = 0) -> dict:
    cfg = load_config(config)["sweeps"]
    max_k = cfg["morse_max_k"] if max_k is None else max_k
    max_q = cfg["morse_max_q"] if max_q is None else max_q
    params = {"max_k": max_k, "max_q": max_q, "max_block": cfg["morse_max_block"], "seed": seed, "sweeps": cfg}
    rng = lambda pair: range(pair[0], pair[1] + 1)  # noqa: E731
    steps = [
        lambda: check_associahedron(rng(cfg["plain_n"])),
        lambda: check_cyclohedron(rng(cfg["punctured_n"])),
        lambda: check_axis(rng(cfg["axis_k"])),
        check_incidence,
        lambda: check_projection(rng(cfg["projection_n"])),
        lambda: check_fibers(rng(cfg["fiber_n"])),
        lambda: check_morse(max_k, cfg["morse_max_block"], max_q),
    ]
    results, times = [], []
    for step in steps:
        t = time.perf_counter()
        results.append(step())
        times.append(time.perf_counter() - t)
    manifest = {
        "command": "verify all",
        "version": __version__,
        "parameters": params,
        "input_hash": _sha(params),
        "outputs": {str(r["criterion"]): _sha(r) for r in results},
        "verdicts": {str(r["criterion"]): r["passed"] for r in results},
        "passed": all(r["passed"] for r in results),
    }
    if timing:
        manifest["wall_time"] = {str(r["criterion"]): round(t, 3) for r, t in zip(results, times)}
    return {"manifest": manifest, "results": results}
