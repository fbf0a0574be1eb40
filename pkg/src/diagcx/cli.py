"""Command-line entry point.  Every subcommand prints JSON on stdout.

Exit codes: 0 success, 1 a verification failed, 2 bad usage or bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Any, Sequence

from . import verify
from .cells import SimplicialComplex
from .fiber import build_fiber, polygon_fiber, verify_surface
from .forgetful import half_surgery_pi1, in_image_pi1, project_pi, puncture_v_pi2, unfold_label
from .homology import homology
from .labels import LabelError, PartitionLabel, bd_complex
from .morse import (
    MatchingError,
    check_acyclic,
    collapse,
    generate_preimage,
    preimage_oracle,
    thmhalf_matching,
    DiscreteVectorField,
)
from .polygon import (
    ChordError,
    ChordSet,
    PuncturedPolygonArrangement,
    axial_rank,
    enumerate_axis_symmetric,
    enumerate_plain,
    enumerate_punctured,
    fold,
    plain_rank,
    punctured_rank,
    unfold,
)
from .poset import PosetError, graded_f_vector, is_order_isomorphism, poset_isomorphism
from .ribbon import MarkedSurfaceSpec, RibbonError, RibbonGraph


class UsageError(Exception):
    pass


def _tuplify(x: Any) -> Any:
    return tuple(_tuplify(y) for y in x) if isinstance(x, list) else x


def _listify(x: Any) -> Any:
    return [_listify(y) for y in x] if isinstance(x, (tuple, list)) else x


def _read_json(path: str) -> Any:
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def read_label(path: str) -> PartitionLabel:
    obj = _read_json(path)
    blocks = obj["blocks"] if isinstance(obj, dict) else obj
    return PartitionLabel.from_obj(blocks, _tuplify)


def label_obj(label: PartitionLabel) -> dict:
    return {"arrangement": _listify(sorted(label.arrangement, key=repr)), "blocks": label.to_obj(_listify)}


def _emit(obj: Any, out: str | None = None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=1) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _side(path: str | None, text: str) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)


# --- posets ------------------------------------------------------------------------------------

KINDS = {"plain": "plain", "assoc": "plain", "punctured": "punctured", "cyclo": "punctured", "axis": "axis"}


def build_poset(kind: str, size: int):
    kind = KINDS[kind]
    if kind == "plain":
        p = enumerate_plain(size)
        return p, plain_rank(p)
    if kind == "punctured":
        p = enumerate_punctured(size)
        return p, punctured_rank(p)
    p = enumerate_axis_symmetric(size)
    return p, axial_rank(p)


def _element_obj(e: Any) -> Any:
    return e.to_obj() if hasattr(e, "to_obj") else e


def cmd_enumerate(args) -> int:
    size = args.k if args.kind == "axis" else args.n
    if size is None:
        raise UsageError("--k is required for axis, --n otherwise")
    p, rank = build_poset(args.kind, size)
    fv = list(graded_f_vector(p, rank))
    if args.dot:
        _side(args.dot, p.to_dot(str))
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "rank", "element"])
        for i, e in enumerate(p.elements):
            w.writerow([i, rank[i], str(e)])
        _side(args.csv, buf.getvalue())
    if args.f_vector:
        _emit({"kind": args.kind, "size": size, "f_vector": fv})
    else:
        _emit({"kind": args.kind, "size": size, "f_vector": fv, "rank": list(rank),
               "elements": [_element_obj(e) for e in p.elements], "covers": sorted(map(list, p.covers))})
    return 0


def _parse_poset_spec(tokens: list[str]) -> tuple[tuple[str, int], list[str]]:
    if not tokens or tokens[0] not in KINDS:
        raise UsageError(f"expected one of {sorted(KINDS)}, got {tokens[:1]}")
    kind = tokens[0]
    if len(tokens) < 3 or tokens[1] not in ("--n", "--k"):
        raise UsageError(f"{kind} needs --n or --k and a size")
    try:
        size = int(tokens[2])
    except ValueError:
        raise UsageError(f"bad size {tokens[2]!r}") from None
    return (kind, size), tokens[3:]


def cmd_poset_iso(args) -> int:
    a, rest = _parse_poset_spec(list(args.spec))
    b, rest = _parse_poset_spec(rest)
    if rest:
        raise UsageError(f"unexpected arguments {rest}")
    p, _ = build_poset(*a)
    q, _ = build_poset(*b)
    f = poset_isomorphism(p, q)
    ok = f is not None and is_order_isomorphism(p, q, f)
    out = {"first": list(a), "second": list(b), "sizes": [len(p), len(q)], "isomorphic": "yes" if ok else "no"}
    if ok:
        out["map"] = [[i, f[i]] for i in sorted(f)]
    _emit(out)
    return 0


def cmd_bd(args) -> int:
    size = args.k if args.kind == "axis" else args.n
    if size is None:
        raise UsageError("--k is required for axis, --n otherwise")
    p, _ = build_poset(args.kind, size)
    bd = bd_complex(p)
    by_dim: dict[int, int] = {}
    for lab in bd.labels:
        by_dim[lab.dim] = by_dim.get(lab.dim, 0) + 1
    out = {"kind": args.kind, "size": size, "cells": len(bd.labels),
           "f_vector": [by_dim.get(d, 0) for d in range(max(by_dim) + 1)]}
    if args.homology:
        out["homology"] = homology(bd.complex).to_dict()
    if not args.summary:
        out["labels"] = [label_obj(lab) for lab in bd.labels]
    if args.dot:
        _side(args.dot, bd.poset.to_dot(str))
    _emit(out)
    return 0


# --- maps --------------------------------------------------------------------------------------

def cmd_project(args) -> int:
    lab = read_label(args.label)
    img, trace = project_pi(lab, args.n)
    _emit({"input": label_obj(lab), "image": label_obj(img), "trace": trace.to_obj(),
           "accounted": trace.accounts_for(lab)})
    return 0


def cmd_fold(args) -> int:
    obj = _read_json(args.input)
    if isinstance(obj, dict) and "blocks" in obj:
        if args.k is None:
            raise UsageError("folding a label needs --k")
        lab = read_label(args.input)
        res = unfold_label(lab, args.k) if args.unfold else half_surgery_pi1(lab, args.k)
        _emit({"input": label_obj(lab), "output": label_obj(res)})
        return 0
    if args.unfold:
        if "n" in obj:
            x = PuncturedPolygonArrangement.from_reps(obj["n"], [tuple(c) for c in obj["diagonals"]])
        else:
            x = ChordSet.from_obj(obj)
        res = unfold(x, args.k)
    else:
        res = fold(ChordSet.from_obj(obj))
    _emit({"input": obj, "output": res.to_obj()})
    return 0


def cmd_pi2(args) -> int:
    lab = read_label(args.label)
    if not in_image_pi1(lab, args.k):
        _emit({"input": label_obj(lab), "in_image": False})
        return 1
    _emit({"input": label_obj(lab), "in_image": True, "output": label_obj(puncture_v_pi2(lab, args.k))})
    return 0


# --- morse -------------------------------------------------------------------------------------

def _matching_report(inst, V: DiscreteVectorField, cw) -> dict:
    V.validate(cw)
    acyclic, witness = check_acyclic(cw, V)
    crit = V.critical(len(cw))
    res = collapse(cw, V) if acyclic else None
    rep = homology(inst.simplicial_complex())
    single = len(crit) == 1 and cw.keys[crit[0]] == inst.critical_label
    collapses = bool(res) and res.single_vertex and cw.dims[next(iter(res.critical))] == 0
    return {
        "acyclic": acyclic,
        "cycle_witness": None if witness is None else [label_obj(cw.keys[c])["blocks"] for c in witness],
        "critical": [label_obj(cw.keys[c])["blocks"] for c in crit],
        "collapses_to_vertex": collapses,
        "homology": rep.to_dict(),
        "passed": acyclic and single and collapses and rep.is_acyclic,
    }


def cmd_morse_preimage(args) -> int:
    try:
        sizes = tuple(int(s) for s in args.blocks.split(","))
    except ValueError:
        raise UsageError(f"bad --blocks {args.blocks!r}") from None
    if args.q < 1:
        raise UsageError("--q must be positive")
    inst = generate_preimage(sizes, args.q)
    V, cw = thmhalf_matching(inst)
    out = {
        "instance": {"base": label_obj(inst.base)["blocks"], "q": inst.q,
                     "cells": [label_obj(c)["blocks"] for c in inst.cells]},
        "matching": [[label_obj(cw.keys[a])["blocks"], label_obj(cw.keys[b])["blocks"]] for a, b in sorted(V.pairs)],
    }
    out.update(_matching_report(inst, V, cw))
    if args.oracle:
        out["oracle_agrees"] = set(inst.cells) == preimage_oracle(inst.base, inst.q)
        out["passed"] = out["passed"] and out["oracle_agrees"]
    _emit(out, args.out)
    return 0 if out["passed"] else 1


def cmd_morse_check(args) -> int:
    obj = _read_json(args.input)
    inst_obj = obj["instance"]
    decode = lambda blocks: PartitionLabel.from_obj(blocks, _tuplify)  # noqa: E731
    base = decode(inst_obj["base"])
    inst = generate_preimage(base, inst_obj["q"])
    given = {decode(c) for c in inst_obj["cells"]}
    if given != set(inst.cells):
        _emit({"passed": False, "problem": "cell set differs from the generated preimage"})
        return 1
    cw = inst.cw()
    idx = cw.index
    try:
        V = DiscreteVectorField([(idx[decode(a)], idx[decode(b)]) for a, b in obj["matching"]])
        out = _matching_report(inst, V, cw)
    except (KeyError, MatchingError) as exc:
        out = {"passed": False, "problem": f"invalid matching: {exc}"}
    _emit(out)
    return 0 if out["passed"] else 1


# --- fiber and homology ------------------------------------------------------------------------

def cmd_fiber(args) -> int:
    if args.ribbon:
        rg = RibbonGraph.from_obj(_read_json(args.ribbon))
        obj = _read_json(args.base)
        blocks = obj["blocks"] if isinstance(obj, dict) else obj
        colors = {int(e): i for i, b in enumerate(blocks, start=1) for e in b}
        fc = build_fiber(rg, colors, len(blocks))
        spec = None
        if args.surface:
            g, b, n, f = (int(x) for x in args.surface.split(",")[:4])
            n_i = tuple(int(x) for x in args.surface.split(",")[4:])
            spec = MarkedSurfaceSpec(g, b, n, f, n_i)
    else:
        if args.n is None:
            raise UsageError("fiber needs --ribbon or --n")
        base = read_label(args.base)
        fc, _ = polygon_fiber(args.n, base)
        spec = MarkedSurfaceSpec(0, 1, 0, 1, (args.n,))
    rep = verify_surface(fc, spec)
    if args.dot:
        lines = ["digraph fiber {", "  rankdir=BT;"]
        for i, c in enumerate(fc.cells):
            lines.append(f'  n{i} [label="{c.origin} {c.blocks()}"];')
        for i, fs in enumerate(fc.cw.facets):
            lines += [f"  n{j} -> n{i};" for j in fs]
        _side(args.dot, "\n".join(lines + ["}"]) + "\n")
    out = {"surface": rep.to_obj(), "f_vector": list(fc.cw.f_vector())}
    if not args.summary:
        out["fiber"] = fc.to_obj()
    _emit(out)
    return 0 if rep.ok else 1


def cmd_homology(args) -> int:
    obj = _read_json(args.input)
    K = SimplicialComplex([_tuplify(f) for f in obj["facets"]])
    rep = homology(K)
    if args.table:
        sys.stdout.write(rep.table() + "\n")
    else:
        _emit(rep.to_dict())
    return 0


# --- verify ------------------------------------------------------------------------------------

def _criterion(name: str, args):
    cfg_sweeps = verify.load_config(args.config)["sweeps"]
    rng = lambda key: range(cfg_sweeps[key][0], cfg_sweeps[key][1] + 1)  # noqa: E731
    max_k = cfg_sweeps["morse_max_k"] if args.max_k is None else args.max_k
    max_q = cfg_sweeps["morse_max_q"] if args.max_q is None else args.max_q
    table = {
        "associahedron": lambda: verify.check_associahedron(rng("plain_n")),
        "cyclohedron": lambda: verify.check_cyclohedron(rng("punctured_n")),
        "axis": lambda: verify.check_axis(rng("axis_k")),
        "incidence": verify.check_incidence,
        "projection": lambda: verify.check_projection(rng("projection_n")),
        "fibers": lambda: verify.check_fibers(rng("fiber_n")),
        "morse": lambda: verify.check_morse(max_k, cfg_sweeps["morse_max_block"], max_q),
    }
    return table[name]()


def _manifest_bytes(args) -> tuple[bytes, dict]:
    res = verify.run_all(args.max_k, args.max_q, timing=args.timing, config=args.config, seed=args.seed)
    return (json.dumps(res["manifest"], sort_keys=True, indent=1) + "\n").encode(), res


def cmd_verify(args) -> int:
    if args.what == "all":
        data, res = _manifest_bytes(args)
        if args.out:
            with open(args.out, "wb") as fh:
                fh.write(data)
        if args.details:
            _side(args.details, json.dumps(res["results"], sort_keys=True, indent=1) + "\n")
        sys.stdout.write(data.decode())
        return 0 if res["manifest"]["passed"] else 1
    if args.what == "determinism":
        args.timing = False
        first, _ = _manifest_bytes(args)
        second, _ = _manifest_bytes(args)
        out = {"criterion": 8, "name": "determinism", "identical": first == second, "passed": first == second}
        _emit(out, args.out)
        return 0 if out["passed"] else 1
    out = _criterion(args.what, args)
    _emit(out, args.out)
    return 0 if out["passed"] else 1


# --- parser ------------------------------------------------------------------------------------

CRITERIA = ["all", "associahedron", "cyclohedron", "axis", "incidence", "projection", "fibers", "morse", "determinism"]


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="diagcx", description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0, help="recorded in manifests")
    ap.add_argument("--config", help="JSON file overriding the small-case list and sweep bounds")
    sub = ap.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enumerate", help="diagonal arrangement posets")
    e.add_argument("kind", choices=["plain", "punctured", "axis"])
    e.add_argument("--n", type=int)
    e.add_argument("--k", type=int)
    e.add_argument("--f-vector", action="store_true", help="print only the f-vector")
    e.add_argument("--dot", metavar="FILE")
    e.add_argument("--csv", metavar="FILE")
    e.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("poset-iso", help="e.g. poset-iso axis --k 3 assoc --n 4")
    p.add_argument("spec", nargs=argparse.REMAINDER)
    p.set_defaults(func=cmd_poset_iso)

    b = sub.add_parser("bd", help="barycentric label complex")
    b.add_argument("kind", choices=["plain", "punctured", "axis"])
    b.add_argument("--n", type=int)
    b.add_argument("--k", type=int)
    b.add_argument("--homology", action="store_true")
    b.add_argument("--summary", action="store_true", help="omit the label list")
    b.add_argument("--dot", metavar="FILE")
    b.set_defaults(func=cmd_bd)

    pr = sub.add_parser("project", help="forget the puncture of a label")
    pr.add_argument("--label", required=True)
    pr.add_argument("--n", type=int, required=True)
    pr.set_defaults(func=cmd_project)

    f = sub.add_parser("fold", help="cut a symmetric polygon along its axis")
    f.add_argument("--input", required=True, help="chord set or label JSON")
    f.add_argument("--k", type=int)
    f.add_argument("--unfold", action="store_true")
    f.set_defaults(func=cmd_fold)

    p2 = sub.add_parser("pi2", help="turn vertex k of a (k+1)-gon label into a puncture")
    p2.add_argument("--label", required=True)
    p2.add_argument("--k", type=int, required=True)
    p2.set_defaults(func=cmd_pi2)

    m = sub.add_parser("morse", help="preimage instances and their matching")
    msub = m.add_subparsers(dest="morse_command", required=True)
    mp = msub.add_parser("preimage")
    mp.add_argument("--blocks", required=True, help="comma-separated block sizes, e.g. 2,1")
    mp.add_argument("--q", type=int, required=True)
    mp.add_argument("--oracle", action="store_true", help="compare cells with the brute-force enumeration")
    mp.add_argument("--out")
    mp.set_defaults(func=cmd_morse_preimage)
    mc = msub.add_parser("check")
    mc.add_argument("--input", required=True, help="output of morse preimage")
    mc.set_defaults(func=cmd_morse_check)

    fb = sub.add_parser("fiber", help="fiber of the projection over a base label")
    fb.add_argument("--base", required=True)
    fb.add_argument("--ribbon")
    fb.add_argument("--n", type=int, help="polygon size when no ribbon is given")
    fb.add_argument("--surface", help="g,b,n,f[,n_1,...] of the base surface")
    fb.add_argument("--summary", action="store_true")
    fb.add_argument("--dot", metavar="FILE")
    fb.set_defaults(func=cmd_fiber)

    h = sub.add_parser("homology", help="integer homology of a simplicial complex")
    h.add_argument("--input", required=True)
    h.add_argument("--table", action="store_true")
    h.set_defaults(func=cmd_homology)

    v = sub.add_parser("verify", help="acceptance pipelines")
    v.add_argument("what", choices=CRITERIA)
    v.add_argument("--max-k", type=int)
    v.add_argument("--max-q", type=int)
    v.add_argument("--timing", action="store_true", help="add wall times to the manifest")
    v.add_argument("--out")
    v.add_argument("--details", metavar="FILE", help="write the full per-criterion results")
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        ap.error(str(exc))  # exits with 2
    except (LabelError, ChordError, PosetError, RibbonError, KeyError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"diagcx: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
