"""The eight acceptance criteria, each under its time budget.

A line per criterion is printed at the end of the session.
"""

import subprocess
import sys
import time

import pytest

from diagcx import verify

from conftest import ACCEPTANCE_LINES


def record(number, name, budget, fn):
    t = time.perf_counter()
    res = fn()
    dt = time.perf_counter() - t
    ok = res["passed"] and dt < budget
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number}. {name}: {dt:.1f} s (budget {budget} s)")
    print(ACCEPTANCE_LINES[-1])
    return res, dt


def test_1_associahedron():
    res, dt = record(1, "associahedron n=4..8", 30, lambda: verify.check_associahedron(range(4, 9)))
    assert [r["triangulations"] for r in res["rows"]] == [2, 5, 14, 42, 132]
    assert all(r["certificate"] == "collapsible" for r in res["rows"])
    assert all(r["f_vector"] == r["oracle_f_vector"] for r in res["rows"])
    assert res["passed"] and dt < 30


def test_2_cyclohedron():
    res, dt = record(2, "cyclohedron n=2..5", 120, lambda: verify.check_cyclohedron(range(2, 6)))
    for r in res["rows"]:
        assert r["dimension"] == r["n"] - 1 and r["unique_top_is_empty"]
        assert not any(r["reduced_betti"]) and r["ridge_condition"]
    assert res["passed"] and dt < 120


def test_3_axis_symmetric():
    res, dt = record(3, "axis-symmetric 2k-gon k=2..5", 60, lambda: verify.check_axis(range(2, 6)))
    assert all(r["isomorphic"] and r["round_trip"] for r in res["rows"])
    assert res["passed"] and dt < 60


def test_4_incidence():
    res, dt = record(4, "incidence rules", 60, verify.check_incidence)
    assert res["examples"] == [True, True, True]
    assert [r["mismatches"] for r in res["rows"]] == [0, 0]
    assert res["passed"] and dt < 60


def test_5_projection():
    res, dt = record(5, "projection n=2..4", 60, lambda: verify.check_projection(range(2, 5)))
    assert all(r["monotonicity_violations"] == 0 and r["unaccounted_traces"] == 0 for r in res["rows"])
    assert res["passed"] and dt < 60


def test_6_fibers():
    res, dt = record(6, "fibers (polygons n=3..5, torus, worked example)", 120, lambda: verify.check_fibers(range(3, 6)))
    assert all(not r["surface_failures"] and not r["oracle_mismatches"] for r in res["polygon"])
    assert all(r["passed"] for r in res["torus"])
    assert all(c["present"] for c in res["worked_example"]["cells"].values())
    assert res["passed"] and dt < 120


def test_7_morse_sweep():
    res, dt = record(7, "discrete Morse sweep k<=3, blocks<=2, q<=4", 300, lambda: verify.check_morse(3, 2, 4))
    assert len(res["rows"]) == (2 + 4 + 8) * 4
    for r in res["rows"]:
        assert r["acyclic"] and len(r["critical"]) == 1 and r["collapses_to_vertex"], r
    assert res["gradient_path"]["valid"]
    assert res["passed"] and dt < 300


@pytest.mark.slow
def test_8_determinism(tmp_path):
    def once(path):
        cmd = [sys.executable, "-m", "diagcx", "verify", "all", "--max-k", "3", "--max-q", "4", "--out", str(path)]
        return subprocess.run(cmd, capture_output=True).returncode

    def both():
        codes = [once(tmp_path / "a.json"), once(tmp_path / "b.json")]
        same = (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
        return {"passed": codes == [0, 0] and same, "codes": codes, "same": same}

    res, _ = record(8, "determinism of verify all", 600, both)
    assert res["codes"] == [0, 0] and res["same"]
