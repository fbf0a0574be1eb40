import random

import pytest
from hypothesis import given, settings, strategies as st

from diagcx.fiber import add_loop, double_edge
from diagcx.polygon import enumerate_plain
from diagcx.ribbon import (
    MarkedSurfaceSpec,
    RibbonError,
    RibbonGraph,
    canonical_form,
    genus_and_faces,
    one_vertex_torus,
    polygon_ribbon,
    validate,
)

HEXAGON = [sorted(e.chords) for e in enumerate_plain(6).elements]


def without_puncture(rg):
    return RibbonGraph(rg.sigma, rg.iota, rg.boundary, rg.vertex_labels, {}, rg.dart_labels, rg.edge_colors)


def shuffled(rg, rnd):
    perm = list(range(rg.n_darts))
    rnd.shuffle(perm)
    return rg.relabel_darts(perm)


def test_square_with_diagonal():
    rg = polygon_ribbon(4, [(0, 2)])
    assert genus_and_faces(rg) == (0, 2, 1)
    assert validate(rg, MarkedSurfaceSpec(0, 1, 0, 0, (4,))).ok


def test_one_vertex_torus():
    rg = one_vertex_torus()
    assert genus_and_faces(rg) == (1, 1, 0)
    assert [len(f) for f in rg.faces] == [4]


def test_annulus():
    rg = RibbonGraph([[1, 0, 4], [3, 2, 5]], [(0, 1), (2, 3), (4, 5)], boundary={0, 1})
    assert genus_and_faces(rg) == (0, 1, 2)


def test_spec_checks():
    with pytest.raises(RibbonError):
        MarkedSurfaceSpec(0, 1, 0, 0, (1,))  # on the small-case deny-list
    with pytest.raises(RibbonError):
        MarkedSurfaceSpec(0, 2, 0, 0, (3,))
    s = MarkedSurfaceSpec(1, 0, 1, 1)
    assert s.N == 1 and s.euler_blowup() == -1
    bad = validate(polygon_ribbon(4, [(0, 2)]), MarkedSurfaceSpec(0, 1, 0, 1, (4,)))
    assert not bad.ok and bad.violations[0][0] == "spec"


def test_json_round_trip():
    rg = polygon_ribbon(5, [(0, 2)], puncture="P")
    back = RibbonGraph.from_json(rg.to_json())
    assert canonical_form(back) == canonical_form(rg)


def test_unpunctured_monogon_is_rejected():
    g, _ = add_loop(polygon_ribbon(4, [(0, 2)]), 1)
    report = validate(without_puncture(g))
    assert any(tag == "non-contractible" for tag, _ in report.violations)
    assert validate(g).ok


def test_parallel_to_boundary_is_rejected():
    rg = polygon_ribbon(4, [(0, 2)])
    g, _ = double_edge(rg, 1)  # copy of boundary edge 0 inside the polygon
    assert any(tag == "not homotopic to an edge" for tag, _ in validate(without_puncture(g)).violations)


@given(st.sampled_from([c for c in HEXAGON if c]), st.data())
def test_validate_rejects_duplicated_homotopy_classes(chords, data):
    rg = polygon_ribbon(6, chords)
    e = data.draw(st.sampled_from(rg.diagonal_edges()))
    x = rg.iota[e][data.draw(st.integers(0, 1))]
    g, _ = double_edge(rg, x)
    report = validate(without_puncture(g))
    assert not report.ok
    assert [tag for tag, _ in report.violations] == ["not homotopic"]


def test_every_plain_arrangement_is_admissible():
    for chords in HEXAGON:
        assert validate(polygon_ribbon(6, chords), MarkedSurfaceSpec(0, 1, 0, 0, (6,))).ok


@settings(max_examples=100)
@given(st.sampled_from(HEXAGON), st.integers(0, 2**32 - 1), st.booleans())
def test_canonical_form_is_stable_under_relabelling(chords, seed, punctured):
    rg = polygon_ribbon(6, chords, puncture="P" if punctured else None)
    assert canonical_form(shuffled(rg, random.Random(seed))) == canonical_form(rg)


def test_canonical_form_survives_a_hundred_shuffles():
    rg = one_vertex_torus()
    rnd = random.Random(0)
    ref = canonical_form(rg)
    assert all(canonical_form(shuffled(rg, rnd)) == ref for _ in range(100))


def test_canonical_form_separates_arrangements():
    forms = {canonical_form(polygon_ribbon(6, c)) for c in HEXAGON}
    assert len(forms) == len(HEXAGON)
    # rotating the labels gives a different labelled map
    a = polygon_ribbon(5, [(0, 2)])
    b = polygon_ribbon(5, [(1, 3)])
    assert canonical_form(a) != canonical_form(b)
