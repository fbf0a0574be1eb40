import itertools
import math

import pytest
from hypothesis import given, strategies as st

from diagcx.polygon import (
    AXIAL,
    CENTRAL,
    ChordError,
    ChordSet,
    PuncturedPolygonArrangement,
    all_diagonals,
    brute_force_f_vector,
    catalan,
    crosses,
    diagonal_kind,
    enumerate_axis_symmetric,
    enumerate_plain,
    enumerate_punctured,
    fold,
    independent_sets,
    plain_f_vector_oracle,
    plain_rank,
    punctured_diagonal_reps,
    punctured_f_vector_oracle,
    punctured_rank,
    unfold,
)
from diagcx.poset import graded_f_vector, is_order_isomorphism, poset_isomorphism


def geometric_cross(N, c1, c2):
    """Proper intersection of two chords of the regular N-gon, by orientation signs."""
    pt = lambda i: (math.cos(2 * math.pi * i / N), math.sin(2 * math.pi * i / N))  # noqa: E731

    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    if set(c1) & set(c2):
        return False
    a, b = map(pt, c1)
    c, d = map(pt, c2)
    return orient(a, b, c) * orient(a, b, d) < 0 and orient(c, d, a) * orient(c, d, b) < 0


def test_catalan_numbers():
    assert [catalan(m) for m in range(8)] == [1, 1, 2, 5, 14, 42, 132, 429]


@pytest.mark.parametrize("N", range(4, 10))
def test_crossing_matches_geometry(N):
    for c1, c2 in itertools.combinations(all_diagonals(N), 2):
        assert crosses(c1, c2) == geometric_cross(N, c1, c2)


@pytest.mark.parametrize("n", range(4, 8))
def test_plain_poset(n):
    p = enumerate_plain(n)
    minimal = p.minimal()
    assert len(minimal) == catalan(n - 2)
    assert all(len(p.elements[i].chords) == n - 3 for i in minimal)
    assert [len(p.elements[i].chords) for i in p.maximal()] == [0]
    assert list(graded_f_vector(p, plain_rank(p))) == list(plain_f_vector_oracle(n))


def test_pentagon_f_vector():
    p = enumerate_plain(5)
    assert graded_f_vector(p, plain_rank(p)) == (5, 5, 1)


@pytest.mark.parametrize("n", range(2, 6))
def test_punctured_poset(n):
    p = enumerate_punctured(n)
    fv = graded_f_vector(p, punctured_rank(p))
    assert fv == punctured_f_vector_oracle(n)
    # vertices of the cyclohedron: central binomial coefficients
    assert fv[0] == math.comb(2 * n - 2, n - 1)
    assert len(p.maximal()) == 1 and not p.elements[p.maximal()[0]].diagonals


def test_punctured_diagonal_kinds():
    reps = punctured_diagonal_reps(3)
    kinds = {r: diagonal_kind(3, r) for r in reps}
    assert sorted(kinds.values()).count("loop") == 3
    assert all(diagonal_kind(3, r) in ("loop", "outer", "inner") for r in reps)


@pytest.mark.parametrize("k", range(2, 6))
def test_axis_symmetric_is_associahedron(k):
    a, b = enumerate_axis_symmetric(k), enumerate_plain(k + 1)
    f = poset_isomorphism(a, b)
    assert f is not None and is_order_isomorphism(a, b, f)
    for e in a.elements:
        assert unfold(fold(e)) == e


def test_central_fold_round_trip():
    for e in enumerate_punctured(4).elements:
        assert fold(e.doubled) == e
        assert unfold(e) == e.doubled


def test_chord_set_validation():
    with pytest.raises(ChordError):
        ChordSet(5, frozenset({(0, 1)}))  # an edge
    with pytest.raises(ChordError):
        ChordSet(6, frozenset({(0, 3), (1, 4)}))  # crossing
    with pytest.raises(ChordError):
        ChordSet(6, frozenset({(0, 2)}), CENTRAL)  # not invariant
    cs = ChordSet(6, frozenset({(1, 4)}), AXIAL)
    assert ChordSet.from_obj(cs.to_obj()) == cs


@given(st.integers(1, 10), st.sets(st.tuples(st.integers(0, 9), st.integers(0, 9)), max_size=25))
def test_independent_sets_match_subset_filter(m, edges):
    bad = {(a, b) for a, b in edges if a < m and b < m and a != b}
    conflict = lambda x, y: (x, y) in bad or (y, x) in bad  # noqa: E731
    sets = independent_sets(list(range(m)), conflict)
    assert len(set(sets)) == len(sets)
    counts = [0] * (m + 1)
    for s in sets:
        counts[len(s)] += 1
    assert counts == brute_force_f_vector(list(range(m)), conflict)


def test_punctured_arrangement_arcs():
    x = PuncturedPolygonArrangement.from_reps(3, [(0, 3)])
    assert x.arcs() == [(0, 0, "loop")]
