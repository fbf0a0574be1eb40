import json

import pytest
from hypothesis import given, strategies as st

from diagcx.labels import (
    LabelError,
    PartitionLabel,
    bd_complex,
    faces,
    faces_by_closure,
    facets,
    label_vertices,
    leq_labels,
    ordered_set_partitions,
)
from diagcx.polygon import enumerate_plain, enumerate_punctured
from diagcx.poset import face_poset, is_order_isomorphism, order_complex

L = PartitionLabel.of


@st.composite
def labels(draw, max_items=6):
    n = draw(st.integers(1, max_items))
    parts = list(ordered_set_partitions(range(n)))
    return PartitionLabel(draw(st.sampled_from(parts)))


def test_worked_comparisons():
    big = L({"d5", "d2"}, {"d3"}, {"d1", "d6"}, {"d4"}, {"d7"}, {"d8"})
    for small in (
        L({"d5", "d2"}, {"d3", "d1", "d6"}, {"d4", "d7"}),
        L({"d5", "d2"}, {"d3"}, {"d1", "d6"}, {"d4"}, {"d7"}),
        L({"d5", "d2"}, {"d3"}, {"d1", "d6"}, {"d4"}, {"d7", "d8"}),
    ):
        assert leq_labels(small, big)
        assert not leq_labels(big, small)


def test_non_faces():
    big = L({1}, {2}, {3})
    assert not leq_labels(L({2}, {1}), big)  # reordering is not a face
    assert not leq_labels(L({1}, {3}), big)  # skipping a middle block is not a face
    assert leq_labels(L({1, 2}, {3}), big)
    assert leq_labels(L({1}), big)


def test_label_validation():
    with pytest.raises(LabelError):
        PartitionLabel(())
    with pytest.raises(LabelError):
        L({1}, set(), {2})
    with pytest.raises(LabelError):
        L({1, 2}, {2})
    assert L(set(), {1}).p == 2  # an empty first block is allowed


@given(labels(), labels())
def test_leq_matches_prefix_union_oracle(a, b):
    assert leq_labels(a, b) == (set(a.prefix_unions()) <= set(b.prefix_unions()))


@given(labels())
def test_faces_equal_closure_of_generating_rules(lab):
    fs = faces(lab)
    assert fs == faces_by_closure(lab)
    assert all(leq_labels(f, lab) and f != lab for f in fs)


@given(labels())
def test_face_count(lab):
    # truncated to m blocks, then any of 2^(m-1) merge patterns
    assert len(faces(lab)) == sum(2 ** (m - 1) for m in range(1, lab.p + 1)) - 1


@given(labels())
def test_facets_have_one_block_less(lab):
    for f in facets(lab):
        assert f.p == lab.p - 1 and leq_labels(f, lab)


def test_ordered_partitions_are_fubini_numbers():
    assert [sum(1 for _ in ordered_set_partitions(range(n))) for n in range(6)] == [1, 1, 3, 13, 75, 541]


def test_json_round_trip():
    lab = L({(0, 2)}, {(0, 3), (1, 3)})
    obj = json.loads(lab.to_json(arrangement="pentagon", encode=list))
    assert obj["arrangement"] == "pentagon"
    back = PartitionLabel.from_obj(obj["blocks"], tuple)
    assert back == lab


@pytest.mark.parametrize("D", [enumerate_plain(5), enumerate_punctured(3)], ids=["pentagon", "punctured triangle"])
def test_bd_complex_is_the_order_complex(D):
    bd = bd_complex(D)
    assert sum(D.chain_counts()) == len(bd.labels)
    assert bd.complex == order_complex(D)
    fp = face_poset(bd.complex)
    to_simplex = {i: fp.index_of(tuple(sorted(label_vertices(l, bd.vertex_of)))) for i, l in enumerate(bd.poset.elements)}
    assert sorted(to_simplex.values()) == list(range(len(fp)))
    assert is_order_isomorphism(bd.poset, fp, to_simplex)


def test_bd_labels_over_pentagon():
    bd = bd_complex(enumerate_plain(5))
    by_dim = {}
    for lab in bd.labels:
        by_dim[lab.dim] = by_dim.get(lab.dim, 0) + 1
    # barycentric subdivision of a pentagon: 11 vertices, 20 edges, 10 triangles
    assert by_dim == {0: 11, 1: 20, 2: 10}
