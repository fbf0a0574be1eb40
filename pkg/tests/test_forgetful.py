import itertools

import pytest

from diagcx.fiber import add_loop
from diagcx.forgetful import (
    half_surgery_pi1,
    in_image_pi1,
    in_image_pi1_ribbon,
    project_pi,
    puncture_v_pi2,
    unfold_label,
)
from diagcx.labels import LabelError, PartitionLabel, bd_complex, leq_labels
from diagcx.polygon import enumerate_axis_symmetric, enumerate_plain, enumerate_punctured
from diagcx.ribbon import polygon_ribbon

L = PartitionLabel.of


def corpus_punctured(n):
    return bd_complex(enumerate_punctured(n))


def corpus_plain(n):
    return bd_complex(enumerate_plain(n))


def test_loop_becomes_contractible():
    img, trace = project_pi(L({(0, 4)}), 4)
    assert img == L(set())
    assert trace.dropped_contractible == [(0, 4)]
    assert trace.accounts_for(L({(0, 4)}))


def test_two_sides_of_a_chord_merge():
    lab = L({(0, 2)}, {(0, 6)})  # chord 02 passing either side of the puncture
    img, trace = project_pi(lab, 4)
    assert img == L({(0, 2)})
    assert trace.dedup_groups == [([(0, 2), (0, 6)], (0, 2))]
    assert trace.removed_empty_blocks == [2]


def test_edge_homotopic_is_dropped():
    img, trace = project_pi(L({(0, 2)}), 3)  # 02 is an edge of the triangle
    assert img == L(set()) and trace.dropped_edge_homotopic == [(0, 2)]


def test_invalid_input():
    with pytest.raises(LabelError):
        project_pi(L({(0, 9)}), 3)


@pytest.mark.parametrize("n", [3, 4])
def test_projection_is_monotone_and_traced(n):
    P = corpus_punctured(n).poset
    images = []
    for lab in P.elements:
        img, trace = project_pi(lab, n)
        assert trace.accounts_for(lab)
        if trace.is_empty:
            assert img.p == lab.p
        images.append(img)
    targets = set(corpus_plain(n).labels)
    assert set(images) == targets  # onto: every fiber is non-empty
    for a, b in itertools.product(range(len(P)), repeat=2):
        if P.leq(a, b):
            assert leq_labels(images[a], images[b])


def test_half_surgery_examples():
    assert half_surgery_pi1(L({(1, 4)}), 3) == L({(1, 3)})  # self-symmetric chord goes to v
    assert half_surgery_pi1(L({(0, 2), (3, 5)}), 3) == L({(0, 2)})
    with pytest.raises(LabelError):
        half_surgery_pi1(L({(0, 2)}), 3)


@pytest.mark.parametrize("k", [3, 4])
def test_half_surgery_is_an_order_isomorphism(k):
    src = bd_complex(enumerate_axis_symmetric(k)).labels
    dst = corpus_plain(k + 1).labels
    image = {lab: half_surgery_pi1(lab, k) for lab in src}
    assert len(set(image.values())) == len(src)
    assert set(image.values()) <= set(dst)
    for lab, out in image.items():
        assert unfold_label(out, k) == lab
    for a, b in itertools.product(src, repeat=2):
        assert leq_labels(a, b) == leq_labels(image[a], image[b])


def test_image_predicate():
    fan = L({(1, 4), (2, 4)})
    assert in_image_pi1(fan, 4)
    rg = polygon_ribbon(4, [(0, 2)])
    g, _ = add_loop(rg, rg.sigma[3][1])  # a loop at v = 3: the outside face meets v twice
    assert not in_image_pi1_ribbon(g, 3)
    with pytest.raises(LabelError):
        in_image_pi1(L({(0, 3)}), 3)  # an edge of the square


def test_pi2_examples():
    assert puncture_v_pi2(L({(1, 4)}, {(1, 3)}), 4) == L(set(), {(1, 3)})
    assert puncture_v_pi2(L({(2, 4)}, {(0, 2)}), 4) == L(set(), {(0, 2)})
    assert puncture_v_pi2(L({(1, 4), (2, 4)}), 4) == L(set())  # all diagonals at v: the top cell


@pytest.mark.parametrize("k", [3, 4])
def test_pi2_is_monotone(k):
    P = corpus_plain(k + 1).poset
    images = [puncture_v_pi2(lab, k) for lab in P.elements]
    for a in range(len(P)):
        for b in P.up_covers[a]:
            assert leq_labels(images[a], images[b])


@pytest.mark.xfail(strict=True, reason="outer diagonals only: loops and inner diagonals are never hit")
def test_pi2_after_pi1_is_onto_the_punctured_labels():
    k = 3
    hit = {puncture_v_pi2(half_surgery_pi1(lab, k), k) for lab in bd_complex(enumerate_axis_symmetric(k)).labels}
    assert hit == set(corpus_punctured(k).labels)
