import pytest
from hypothesis import given, settings, strategies as st

from diagcx.cells import RegularCW, SimplicialComplex
from diagcx.homology import homology
from diagcx.labels import PartitionLabel
from diagcx.morse import (
    CyclicFieldError,
    DiscreteVectorField,
    MatchingError,
    base_from_sizes,
    check_acyclic,
    collapse,
    corner_count,
    generate_preimage,
    greedy_collapse,
    is_closed_vpath,
    new,
    old,
    example_gradient_path,
    preimage_oracle,
    thmhalf_matching,
    validate_vpath,
)
from diagcx.ribbon import polygon_ribbon


def circle():
    # vertices 0,1,2; edges 3=01, 4=12, 5=20
    return RegularCW([0, 0, 0, 1, 1, 1], [(), (), (), (0, 1), (1, 2), (0, 2)])


def test_cyclic_field_is_detected():
    cw = circle()
    V = DiscreteVectorField([(0, 3), (1, 4), (2, 5)])
    ok, witness = check_acyclic(cw, V)
    assert not ok and is_closed_vpath(witness) and validate_vpath(cw, V, witness[:-1])
    with pytest.raises(CyclicFieldError):
        collapse(cw, V)


def test_acyclic_field_on_circle_leaves_two_critical_cells():
    cw = circle()
    V = DiscreteVectorField([(1, 3), (2, 4)])
    assert check_acyclic(cw, V) == (True, None)
    assert sorted(V.critical(len(cw))) == [0, 5]
    assert len(greedy_collapse(cw).critical) == 2


def test_invalid_matchings():
    cw = circle()
    with pytest.raises(MatchingError):
        DiscreteVectorField([(0, 3), (0, 5)])
    with pytest.raises(MatchingError):
        DiscreteVectorField([(2, 3)]).validate(cw)


def test_collapse_of_a_simplex():
    cw = SimplicialComplex([[0, 1, 2, 3]]).to_cw()
    res = greedy_collapse(cw)
    assert res.single_vertex and cw.dims[next(iter(res.critical))] == 0
    assert validate_vpath(cw, res.field, [res.order[0][1], res.order[0][2]])


def test_smallest_instance():
    inst = generate_preimage((1,), 1)
    assert inst.cells == [PartitionLabel.of({old(1), new(1)})]
    assert inst.critical_label == inst.cells[0]


sizes = st.lists(st.integers(1, 2), min_size=1, max_size=3).map(tuple)


@settings(max_examples=25)
@given(sizes, st.integers(1, 3))
def test_rule_generation_matches_filter(s, q):
    if sum(s) + q > 6:
        q = max(1, 6 - sum(s))
    inst = generate_preimage(s, q)
    assert set(inst.cells) == preimage_oracle(base_from_sizes(s), q)


@settings(max_examples=30)
@given(sizes, st.integers(1, 3))
def test_matching_is_acyclic_with_one_critical_cell(s, q):
    inst = generate_preimage(s, q)
    V, cw = thmhalf_matching(inst)
    V.validate(cw)
    assert check_acyclic(cw, V)[0]
    crit = V.critical(len(cw))
    assert [cw.keys[c] for c in crit] == [inst.critical_label]
    res = collapse(cw, V)
    assert res.single_vertex and res.critical == set(crit)
    assert homology(inst.simplicial_complex()).is_acyclic


def test_gradient_path():
    inst = generate_preimage((1, 1, 1), 3)
    V, cw = thmhalf_matching(inst)
    path = [cw.index[L] for L in example_gradient_path(inst)]
    assert len(path) == 6 and validate_vpath(cw, V, path)
    assert all(cw.dims[path[i + 1]] == cw.dims[path[i]] + 1 for i in range(0, 6, 2))
    with pytest.raises(ValueError):
        example_gradient_path(generate_preimage((1, 1), 3))


def test_bad_instances():
    with pytest.raises(ValueError):
        generate_preimage((1,), 0)
    with pytest.raises(ValueError):
        base_from_sizes((0, 1))


def test_instance_serialises():
    obj = generate_preimage((2, 1), 1).to_obj()
    assert obj["q"] == 1 and obj["base"] == [[["o", 1], ["o", 2]], [["o", 3]]]


def test_corner_count():
    rg = polygon_ribbon(4, [(0, 2)], puncture="P")
    assert corner_count(rg, "P") == 3
