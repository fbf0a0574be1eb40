import itertools
import json
import random

import pytest
from hypothesis import given, strategies as st

from diagcx.poset import (
    Poset,
    PosetError,
    antichain,
    chain,
    face_poset,
    graded_f_vector,
    is_order_isomorphism,
    order_complex,
    poset_isomorphism,
)
from diagcx.cells import SimplicialComplex


def brute_closure(n, covers):
    """Reachability by repeated relaxation."""
    reach = {a: {a} for a in range(n)}
    changed = True
    while changed:
        changed = False
        for a, b in covers:
            for x in range(n):
                if a in reach[x] and not reach[b] <= reach[x]:
                    reach[x] |= reach[b]
                    changed = True
    return reach


@st.composite
def random_posets(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda t: t[0] < t[1]), max_size=20))
    # the transitive reduction of an acyclic relation on 0..n-1
    return Poset.from_relation(list(range(n)), lambda a, b: a == b or b in brute_closure(n, pairs)[a])


def test_chain_and_antichain():
    c = chain(4)
    assert c.leq(0, 3) and not c.leq(3, 0)
    assert c.minimal() == [0] and c.maximal() == [3]
    a = antichain(3)
    assert a.minimal() == a.maximal() == [0, 1, 2]
    assert not a.leq(0, 1)


def test_rejects_cycles_and_redundant_covers():
    with pytest.raises(PosetError):
        Poset([0, 1], [(0, 1), (1, 0)])
    with pytest.raises(PosetError):
        Poset([0, 1, 2], [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(PosetError):
        Poset([0], [(0, 5)])


@given(random_posets())
def test_leq_matches_brute_force_closure(p):
    reach = brute_closure(len(p), p.covers)
    for a in range(len(p)):
        for b in range(len(p)):
            assert p.leq(a, b) == (b in reach[a])


@given(random_posets(), st.randoms(use_true_random=False))
def test_isomorphism_preserves_order(p, rnd):
    perm = list(range(len(p)))
    rnd.shuffle(perm)
    q = Poset([perm.index(i) for i in range(len(p))], [(perm[a], perm[b]) for a, b in p.covers])
    f = poset_isomorphism(p, q)
    assert f is not None and is_order_isomorphism(p, q, f)
    for _ in range(20):
        a, b = rnd.randrange(len(p)), rnd.randrange(len(p))
        assert p.leq(a, b) == q.leq(f[a], f[b])


def test_non_isomorphic_posets():
    assert poset_isomorphism(chain(3), antichain(3)) is None
    v = Poset([0, 1, 2], [(0, 1), (0, 2)])
    w = Poset([0, 1, 2], [(0, 2), (1, 2)])
    assert poset_isomorphism(v, w) is None


@given(random_posets(max_n=7))
def test_chain_counts_match_enumeration(p):
    counts = p.chain_counts()
    for k in range(1, len(p) + 1):
        brute = sum(
            1 for s in itertools.combinations(range(len(p)), k)
            if all(p.leq(a, b) or p.leq(b, a) for a, b in itertools.combinations(s, 2))
        )
        assert (counts[k - 1] if k - 1 < len(counts) else 0) == brute


def test_order_complex_of_chain_is_a_simplex():
    K = order_complex(chain(4))
    assert K.facets == frozenset([frozenset(range(4))])


def test_face_poset_of_triangle():
    P = face_poset(SimplicialComplex([[0, 1, 2]]))
    assert len(P) == 7
    assert graded_f_vector(P, P.height) == (3, 3, 1)


def test_graded_f_vector_checks_monotonicity():
    with pytest.raises(PosetError):
        graded_f_vector(chain(2), [1, 0])


def test_json_and_dot_round_trip():
    p = Poset(["a", "b", "c"], [(0, 1), (0, 2)])
    q = Poset.from_json(p.to_json())
    assert q.elements == p.elements and q.covers == p.covers
    assert json.loads(p.to_json())["covers"] == [[0, 1], [0, 2]]
    dot = p.to_dot()
    assert dot.startswith("digraph") and "n0 -> n1;" in dot


def test_induced_subposet_keeps_order():
    p = chain(5)
    q, ids = p.induced([0, 2, 4])
    assert ids == [0, 2, 4]
    assert q.covers == frozenset({(0, 1), (1, 2)})


def test_isomorphism_random_large():
    rnd = random.Random(3)
    n = 40
    rel = {(a, b) for a in range(n) for b in range(a + 1, n) if rnd.random() < 0.1}
    p = Poset.from_relation(list(range(n)), lambda a, b: a == b or b in brute_closure(n, rel)[a])
    f = poset_isomorphism(p, p)
    assert f is not None and is_order_isomorphism(p, p, f)
