import itertools
from math import gcd

from hypothesis import given, strategies as st

from diagcx.cells import SimplicialComplex, disjoint_union
from diagcx.homology import (
    ChainComplex,
    homology,
    is_contractible_certificate,
    smith_normal_form_diagonal,
    sphere_homology,
)

TORUS_7 = [sorted({i, (i + 1) % 7, (i + 3) % 7}) for i in range(7)] + [sorted({i, (i + 2) % 7, (i + 3) % 7}) for i in range(7)]
RP2_6 = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1), (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3)]


def sphere(d):
    return SimplicialComplex(itertools.combinations(range(d + 2), d + 1))


def test_spheres():
    for d in range(4):
        assert sphere_homology(homology(sphere(d)), d)


def test_torus_and_projective_plane():
    t = homology(SimplicialComplex(TORUS_7))
    assert t.betti == [1, 2, 1] and t.euler == 0 and not any(t.torsion)
    rp = homology(SimplicialComplex(RP2_6))
    assert rp.betti == [1, 0, 0] and rp.torsion[1] == [2]
    assert not rp.is_acyclic


def test_boundary_squares_to_zero():
    assert ChainComplex.from_complex(SimplicialComplex(TORUS_7)).check_dd_zero()


def test_cone_is_collapsible():
    cone = SimplicialComplex([[*f, 99] for f in RP2_6])
    assert is_contractible_certificate(cone, allow_homology=False).kind == "collapsible"
    assert not is_contractible_certificate(sphere(2))


def test_smith_normal_form_small():
    assert smith_normal_form_diagonal([[2, 4], [6, 8]]) == [2, 4]
    assert smith_normal_form_diagonal([[0, 0], [0, 0]]) == []
    assert smith_normal_form_diagonal([[3]]) == [3]


def _det_minor_gcd(m):
    """Rank and gcd of the largest nonvanishing minors."""
    r, g = 0, 0
    rows, cols = len(m), len(m[0])
    for k in range(min(rows, cols), 0, -1):
        g = 0
        for R in itertools.combinations(range(rows), k):
            for C in itertools.combinations(range(cols), k):
                d = _det([[m[i][j] for j in C] for i in R])
                g = gcd(g, abs(d))
        if g:
            r = k
            break
    return r, g


def _det(M):
    if len(M) == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * _det([row[:j] + row[j + 1:] for row in M[1:]]) for j in range(len(M)))


small_mats = st.integers(1, 3).flatmap(
    lambda r: st.integers(1, 3).flatmap(
        lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@given(small_mats)
def test_snf_matches_determinantal_divisors(m):
    facs = smith_normal_form_diagonal(m)
    r, g = _det_minor_gcd(m)
    assert len(facs) == r
    prod = 1
    for f in facs:
        prod *= f
    assert prod == (g if r else 1)
    assert all(facs[i + 1] % facs[i] == 0 for i in range(len(facs) - 1))


def _unimodular(n, ops):
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    for i, j, k in ops:
        i, j = i % n, j % n
        if i != j:
            U[i] = [a + k * b for a, b in zip(U[i], U[j])]
    return U


def _mul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


@given(small_mats, st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-2, 2)), max_size=6),
       st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-2, 2)), max_size=6))
def test_snf_invariant_under_unimodular_transforms(m, left, right):
    P = _unimodular(len(m), left)
    Q = _unimodular(len(m[0]), right)
    assert smith_normal_form_diagonal(_mul(_mul(P, m), Q)) == smith_normal_form_diagonal(m)


complexes = st.lists(st.sets(st.integers(0, 6), min_size=1, max_size=4), min_size=1, max_size=8).map(SimplicialComplex)


@given(complexes, complexes)
def test_betti_numbers_add_over_disjoint_union(a, b):
    ha, hb, hab = homology(a), homology(b), homology(disjoint_union(a, b))
    n = max(len(ha.betti), len(hb.betti))
    pad = lambda v: v + [0] * (n - len(v))  # noqa: E731
    assert hab.betti == [x + y for x, y in zip(pad(ha.betti), pad(hb.betti))]
    assert hab.euler == ha.euler + hb.euler


@given(complexes)
def test_euler_characteristic_matches_betti(K):
    h = homology(K)
    assert h.euler == sum((-1) ** k * b for k, b in enumerate(h.betti))


def test_report_serialisation():
    rep = homology(sphere(1))
    assert rep.to_dict()["betti"] == [1, 1]
    assert "euler characteristic: 0" in rep.table()
