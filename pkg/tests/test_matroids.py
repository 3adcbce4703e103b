from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trophodge.matroids import (
    ElementNotInGroundSet,
    Matroid,
    NotSimple,
    fano_matroid,
    parallel_connection,
)

TRIANGLE = [(0, 1), (1, 2), (2, 0)]


def brute_force_rank(edges, subset):
    """Oracle: maximal size of a cycle-free subset of the given edges."""
    best = 0
    idx = list(subset)
    for r in range(len(idx), -1, -1):
        for comb in combinations(idx, r):
            verts = {v for k in comb for v in edges[k]}
            vi = {v: i for i, v in enumerate(verts)}
            parent = list(range(len(verts)))

            def find(a):
                while parent[a] != a:
                    a = parent[a]
                return a

            acyclic = True
            for k in comb:
                u, v = edges[k]
                ru, rv = find(vi[u]), find(vi[v])
                if ru == rv:
                    acyclic = False
                    break
                parent[ru] = rv
            if acyclic:
                return r
    return best


def test_rank_examples():
    u33 = Matroid.uniform(3, 3)
    assert u33.rank({0, 1}) == 2
    tri = Matroid.graphic(TRIANGLE)
    # oracle first: spanning forests of the triangle have at most 2 edges
    assert brute_force_rank(TRIANGLE, {0, 1, 2}) == 2
    assert tri.rank({0, 1, 2}) == 2
    assert tri.rank(set()) == 0
    with pytest.raises(ElementNotInGroundSet):
        tri.rank({7})


def test_closure_examples():
    u23 = Matroid.uniform(2, 3)
    assert u23.closure({0}) == {0}
    tri = Matroid.graphic(TRIANGLE)
    assert tri.closure({0, 1}) == {0, 1, 2}
    assert tri.closure({0, 1, 2}) == {0, 1, 2}


def test_flats_u33():
    flats = Matroid.uniform(3, 3).flats()
    assert set(flats.proper_flats) == {
        frozenset({0}),
        frozenset({1}),
        frozenset({2}),
        frozenset({0, 1}),
        frozenset({0, 2}),
        frozenset({1, 2}),
    }


def test_flats_u23():
    flats = Matroid.uniform(2, 3).flats()
    assert set(flats.proper_flats) == {frozenset({i}) for i in range(3)}


def brute_force_flats(m):
    """Oracle: flats are the fixed points of closure over all subsets."""
    out = set()
    ground = list(m.ground_set)
    for r in range(len(ground) + 1):
        for comb in combinations(ground, r):
            s = frozenset(comb)
            if m.closure(s) == s:
                out.add(s)
    return out


def test_flats_against_bruteforce():
    for m in [Matroid.uniform(3, 4), Matroid.graphic([(0, 1), (1, 2), (2, 0), (0, 3)]), fano_matroid()]:
        lattice = m.flats()
        assert set(lattice.flats) == brute_force_flats(m)


def test_u34_proper_flat_count():
    # oracle (enumerate closures of all subsets) gives 4 + 6 = 10
    m = Matroid.uniform(3, 4)
    proper = {f for f in brute_force_flats(m) if f and f != set(m.ground_set)}
    assert len(proper) == 10
    assert len(m.flats().proper_flats) == 10


def test_flats_not_simple():
    parallel = Matroid([0, 1], [frozenset({0}), frozenset({1})], check=False)
    with pytest.raises(NotSimple):
        parallel.flats()


def test_minors():
    u34 = Matroid.uniform(3, 4)
    assert u34.delete(0).is_isomorphic_to_uniform(3, 3)
    assert u34.contract(0).is_isomorphic_to_uniform(2, 3)


K4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def test_graphic_contraction_matches_contracted_graph():
    m = Matroid.graphic(K4)
    contracted = m.contract(0)
    # oracle: contract edge (0,1) in K4 and list the spanning trees directly
    merged = [(u if u != 1 else 0, v if v != 1 else 0) for (u, v) in K4[1:]]
    oracle = Matroid.graphic(merged, labels=list(range(1, 6)))
    assert contracted.bases == oracle.bases


def test_parallel_connection_free_matroids():
    u22 = Matroid.uniform(2, 2)
    glued, _, _ = parallel_connection(u22, 1, u22, 0)
    assert glued.rank_total == 3
    assert len(glued.ground_set) == 3
    assert glued.is_isomorphic_to_uniform(3, 3)


def test_parallel_connection_single_element():
    u11 = Matroid.uniform(1, 1)
    m = Matroid.uniform(2, 3)
    glued, _, _ = parallel_connection(m, 0, u11, 0)
    assert glued.rank_total == m.rank_total
    assert len(glued.ground_set) == 3


def test_parallel_connection_u23_u23():
    m = Matroid.uniform(2, 3)
    glued, _, _ = parallel_connection(m, 0, m, 0)
    assert len(glued.ground_set) == 5
    assert glued.rank_total == 3


def test_fano():
    f = fano_matroid()
    assert f.rank_total == 3
    assert len(f.bases) == 35 - 7
    assert f.is_simple()


subset3 = st.sets(st.integers(min_value=0, max_value=5), max_size=6)


@given(subset3, subset3)
@settings(max_examples=60, deadline=None)
def test_rank_submodular(a, b):
    m = Matroid.graphic(K4)
    assert m.rank(a) + m.rank(b) >= m.rank(a | b) + m.rank(a & b)


@given(subset3)
@settings(max_examples=60, deadline=None)
def test_closure_idempotent_extensive(a):
    m = Matroid.graphic(K4)
    cl = m.closure(a)
    assert a <= cl
    assert m.closure(cl) == cl
