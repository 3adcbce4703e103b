from fractions import Fraction

import pytest

from trophodge.fans import (
    Cone,
    ConeNotInFan,
    UnimodularFan,
    bergman_fan,
    bergman_modification_data,
    check_balancing,
    compactified_face_poset,
    product_fan,
    star_fan,
    star_subdivide,
    triangulate_by_blowups,
    tropical_modification,
)
from trophodge.matroids import Matroid, fano_matroid


def tp1_fan():
    return UnimodularFan.from_maximal_cones(1, [(1,), (-1,)], [[0], [1]])


def tp2_fan():
    return UnimodularFan.from_maximal_cones(
        2, [(1, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]]
    )


def test_bergman_u33_complete_six_cones():
    fan = bergman_fan(Matroid.uniform(3, 3))
    assert fan.lattice_rank == 2
    assert len(fan.rays) == 6
    assert len(fan.cones_of_dim(2)) == 6
    assert fan.is_complete()
    assert fan.is_unimodular()
    assert fan.is_valid_fan()


def test_bergman_u23_pure_dim1():
    fan = bergman_fan(Matroid.uniform(2, 3))
    assert fan.lattice_rank == 2
    assert len(fan.rays) == 3
    assert fan.dim == 1
    assert fan.is_pure()
    assert set(fan.rays) == {(1, 0), (0, 1), (-1, -1)}


def test_bergman_rank1_zero_fan():
    m = Matroid.uniform(1, 1)
    fan = bergman_fan(m)
    assert fan.dim == 0
    assert fan.cones == frozenset({Cone()})


def test_bergman_pure_and_balanced():
    for m in [Matroid.uniform(3, 4), Matroid.graphic([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]), fano_matroid()]:
        fan = bergman_fan(m)
        assert fan.dim == m.rank_total - 1
        assert fan.is_pure()
        assert fan.is_unimodular()
        assert check_balancing(fan)


def test_star_fan_of_zero_cone_is_fan():
    fan = tp2_fan()
    st = star_fan(fan, [])
    assert st.rays == fan.rays
    assert st.cones == fan.cones


def test_star_fan_of_ray_in_u33():
    fan = bergman_fan(Matroid.uniform(3, 3))
    flat0 = frozenset({0})
    rho = fan.ray_labels.index(flat0)
    st = star_fan(fan, [rho])
    assert st.lattice_rank == 1
    assert len(st.rays) == 2  # images of the flags through {0,1} and {0,2}
    assert st.is_complete()


def test_star_fan_of_maximal_cone():
    fan = tp2_fan()
    st = star_fan(fan, [0, 1])
    assert st.dim == 0


def test_star_of_star_matches_bergman_of_minor():
    # star of the ray of a rank-1 flat F in Bergman(M) is Bergman-like:
    # flags through F correspond to flags of the minor; compare cone counts
    m = Matroid.uniform(3, 4)
    fan = bergman_fan(m)
    flat = frozenset({0})
    rho = fan.ray_labels.index(flat)
    st = star_fan(fan, [rho])
    # flats strictly between {0} and E: rank-2 flats containing 0 -> 3 of them
    assert len(st.rays) == 3
    # the star is the Bergman fan of the U(2,3)-like minor: a tropical line
    assert st.dim == 1 and st.is_pure()
    assert check_balancing(st)


def test_product_fan():
    f = tp1_fan()
    p = product_fan(f, f)
    assert p.lattice_rank == 2
    assert len(p.rays) == 4
    assert len(p.cones_of_dim(2)) == 4
    assert p.is_complete()
    zero = UnimodularFan.from_maximal_cones(0, [], [[]])
    q = product_fan(f, zero)
    assert len(q.rays) == 2 and q.dim == 1


def test_star_subdivide_ray_identity():
    fan = tp2_fan()
    assert star_subdivide(fan, [0]) is fan


def test_star_subdivide_tp2():
    fan = tp2_fan()
    sub = star_subdivide(fan, [0, 1])
    assert len(sub.rays) == 4
    assert len(sub.cones_of_dim(2)) == 4
    assert sub.is_unimodular()
    assert sub.is_complete()
    with pytest.raises(ConeNotInFan):
        star_subdivide(fan, [0, 1, 2])


def test_star_subdivide_preserves_support_membership():
    fan = bergman_fan(Matroid.uniform(3, 4))
    sigma = next(iter(fan.cones_of_dim(2)))
    sub = star_subdivide(fan, sigma)
    assert sub.is_unimodular()
    pts = [
        tuple(sum(fan.rays[i][k] for i in c) for k in range(fan.lattice_rank))
        for c in fan.cones if c
    ]
    for p in pts:
        assert sub.contains_point(p)
        assert fan.contains_point(p)
    assert not sub.contains_point((5, -3, 1))  # not in the Bergman support


def test_compactified_poset_zero_fan():
    zero = UnimodularFan.from_maximal_cones(0, [], [[]])
    poset = compactified_face_poset(zero)
    assert len(poset.faces) == 1


def test_compactified_poset_single_ray():
    fan = UnimodularFan.from_maximal_cones(1, [(1,)], [[0]])
    poset = compactified_face_poset(fan)
    assert len(poset.faces) == 3  # vertex, segment, point at infinity


def test_compactified_poset_tp1():
    poset = compactified_face_poset(tp1_fan())
    assert len(poset.faces) == 5
    dims = sorted(poset.dim(f) for f in poset.faces)
    assert dims == [0, 0, 0, 1, 1]


def test_unimodularity_detection():
    quadrant = UnimodularFan.from_maximal_cones(2, [(1, 0), (0, 1)], [[0, 1]])
    assert quadrant.is_unimodular()
    skew = UnimodularFan.from_maximal_cones(2, [(1, 0), (1, 2)], [[0, 1]])
    assert not skew.is_unimodular()
    resolved = triangulate_by_blowups(skew)
    assert resolved.is_unimodular()
    assert resolved.contains_point((1, 1))
    assert resolved.contains_point((2, 2)) and resolved.contains_point((1, 2))


def test_tp1_long_modification_is_tropical_line():
    # modification of the line along the origin: 3-ray fan
    line = UnimodularFan.from_maximal_cones(1, [(1,), (-1,)], [[0], [1]])
    out = tropical_modification(line, [Cone()])
    assert out.lattice_rank == 2
    assert len(out.rays) == 3
    assert out.is_unimodular()
    assert out.is_pure() and out.dim == 1
    assert check_balancing(out)


def test_bergman_modification_u23():
    m = Matroid.uniform(2, 3)
    f_prime, delta, values = bergman_modification_data(m, 0)
    out = tropical_modification(f_prime, delta, values)
    target = bergman_fan(m)
    # coordinates: output has the a-coordinate appended last; the target drops
    # the largest label, so target coords = (x0, x1) vs output coords (x1, x0)
    def swap(p):
        return (p[1], p[0])
    for c in target.cones:
        if not c:
            continue
        p = tuple(sum(target.rays[i][k] for i in c) for k in range(2))
        assert out.contains_point(swap(p)), p
    for c in out.cones:
        if not c:
            continue
        p = tuple(sum(out.rays[i][k] for i in c) for k in range(2))
        assert target.contains_point(swap(p)), p


def test_bergman_modification_u34():
    m = Matroid.uniform(3, 4)
    f_prime, delta, values = bergman_modification_data(m, 0)
    out = tropical_modification(f_prime, delta, values)
    assert out.is_unimodular()
    target = bergman_fan(m)

    def to_target(p):
        # output coords (x1, x2, x0) vs target coords (x0, x1, x2)
        return (p[2], p[0], p[1])

    for c in out.cones:
        if not c:
            continue
        p = tuple(sum(out.rays[i][k] for i in c) for k in range(3))
        assert target.contains_point(to_target(p)), p
    for c in target.cones:
        if not c:
            continue
        p = tuple(sum(target.rays[i][k] for i in c) for k in range(3))
        q = (p[1], p[2], p[0])
        assert out.contains_point(q), p


def test_modification_with_trivial_divisor_lifts_fan():
    line = UnimodularFan.from_maximal_cones(1, [(1,), (-1,)], [[0], [1]])
    out = tropical_modification(line, [], values={0: 0, 1: 0})
    assert len(out.rays) == 3  # graph rays plus the vertical ray over 0
    lifted = {r for r in out.rays if r != (0, 1)}
    assert lifted == {(1, 0), (-1, 0)}
