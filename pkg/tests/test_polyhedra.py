from fractions import Fraction

import pytest

from trophodge.fans import UnimodularFan
from trophodge.polyhedra import (
    Face,
    PLFunction,
    PolyComplex,
    RecessionNotFan,
    complex_is_unimodular,
    face_is_unimodular,
    fan_to_complex,
    intersect_halfspace,
    point_in_polyhedron,
    prune_generators,
    regular_subdivision_check,
    strictly_convex_certificate,
    unimodularity_decomposition,
)


def segment_complex(a=0, b=2):
    return PolyComplex.from_polyhedra(1, [(((a,), (b,)), ())])


def square_complex(side=1):
    s = side
    return PolyComplex.from_polyhedra(
        2, [(((0, 0), (s, 0), (0, s), (s, s)), ())]
    )


def tp1_long_edge():
    """Segment [0, 3] with rays to -infinity at 0 and +infinity at 3."""
    x = PolyComplex(1)
    x.add_polyhedron([(0,), (3,)], [])
    x.add_polyhedron([(0,)], [(-1,)])
    x.add_polyhedron([(3,)], [(1,)])
    return x


def test_prune_generators():
    vs, rs = prune_generators([(0, 0), (2, 0), (1, 0)], [(2, 0), (0, 3)])
    assert (Fraction(1), Fraction(0)) not in vs
    assert set(rs) == {(1, 0), (0, 1)}


def test_membership():
    assert point_in_polyhedron((1, 1), [(0, 0)], [(1, 0), (0, 1)])
    assert not point_in_polyhedron((-1, 0), [(0, 0)], [(1, 0), (0, 1)])


def test_face_enumeration_square():
    x = square_complex()
    assert len(x.faces_of_dim(0)) == 4
    assert len(x.faces_of_dim(1)) == 4
    assert len(x.faces_of_dim(2)) == 1
    assert x.is_valid()


def test_face_enumeration_strip():
    x = PolyComplex.from_polyhedra(2, [(((0, 0), (1, 0)), ((0, 1),))])
    # vertices, two vertical edge rays, bottom edge, and the strip itself
    assert len(x.faces_of_dim(0)) == 2
    assert len(x.faces_of_dim(1)) == 3
    assert len(x.faces_of_dim(2)) == 1


def test_halfspace_intersection_of_quadrant():
    out = intersect_halfspace([(Fraction(0), Fraction(0))], [(1, 0), (0, 1)], (1, 1), 2)
    vs, rs = out
    assert set(vs) == {(0, 0), (2, 0), (0, 2)}
    assert rs == []


def test_hyperplane_cut_segment():
    x = segment_complex(0, 2)
    cut = x.hyperplane_cut((1,), 1)
    assert len(cut.faces_of_dim(1)) == 2
    assert len(cut.faces_of_dim(0)) == 3


def test_hyperplane_cut_square_diagonal():
    x = square_complex()
    cut = x.hyperplane_cut((1, -1), 0)
    assert len(cut.faces_of_dim(2)) == 2
    assert len(cut.faces_of_dim(1)) == 5
    assert cut.is_valid()


def test_hyperplane_cut_missing_support():
    x = square_complex()
    cut = x.hyperplane_cut((1, 0), 5)
    assert len(cut.faces_of_dim(2)) == 1
    assert cut.supports_equal(x)


def test_recession_fan_of_compact_is_zero():
    fan = square_complex().recession_fan()
    assert fan.dim == 0


def test_recession_fan_of_fan_complex():
    fan = UnimodularFan.from_maximal_cones(2, [(1, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]])
    x = fan_to_complex(fan)
    rec = x.recession_fan()
    assert set(rec.rays) == set(fan.rays)
    assert len(rec.cones) == len(fan.cones)


def test_recession_not_a_fan_paper_example():
    # sigma1 = cone(e1, e2); translated sigma2 = e3 + cone(e1, e1+e2)
    x = PolyComplex(3)
    x.add_polyhedron([(0, 0, 0)], [(1, 0, 0), (0, 1, 0)])
    x.add_polyhedron([(0, 0, 1)], [(1, 0, 0), (1, 1, 0)])
    with pytest.raises(RecessionNotFan):
        x.recession_fan()


def test_pl_function_requires_affine():
    x = square_complex()
    vid = {v: i for i, v in enumerate(x.vertices)}
    values = {vid[(0, 0)]: 0, vid[(1, 0)]: 0, vid[(0, 1)]: 0, vid[(1, 1)]: 1}
    from trophodge.polyhedra import NotPiecewiseLinear

    with pytest.raises(NotPiecewiseLinear):
        PLFunction(x, {k: Fraction(v) for k, v in values.items()}, {})


def test_zero_function_strict_on_single_polyhedron():
    x = square_complex()
    f = PLFunction(x, {}, {})
    cert = strictly_convex_certificate(x, f)
    assert cert.strict


def test_affine_function_not_strict_on_two_cells():
    x = segment_complex(0, 2).hyperplane_cut((1,), 1)
    f = PLFunction(x, {i: v[0] for i, v in enumerate(x.vertices)}, {})
    cert = strictly_convex_certificate(x, f)
    assert not cert.strict  # globally affine: no separation at the middle vertex


def test_distance_function_certifies_hyperplane_cut():
    x = segment_complex(0, 2)
    y = x.hyperplane_cut((1,), 1)
    # f = |x - 1| is strictly convex relative to x
    f = PLFunction(y, {i: abs(v[0] - 1) for i, v in enumerate(y.vertices)}, {})
    assert regular_subdivision_check(x, y, f)
    # and f = 0 is not a regular-subdivision witness for a proper subdivision
    zero = PLFunction(y, {}, {})
    assert not regular_subdivision_check(x, y, zero)


def test_unimodularity_decomposition():
    x = PolyComplex.from_polyhedra(2, [(((0, 0), (1, 0)), ())])
    f = x.maximal_faces()[0]
    assert unimodularity_decomposition(x, f) == (True, True)
    y = PolyComplex.from_polyhedra(2, [(((0, 0), (2, 0)), ())])
    g = y.maximal_faces()[0]
    assert unimodularity_decomposition(y, g) == (False, True)
    z = PolyComplex(2)
    z.add_polyhedron([(0, 0), (1, 0)], [(1, 2)])
    h = z.maximal_faces()[0]
    assert unimodularity_decomposition(z, h) == (True, False)
    assert not face_is_unimodular(z, h)


def test_unimodularity_decomposition_agrees_with_direct():
    import random

    rng = random.Random(7)
    for _ in range(60):
        n = rng.choice([2, 3])
        v0 = tuple(rng.randint(-2, 2) for _ in range(n))
        d = rng.randint(0, min(2, n))
        verts = [v0]
        for _ in range(d):
            verts.append(tuple(a + rng.randint(-2, 2) for a in v0))
        rays = []
        r = rng.randint(0, n - d)
        for _ in range(r):
            vec = tuple(rng.randint(-2, 2) for _ in range(n))
            if any(vec):
                rays.append(vec)
        x = PolyComplex(n)
        try:
            top = x.add_polyhedron(verts, rays)
        except Exception:
            continue
        got = x.dim(top)
        if got != len(x.face_vertices(top)) - 1 + len(x.face_rays(top)):
            continue  # degenerate draw, not simplicial
        both = unimodularity_decomposition(x, top)
        assert (both[0] and both[1]) == face_is_unimodular(x, top)


def test_tp1_long_edge_valid():
    x = tp1_long_edge()
    assert x.is_valid()
    assert x.dimension == 1
    rec = x.recession_fan()
    assert set(rec.rays) == {(1,), (-1,)}
    assert not complex_is_unimodular(x)  # the long edge [0,3] is not primitive
