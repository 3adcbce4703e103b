"""The triangulation toolkit: blow-ups, external cones, pencil slicing,
unimodular refinement of compact parts, and the two pipeline theorems
(quasi-projective unimodular triangulation; unimodular triangulation
preserving the recession fan).

Fans are handled as conical complexes (single vertex at the origin) so that
non-simplicial intermediate cones are representable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .lattice import interior_lattice_witness
from .lp import max_margin
from .polyhedra import (
    CompactPartTooHard,
    ConvexityCertificate,
    Face,
    InvalidComplex,
    PLFunction,
    PolyComplex,
    RecessionNotUnimodular,
    complex_is_unimodular,
    face_inside_polyhedron,
    face_is_unimodular,
    point_in_polyhedron,
    strictly_convex_certificate,
)
from .rationals import QMatrix, primitive_vector, qvec


def _origin(n: int):
    return tuple(Fraction(0) for _ in range(n))


# -- blow-ups and stellar subdivisions -------------------------------------------


def conical_blow_up(x: PolyComplex, point: Sequence) -> PolyComplex:
    """Blow-up of a conical complex at a nonzero point: every cone containing
    the point is replaced following the sigma_(x) rule."""
    p = qvec(point)
    if all(e == 0 for e in p):
        raise ValueError("blow-up point must be nonzero")
    out = PolyComplex(x.n, x.scale_k)
    prim = primitive_vector(p)
    for f in x.maximal_faces():
        if not point_in_polyhedron(p, x.face_vertices(f), x.face_rays(f)):
            x._transfer_face_closure(out, f)
            continue
        for g in x.faces:
            if x.leq(g, f) and not point_in_polyhedron(p, x.face_vertices(g), x.face_rays(g)):
                out.add_polyhedron(x.face_vertices(g), list(x.face_rays(g)) + [prim])
    return out


def stellar_subdivide(x: PolyComplex, point: Sequence) -> PolyComplex:
    """Affine stellar subdivision at a point of the support."""
    p = qvec(point)
    out = PolyComplex(x.n, x.scale_k)
    for f in x.maximal_faces():
        if not point_in_polyhedron(p, x.face_vertices(f), x.face_rays(f)):
            x._transfer_face_closure(out, f)
            continue
        for g in x.faces:
            if x.leq(g, f) and not point_in_polyhedron(p, x.face_vertices(g), x.face_rays(g)):
                out.add_polyhedron(list(x.face_vertices(g)) + [p], x.face_rays(g))
    return out


def triangulate_conical(x: PolyComplex) -> PolyComplex:
    """Triangulation by blow-ups at interior points of the minimal
    non-simplicial cones (the sum of their primitive generators)."""
    current = x
    guard = 0
    while True:
        bad = None
        for f in sorted(current.faces, key=lambda f: (len(f.r), f.key())):
            rays = current.face_rays(f)
            if rays and QMatrix(rays).rank() != len(rays):
                bad = f
                break
        if bad is None:
            return current
        rays = current.face_rays(bad)
        witness = tuple(sum(r[i] for r in rays) for i in range(current.n))
        current = conical_blow_up(current, witness)
        guard += 1
        if guard > 200:
            raise InvalidComplex("triangulation did not terminate")


def unimodularize_conical(x: PolyComplex) -> PolyComplex:
    """Resolve a simplicial conical complex to a unimodular one by blow-ups at
    lattice witnesses in the fundamental parallelepipeds."""
    current = x
    guard = 0
    while True:
        bad = None
        for f in sorted(current.faces, key=lambda f: (len(f.r), f.key())):
            rays = current.face_rays(f)
            if rays and not face_is_unimodular(current, f):
                bad = f
                break
        if bad is None:
            return current
        witness = interior_lattice_witness(current.face_rays(bad))
        assert witness is not None
        current = conical_blow_up(current, witness)
        guard += 1
        if guard > 500:
            raise InvalidComplex("unimodularization did not terminate")


# -- external cone and slicing ------------------------------------------------------


def external_cone(x: PolyComplex) -> PolyComplex:
    """The cone over {1} x X in R^{n+1} (coordinate x0 first), together with
    the recession cones in the hyperplane x0 = 0."""
    out = PolyComplex(x.n + 1, x.scale_k)
    for f in x.maximal_faces():
        gens = []
        for v in x.face_vertices(f):
            gens.append(primitive_vector((Fraction(1),) + tuple(v)))
        for r in x.face_rays(f):
            gens.append((0,) + tuple(r))
        out.add_polyhedron([_origin(x.n + 1)], gens)
    return out


def slice_at_height_one(x: PolyComplex) -> PolyComplex:
    """Intersect a simplicial conical complex in R^{n+1} with {x0 = 1} and
    project away the first coordinate."""
    out = PolyComplex(x.n - 1, x.scale_k)
    for f in x.maximal_faces():
        verts, rays = [], []
        below = False
        for r in x.face_rays(f):
            if r[0] > 0:
                verts.append(tuple(Fraction(c, r[0]) for c in r[1:]))
            elif r[0] == 0:
                rays.append(r[1:])
            else:
                below = True  # the cone lies in x0 <= 0: empty slice
                break
        if verts and not below:
            out.add_polyhedron(verts, rays)
    return out


# -- unimodular refinement of the compact part ---------------------------------------


def _lattice_points_in_face(x: PolyComplex, f: Face, k: int) -> list:
    """Points of (1/k) Z^n in a compact face, excluding its vertices."""
    verts = x.face_vertices(f)
    lo = [min(v[i] for v in verts) for i in range(x.n)]
    hi = [max(v[i] for v in verts) for i in range(x.n)]
    out = []

    def rec(i, acc):
        if i == x.n:
            p = tuple(acc)
            if p not in verts and point_in_polyhedron(p, verts, []):
                out.append(p)
            return
        start = (lo[i] * k).__ceil__()
        stop = (hi[i] * k).__floor__()
        for c in range(start, stop + 1):
            rec(i + 1, acc + [Fraction(c, k)])

    rec(0, [])
    return out


def refine_compact_part(x: PolyComplex, max_dilation: int = 8) -> tuple[PolyComplex, int]:
    """A unimodular triangulation of the compact subcomplex of ``x`` with
    respect to (1/k) Z^n for some k, by stellar subdivisions at lattice
    points.  Exact for compact parts of dimension <= 2; higher dimensions get
    a bounded search and may raise CompactPartTooHard.
    """
    compact = PolyComplex(x.n, x.scale_k)
    for f in x.maximal_faces():
        cf = Face(f.v, frozenset())
        compact.add_polyhedron(x.face_vertices(cf), [])
    k = x.scale_k
    for v in compact.vertices:
        for c in v:
            k = k * c.denominator // gcd(k, c.denominator)
    dim_f = compact.dimension
    base_k = k
    while True:
        compact.scale_k = k
        current = compact
        progress = True
        guard = 0
        while progress:
            bad = next(
                (f for f in current.maximal_faces() if not face_is_unimodular(current, f)), None
            )
            if bad is None:
                return current, k
            nverts = len(bad.v)
            if current.dim(bad) != nverts - 1:
                # non-simplicial: pull the first vertex (stellar at a vertex)
                current = stellar_subdivide(current, current.face_vertices(bad)[0])
                current.scale_k = k
                guard += 1
                continue
            pts = _lattice_points_in_face(current, bad, k)
            if not pts:
                progress = False
                break
            current = stellar_subdivide(current, pts[0])
            current.scale_k = k
            guard += 1
            if guard > 2000:
                raise CompactPartTooHard("stellar refinement did not terminate")
        if dim_f <= 2:
            raise CompactPartTooHard("no lattice point found in dimension <= 2 (unexpected)")
        if k // base_k >= max_dilation:
            raise CompactPartTooHard(
                f"no unimodular triangulation found up to dilation {max_dilation}"
            )
        k *= 2


def extend_by_recession(x1: PolyComplex, yf: PolyComplex, k: int) -> PolyComplex:
    """pi_f^{-1}(Y_f): combine the refined compact part with the recession
    cones of the faces of x1."""
    out = PolyComplex(x1.n, k)
    for delta in x1.maximal_faces():
        delta_f = Face(delta.v, frozenset())
        rays = x1.face_rays(delta)
        for gamma in yf.faces:
            if face_inside_polyhedron(yf, gamma, x1, delta_f):
                out.add_polyhedron(yf.face_vertices(gamma), rays)
    return out


# -- the pipeline theorems -------------------------------------------------------------


@dataclass
class TriangulationResult:
    complex: PolyComplex
    scale_k: int
    recession_preserved: bool
    function: Optional[PLFunction] = None
    certificate: Optional[ConvexityCertificate] = None
    recession_function_slopes: Optional[dict] = None
    recession_certificate: Optional[ConvexityCertificate] = None


def recession_preserving_subdivision(x: PolyComplex) -> TriangulationResult:
    """Unimodular triangulation with the same recession fan (requires the
    recession fan to exist and be unimodular)."""
    fan_inf = x.recession_fan()
    if not fan_inf.is_unimodular():
        raise RecessionNotUnimodular("recession fan must be unimodular")
    sigma1 = external_cone(x)
    sigma2 = triangulate_conical(sigma1)
    sigma3 = unimodularize_conical(sigma2)
    x1 = slice_at_height_one(sigma3)
    same = _recession_equal(x1, fan_inf)
    assert same, "pipeline must preserve the recession fan"
    yf, k = refine_compact_part(x1)
    y = extend_by_recession(x1, yf, k)
    assert y.supports_equal(x)
    assert y.is_simplicial()
    assert complex_is_unimodular(y)
    assert _recession_equal(y, fan_inf)
    return TriangulationResult(y, k, True)


def _recession_equal(y: PolyComplex, fan) -> bool:
    y_cones = {
        frozenset(y.rays[i] for i in f.r) for f in y.faces
    }
    fan_cones = {
        frozenset(fan.rays[i] for i in c) for c in fan.cones
    }
    return y_cones == fan_cones


def _cone_hyperplanes(gens: list[tuple]) -> list[tuple]:
    """Hyperplanes through the origin cutting out cone(gens): the span's
    annihilator together with the facet hyperplanes."""
    m = len(gens[0])
    out = []
    if not any(any(g) for g in gens):
        gens = []
    rank = QMatrix(gens).rank() if gens else 0
    if gens:
        for vec in QMatrix(gens).kernel_basis():
            out.append(primitive_vector(vec))
    else:
        for i in range(m):
            e = [0] * m
            e[i] = 1
            out.append(tuple(e))
        return out
    # facets: subsets of generators spanning codim-1 with the rest on one side
    from itertools import combinations

    if rank >= 1:
        for size in range(rank):
            for sub in combinations(range(len(gens)), size):
                eqs = [(gens[i], 0) for i in sub]
                ges = [(gens[i], 0) for i in range(len(gens)) if i not in sub]
                t, witness = max_margin(m, eqs, ges)
                if t > 0 and witness is not None and any(w != 0 for w in witness):
                    out.append(primitive_vector(witness))
    canon = []
    for h in out:
        first = next((c for c in h if c != 0), None)
        if first is None:
            continue
        if first < 0:
            h = tuple(-c for c in h)
        if h not in canon:
            canon.append(h)
    return canon


def cube_face_fan_complex(m: int) -> PolyComplex:
    """The complete fan over the proper faces of the cube [-1, 1]^m."""
    out = PolyComplex(m)
    for axis in range(m):
        for sign in (1, -1):
            gens = []

            def rec(i, acc):
                if i == m:
                    gens.append(tuple(acc))
                    return
                if i == axis:
                    rec(i + 1, acc + [sign])
                else:
                    rec(i + 1, acc + [1])
                    rec(i + 1, acc + [-1])

            rec(0, [])
            out.add_polyhedron([_origin(m)], gens)
    return out


def find_strictly_convex_function(y: PolyComplex) -> Optional[dict]:
    """Ray values of a strictly convex cone-wise linear function on the
    conical simplicial complex ``y``, by one global margin LP, or None.

    Variables: a value per ray, an affine functional per non-maximal face,
    and a common margin t (capped at 1); strict convexity holds iff the
    optimal t is positive.
    """
    faces = [f for f in y.faces]
    maximal = set(f.key() for f in y.maximal_faces())
    duty = [f for f in faces if f.key() not in maximal]
    nrays = len(y.rays)
    m = y.n
    # variable layout: [y_0..y_{nrays-1}, (l_f)_f, t]
    n_vars = nrays + m * len(duty) + 1
    eqs, ges = [], []
    for fi, f in enumerate(duty):
        base = nrays + m * fi
        vs, rs = y.star_generators(f)
        for rid in sorted(f.r):
            row = [Fraction(0)] * n_vars
            for i in range(m):
                row[base + i] = Fraction(y.rays[rid][i])
            row[rid] -= 1
            eqs.append((row, 0))
        for rid in rs:
            row = [Fraction(0)] * n_vars
            row[rid] = Fraction(1)
            for i in range(m):
                row[base + i] = -Fraction(y.rays[rid][i])
            row[n_vars - 1] = -1  # minus t
            ges.append((row, 0))
    # cap: t <= 1
    cap_row = [Fraction(0)] * n_vars
    cap_row[-1] = -1
    ges.append((cap_row, -1))
    from .lp import LinearProgram, OPTIMAL

    lp = LinearProgram(n_vars)
    for row, rhs in eqs:
        lp.add_eq(row, rhs)
    for row, rhs in ges:
        lp.add_ge(row, rhs)
    obj = [0] * n_vars
    obj[-1] = 1
    lp.set_objective(obj)
    res = lp.solve()
    if res.status != OPTIMAL or res.value <= 0:
        return None
    return {i: res.x[i] for i in range(nrays)}


def _is_conical(x: PolyComplex) -> bool:
    origin = _origin(x.n)
    return x.vertices == [origin]


def _is_compact(x: PolyComplex) -> bool:
    return not x.rays


def quasiprojective_unimodular_triangulation(x: PolyComplex) -> TriangulationResult:
    """Quasi-projective unimodular triangulation with certificate.

    General pipeline: complete quasi-projective cube fan in R^{n+1}, sliced
    by a pencil of hyperplanes for the external cone of X and by x0 = 0, then
    triangulated, unimodularized, sliced back at x0 = 1, restricted to the
    support of X, and refined on the compact part.  Fan inputs skip the cone
    construction (the same pipeline one dimension down); compact inputs skip
    straight to the stellar lattice refinement.  A strictly convex cone-wise
    linear function on the external cone of the result is found by exact LP;
    restricting it to heights one and zero yields the certificate function
    and its recession part.
    """
    if _is_conical(x):
        y = _quasiprojective_fan(x)
        k = 1
    elif _is_compact(x):
        y, k = refine_compact_part(x)
    else:
        m = x.n + 1
        coneup = external_cone(x)
        hyperplanes: list[tuple] = []
        for f in coneup.faces:
            for h in _cone_hyperplanes(coneup.face_rays(f) or [tuple([0] * m)]):
                if h not in hyperplanes:
                    hyperplanes.append(h)
        h0 = tuple([1] + [0] * (m - 1))
        if h0 not in hyperplanes:
            hyperplanes.append(h0)

        sigma = cube_face_fan_complex(m)
        for h in hyperplanes:
            sigma = sigma.hyperplane_cut(h, 0)
        sigma = triangulate_conical(sigma)
        sigma = unimodularize_conical(sigma)
        x1 = slice_at_height_one(sigma)
        x2 = x1.restriction_to(x)
        assert x2.supports_equal(x), "sliced complex must cover the input support"

        yf, k = refine_compact_part(x2)
        y = extend_by_recession(x2, yf, k)
    assert y.supports_equal(x)
    assert y.is_simplicial()
    assert complex_is_unimodular(y)

    recession_ok = True
    try:
        fan_y = y.recession_fan()
        fan_x = x.recession_fan()
        recession_ok = _recession_equal(y, fan_x)
        del fan_y
    except Exception:
        recession_ok = False

    # certificate: strictly convex function on the external cone of y
    cone_y = external_cone(y)
    values = find_strictly_convex_function(cone_y)
    assert values is not None, "pipeline output must be quasi-projective"
    vertex_values: dict[int, Fraction] = {}
    ray_slopes: dict[int, Fraction] = {}
    for rid, r in enumerate(cone_y.rays):
        if r[0] > 0:
            v = tuple(Fraction(c, r[0]) for c in r[1:])
            vertex_values[y.vertices.index(v)] = values[rid] / r[0]
        else:
            tail = r[1:]
            if tail in y.rays:
                ray_slopes[y.rays.index(tail)] = values[rid]
    f = PLFunction(y, vertex_values, ray_slopes)
    cert = strictly_convex_certificate(y, f)
    assert cert.strict, "certificate must be strict by construction"

    # recession part: slopes induce a strictly convex function on Y_infinity
    fan_inf = y.recession_fan()
    from .polyhedra import fan_to_complex

    inf_complex = fan_to_complex(fan_inf)
    inf_values: dict[int, Fraction] = {}
    for rid, r in enumerate(inf_complex.rays):
        src = y.rays.index(r)
        inf_values[rid] = ray_slopes.get(src, Fraction(0))
    f_inf = PLFunction(inf_complex, {0: Fraction(0)}, inf_values)
    cert_inf = strictly_convex_certificate(inf_complex, f_inf)
    assert cert_inf.strict, "recession function must be strictly convex"

    return TriangulationResult(
        y,
        k,
        recession_ok,
        function=f,
        certificate=cert,
        recession_function_slopes=inf_values,
        recession_certificate=cert_inf,
    )


def _quasiprojective_fan(x: PolyComplex) -> PolyComplex:
    """The fan case: slice the cube fan by the input cones' hyperplanes,
    triangulate, unimodularize, restrict to the support."""
    m = x.n
    hyperplanes: list[tuple] = []
    for f in x.faces:
        for h in _cone_hyperplanes(x.face_rays(f) or [tuple([0] * m)]):
            if h not in hyperplanes:
                hyperplanes.append(h)
    sigma = cube_face_fan_complex(m)
    for h in hyperplanes:
        sigma = sigma.hyperplane_cut(h, 0)
    sigma = triangulate_conical(sigma)
    sigma = unimodularize_conical(sigma)
    out = sigma.restriction_to(x)
    assert out.supports_equal(x), "sliced fan must cover the input support"
    return out
