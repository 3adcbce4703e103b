"""Rational polyhedral complexes in R^n with exact-LP machinery.

Faces are pairs (vertex set, ray set) with minimal generator descriptions;
face enumeration, membership, pruning, halfspace intersection, and the strict
convexity certificates all reduce to small exact LPs.  Complexes record the
lattice scale k (rationality with respect to (1/k) Z^n).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

from .fans import UnimodularFan
from .lp import INFEASIBLE, OPTIMAL, LinearProgram, max_margin
from .rationals import QMatrix, primitive_vector, qvec

Point = tuple[Fraction, ...]
Ray = tuple[int, ...]


class NotPiecewiseLinear(ValueError):
    pass


class RecessionNotFan(ValueError):
    pass


class RecessionNotUnimodular(ValueError):
    pass


class CompactPartTooHard(RuntimeError):
    pass


class InvalidComplex(ValueError):
    pass


MAX_FACE_GENERATORS = 16


# -- polyhedron-level primitives ------------------------------------------------


def point_in_polyhedron(point: Sequence, verts: Sequence[Point], rays: Sequence[Ray]) -> bool:
    """Exact membership in conv(verts) + cone(rays)."""
    if not verts:
        return False
    n = len(point)
    nv, nr = len(verts), len(rays)
    # fast path for simplicial data: barycentric coordinates are unique
    gens = [tuple(Fraction(v[i]) for i in range(n)) + (Fraction(1),) for v in verts]
    gens += [tuple(Fraction(r[i]) for i in range(n)) + (Fraction(0),) for r in rays]
    if QMatrix(gens).rank() == nv + nr:
        target = tuple(Fraction(point[i]) for i in range(n)) + (Fraction(1),)
        lam = QMatrix(gens).transpose().solve(target)
        return lam is not None and all(x >= 0 for x in lam)
    lp = LinearProgram(nv + nr)
    for i in range(n):
        coeffs = [Fraction(v[i]) for v in verts] + [Fraction(r[i]) for r in rays]
        lp.add_eq(coeffs, Fraction(point[i]))
    lp.add_eq([1] * nv + [0] * nr, 1)
    for j in range(nv + nr):
        e = [0] * (nv + nr)
        e[j] = 1
        lp.add_ge(e, 0)
    return lp.solve().status == OPTIMAL


def ray_in_cone(ray: Sequence, rays: Sequence[Ray]) -> bool:
    if all(x == 0 for x in ray):
        return True
    if not rays:
        return False
    n = len(ray)
    lp = LinearProgram(len(rays))
    for i in range(n):
        lp.add_eq([Fraction(r[i]) for r in rays], Fraction(ray[i]))
    for j in range(len(rays)):
        e = [0] * len(rays)
        e[j] = 1
        lp.add_ge(e, 0)
    return lp.solve().status == OPTIMAL


def prune_generators(verts: Iterable[Sequence], rays: Iterable[Sequence]) -> tuple[list[Point], list[Ray]]:
    """Minimal (vertex, ray) description of conv(verts) + cone(rays)."""
    vs = []
    for v in verts:
        vv = qvec(v)
        if vv not in vs:
            vs.append(vv)
    rs = []
    for r in rays:
        rr = primitive_vector(r)
        if rr not in rs:
            rs.append(rr)
    keep_r = []
    for i, r in enumerate(rs):
        others = [x for j, x in enumerate(rs) if j != i and (x in keep_r or j > i)]
        if not ray_in_cone(r, others):
            keep_r.append(r)
    keep_v = []
    for i, v in enumerate(vs):
        others = [x for j, x in enumerate(vs) if j != i and (x in keep_v or j > i)]
        if not point_in_polyhedron(v, others, keep_r):
            keep_v.append(v)
    return keep_v, keep_r


_FACE_SUBSET_CACHE: dict = {}


def face_generator_subsets(verts: Sequence[Point], rays: Sequence[Ray]) -> list[tuple[frozenset, frozenset]]:
    """All faces of conv(verts)+cone(rays) as generator index subsets.

    The generators must form a minimal description.  Each face is returned as
    (vertex indices, ray indices); the polyhedron itself is included.
    """
    cache_key = (tuple(verts), tuple(rays))
    cached = _FACE_SUBSET_CACHE.get(cache_key)
    if cached is not None:
        return cached
    nv, nr = len(verts), len(rays)
    if nv + nr > MAX_FACE_GENERATORS:
        raise InvalidComplex("face too large for exact enumeration")
    n = len(verts[0]) if verts else (len(rays[0]) if rays else 0)
    out = [(frozenset(range(nv)), frozenset(range(nr)))]
    from itertools import combinations

    gen_ids = [("v", i) for i in range(nv)] + [("r", i) for i in range(nr)]
    for size in range(len(gen_ids)):
        for subset in combinations(gen_ids, size):
            vs = frozenset(i for kind, i in subset if kind == "v")
            rs = frozenset(i for kind, i in subset if kind == "r")
            if not vs:
                continue  # faces of a polyhedron contain at least one vertex
            if len(vs) == nv and len(rs) == nr:
                continue
            # affine l with l = 0 on the subset, l >= t on the rest
            eqs = []
            ges = []
            for i in vs:
                eqs.append((list(verts[i]) + [1], 0))
            for i in rs:
                eqs.append((list(rays[i]) + [0], 0))
            for i in range(nv):
                if i not in vs:
                    ges.append((list(verts[i]) + [1], 0))
            for i in range(nr):
                if i not in rs:
                    ges.append((list(rays[i]) + [0], 0))
            t, _ = max_margin(n + 1, eqs, ges)
            if t > 0:
                out.append((vs, rs))
    _FACE_SUBSET_CACHE[cache_key] = out
    return out


def intersect_halfspace(
    verts: Sequence[Point], rays: Sequence[Ray], normal: Sequence, offset
) -> Optional[tuple[list[Point], list[Ray]]]:
    """Minimal description of the intersection with {x : normal.x <= offset}."""
    a = qvec(normal)
    c = Fraction(offset)

    def av(p):
        return sum(x * y for x, y in zip(a, p))

    vs_in = [v for v in verts if av(v) <= c]
    new_pts = list(vs_in)
    for v in verts:
        fv = av(v)
        if fv <= c:
            # exit points along rays leaving the halfspace
            for r in rays:
                fr = av(r)
                if fr > 0:
                    t = (c - fv) / fr
                    new_pts.append(tuple(x + t * y for x, y in zip(v, r)))
        else:
            for w in verts:
                fw = av(w)
                if fw < fv and fw <= c:
                    t = (c - fw) / (fv - fw)
                    new_pts.append(tuple((1 - t) * x + t * y for x, y in zip(w, v)))
            for r in rays:
                fr = av(r)
                if fr < 0:
                    t = (c - fv) / fr
                    new_pts.append(tuple(x + t * y for x, y in zip(v, r)))
    new_rays = [r for r in rays if av(r) <= 0]
    for i, r1 in enumerate(rays):
        f1 = av(r1)
        for r2 in rays[i + 1 :]:
            f2 = av(r2)
            if f1 > 0 > f2 or f2 > 0 > f1:
                combo = tuple(abs(f1) * y + abs(f2) * x for x, y in zip(r1, r2))
                if any(x != 0 for x in combo):
                    new_rays.append(primitive_vector(combo))
    if not new_pts:
        return None
    return prune_generators(new_pts, new_rays)


def intersect_hyperplane(verts, rays, normal, offset):
    first = intersect_halfspace(verts, rays, normal, offset)
    if first is None:
        return None
    neg = [-x for x in normal]
    return intersect_halfspace(first[0], first[1], neg, -Fraction(offset))


# -- the complex -----------------------------------------------------------------


@dataclass(frozen=True)
class Face:
    v: frozenset
    r: frozenset

    def key(self):
        return (tuple(sorted(self.v)), tuple(sorted(self.r)))


class PolyComplex:
    """A rational polyhedral complex with explicit faces of every dimension."""

    def __init__(self, ambient_dim: int, scale_k: int = 1):
        self.n = ambient_dim
        self.scale_k = scale_k
        self.vertices: list[Point] = []
        self.rays: list[Ray] = []
        self.faces: list[Face] = []
        self._vindex: dict[Point, int] = {}
        self._rindex: dict[Ray, int] = {}
        self._face_set: set[Face] = set()
        self._maximal_cache: Optional[list[Face]] = None

    # -- construction -------------------------------------------------------

    def _vertex_id(self, p: Sequence) -> int:
        p = qvec(p)
        if p not in self._vindex:
            self._vindex[p] = len(self.vertices)
            self.vertices.append(p)
        return self._vindex[p]

    def _ray_id(self, r: Sequence) -> int:
        r = primitive_vector(r)
        if r not in self._rindex:
            self._rindex[r] = len(self.rays)
            self.rays.append(r)
        return self._rindex[r]

    def add_polyhedron(self, verts: Sequence[Sequence], rays: Sequence[Sequence] = ()) -> Face:
        """Add a polyhedron and all of its faces."""
        vs, rs = prune_generators(verts, rays)
        candidate = Face(
            frozenset(self._vertex_id(v) for v in vs),
            frozenset(self._ray_id(r) for r in rs),
        )
        if candidate in self._face_set:
            return candidate
        top = None
        self._maximal_cache = None
        for vsub, rsub in face_generator_subsets(vs, rs):
            face = Face(
                frozenset(self._vertex_id(vs[i]) for i in vsub),
                frozenset(self._ray_id(rs[i]) for i in rsub),
            )
            if face not in self._face_set:
                self._face_set.add(face)
                self.faces.append(face)
            if len(vsub) == len(vs) and len(rsub) == len(rs):
                top = face
        return top

    @staticmethod
    def from_polyhedra(ambient_dim: int, polys: Sequence[tuple], scale_k: int = 1) -> "PolyComplex":
        x = PolyComplex(ambient_dim, scale_k)
        for verts, rays in polys:
            x.add_polyhedron(verts, rays)
        return x

    # -- face structure -------------------------------------------------------

    def face_vertices(self, f: Face) -> list[Point]:
        return [self.vertices[i] for i in sorted(f.v)]

    def face_rays(self, f: Face) -> list[Ray]:
        return [self.rays[i] for i in sorted(f.r)]

    def dim(self, f: Face) -> int:
        verts = self.face_vertices(f)
        rays = self.face_rays(f)
        if not verts:
            return -1
        base = verts[0]
        vectors = [tuple(a - b for a, b in zip(v, base)) for v in verts[1:]]
        vectors += [qvec(r) for r in rays]
        if not vectors:
            return 0
        return QMatrix(vectors).rank()

    @property
    def dimension(self) -> int:
        return max((self.dim(f) for f in self.faces), default=-1)

    def leq(self, f1: Face, f2: Face) -> bool:
        return f1.v <= f2.v and f1.r <= f2.r

    def maximal_faces(self) -> list[Face]:
        if self._maximal_cache is None:
            self._maximal_cache = [
                f for f in self.faces if not any(f != g and self.leq(f, g) for g in self.faces)
            ]
        return self._maximal_cache

    def faces_of_dim(self, d: int) -> list[Face]:
        return sorted((f for f in self.faces if self.dim(f) == d), key=Face.key)

    def star_generators(self, f: Face) -> tuple[list[int], list[int]]:
        """Vertex and ray ids of faces containing f, excluding f's own."""
        vs, rs = set(), set()
        for g in self.faces:
            if self.leq(f, g):
                vs.update(g.v - f.v)
                rs.update(g.r - f.r)
        return sorted(vs), sorted(rs)

    def contains_point(self, p: Sequence) -> Optional[Face]:
        for f in self.maximal_faces():
            if point_in_polyhedron(p, self.face_vertices(f), self.face_rays(f)):
                return f
        return None

    def interior_point(self, f: Face) -> Point:
        verts = self.face_vertices(f)
        rays = self.face_rays(f)
        k = len(verts)
        p = tuple(sum(v[i] for v in verts) / k for i in range(self.n))
        for r in rays:
            p = tuple(a + Fraction(b, 1) / (len(rays) + 1) for a, b in zip(p, r))
        return p

    def is_simplicial(self) -> bool:
        for f in self.maximal_faces():
            verts = self.face_vertices(f)
            rays = self.face_rays(f)
            if self.dim(f) != len(verts) - 1 + len(rays):
                return False
        return True

    def is_valid(self) -> bool:
        """Pairwise intersections of maximal faces are common faces."""
        maxf = self.maximal_faces()
        for i, f in enumerate(maxf):
            for g in maxf[i + 1 :]:
                vs = f.v & g.v
                rs = f.r & g.r
                lp = LinearProgram(self.n + 1)
                for vid in sorted(vs):
                    lp.add_eq(list(self.vertices[vid]) + [1], 0)
                for rid in sorted(rs):
                    lp.add_eq(list(self.rays[rid]) + [0], 0)
                for vid in sorted(f.v - vs):
                    lp.add_ge(list(self.vertices[vid]) + [1], 1)
                for rid in sorted(f.r - rs):
                    lp.add_ge(list(self.rays[rid]) + [0], 1)
                for vid in sorted(g.v - vs):
                    lp.add_ge([-x for x in self.vertices[vid]] + [-1], 1)
                for rid in sorted(g.r - rs):
                    lp.add_ge([-x for x in self.rays[rid]] + [0], 1)
                if lp.solve().status != OPTIMAL:
                    return False
        return True

    # -- recession ------------------------------------------------------------

    def recession_cones(self) -> list[frozenset]:
        """Distinct recession cones as frozensets of ray ids."""
        out = []
        for f in self.faces:
            if f.r not in out:
                out.append(f.r)
        return out

    def recession_fan(self) -> UnimodularFan:
        """The recession fan, or RecessionNotFan when two recession cones
        intersect in a non-face (the recession pseudo-fan case)."""
        cones = self.recession_cones()
        maximal = [c for c in cones if not any(c < d for d in cones)]
        for c in maximal:
            mat = [self.rays[i] for i in sorted(c)]
            if mat and QMatrix(mat).rank() != len(c):
                raise RecessionNotFan("a recession cone is not simplicial")
        fan = UnimodularFan.from_maximal_cones(
            self.n, self.rays, [sorted(c) for c in maximal]
        )
        if not fan.is_valid_fan():
            raise RecessionNotFan("recession cones do not form a fan")
        # every face's recession cone must appear with all its faces
        cone_set = set(cones)
        for c in cones:
            from itertools import combinations as _comb

            for k in range(len(c)):
                for sub in _comb(sorted(c), k):
                    if frozenset(sub) not in cone_set:
                        raise RecessionNotFan("recession cones not closed under faces")
        return fan

    def compact_part(self) -> list[Face]:
        return [f for f in self.faces if not f.r]

    # -- subdivision by a hyperplane ---------------------------------------------

    def _transfer_face_closure(self, out: "PolyComplex", f: Face) -> None:
        """Copy f and all its stored subfaces into ``out`` without LP work."""
        vmap = {i: out._vertex_id(self.vertices[i]) for i in f.v}
        rmap = {i: out._ray_id(self.rays[i]) for i in f.r}
        out._maximal_cache = None
        for g in self.faces:
            if self.leq(g, f):
                face = Face(
                    frozenset(vmap[i] for i in g.v), frozenset(rmap[i] for i in g.r)
                )
                if face not in out._face_set:
                    out._face_set.add(face)
                    out.faces.append(face)

    def hyperplane_cut(self, normal: Sequence, offset) -> "PolyComplex":
        out = PolyComplex(self.n, self.scale_k)
        a = qvec(normal)
        c = Fraction(offset)
        neg = [-x for x in normal]
        for f in self.maximal_faces():
            verts = self.face_vertices(f)
            rays = self.face_rays(f)
            vals_v = [sum(x * y for x, y in zip(a, v)) for v in verts]
            vals_r = [sum(x * y for x, y in zip(a, r)) for r in rays]
            if all(x <= c for x in vals_v) and all(x <= 0 for x in vals_r):
                self._transfer_face_closure(out, f)
                continue
            if all(x >= c for x in vals_v) and all(x >= 0 for x in vals_r):
                self._transfer_face_closure(out, f)
                continue
            for piece in (
                intersect_halfspace(verts, rays, normal, offset),
                intersect_halfspace(verts, rays, neg, -c),
            ):
                if piece is not None:
                    out.add_polyhedron(*piece)
        return out

    def restriction_to(self, other: "PolyComplex") -> "PolyComplex":
        """Faces of self contained in the support of ``other``."""
        out = PolyComplex(self.n, self.scale_k)
        for f in self.maximal_faces():
            if self._face_inside(f, other):
                out.add_polyhedron(self.face_vertices(f), self.face_rays(f))
            else:
                for g in self.faces:
                    if self.leq(g, f) and self._face_inside(g, other):
                        out.add_polyhedron(self.face_vertices(g), self.face_rays(g))
        return out

    def _face_inside(self, f: Face, other: "PolyComplex") -> bool:
        probe = self.interior_point(f)
        host = other.contains_point(probe)
        if host is None:
            return False
        hv = other.face_vertices(host)
        hr = other.face_rays(host)
        return all(
            point_in_polyhedron(v, hv, hr) for v in self.face_vertices(f)
        ) and all(ray_in_cone(r, hr) for r in self.face_rays(f))

    def supports_equal(self, other: "PolyComplex") -> bool:
        for f in self.faces:
            if other.contains_point(self.interior_point(f)) is None:
                return False
        for f in other.faces:
            if self.contains_point(other.interior_point(f)) is None:
                return False
        return True


# -- piecewise linear functions ---------------------------------------------------


class PLFunction:
    """Rational values per vertex and slopes per ray, affine on every face."""

    def __init__(self, complex_: PolyComplex, vertex_values: dict[int, Fraction], ray_slopes: dict[int, Fraction]):
        self.X = complex_
        self.vertex_values = {i: Fraction(v) for i, v in vertex_values.items()}
        self.ray_slopes = {i: Fraction(v) for i, v in ray_slopes.items()}
        for f in complex_.faces:
            if self.affine_witness(f) is None:
                raise NotPiecewiseLinear(f"not affine on face {f.key()}")

    def value(self, vid: int) -> Fraction:
        return self.vertex_values.get(vid, Fraction(0))

    def slope(self, rid: int) -> Fraction:
        return self.ray_slopes.get(rid, Fraction(0))

    def affine_witness(self, f: Face) -> Optional[tuple[Fraction, ...]]:
        """An affine (a, c) with a.v + c = value(v), a.r = slope(r) on the face."""
        rows, rhs = [], []
        for vid in sorted(f.v):
            rows.append(list(self.X.vertices[vid]) + [1])
            rhs.append(self.value(vid))
        for rid in sorted(f.r):
            rows.append(list(self.X.rays[rid]) + [0])
            rhs.append(self.slope(rid))
        return QMatrix(rows).solve(rhs) if rows else tuple([Fraction(0)] * (self.X.n + 1))

    def evaluate(self, f: Face, point: Sequence) -> Fraction:
        aff = self.affine_witness(f)
        return sum(a * Fraction(x) for a, x in zip(aff[:-1], point)) + aff[-1]


# -- strict convexity certificates --------------------------------------------------


@dataclass
class FaceMargin:
    face_key: tuple
    margin: Fraction
    witness: Optional[tuple[Fraction, ...]]


@dataclass
class ConvexityCertificate:
    strict: bool
    margins: list[FaceMargin]

    @property
    def failing(self):
        return [m for m in self.margins if m.margin <= 0]


def strictly_convex_certificate(x: PolyComplex, f: PLFunction, faces: Optional[Sequence[Face]] = None) -> ConvexityCertificate:
    """Margin-maximization certificate of strict convexity around each face.

    For each face delta, look for an affine functional agreeing with f on
    delta and smaller than f by a positive margin at the vertex/ray generators
    of the other faces in the star of delta.
    """
    margins = []
    strict = True
    todo = list(faces) if faces is not None else list(x.faces)
    for delta in todo:
        vs, rs = x.star_generators(delta)
        if not vs and not rs:
            margins.append(FaceMargin(delta.key(), Fraction(1), None))
            continue
        eqs = []
        for vid in sorted(delta.v):
            eqs.append((list(x.vertices[vid]) + [1], f.value(vid)))
        for rid in sorted(delta.r):
            eqs.append((list(x.rays[rid]) + [0], f.slope(rid)))
        ges = []
        for vid in vs:
            ges.append(([-c for c in x.vertices[vid]] + [-1], -f.value(vid)))
        for rid in rs:
            ges.append(([-c for c in x.rays[rid]] + [0], -f.slope(rid)))
        t, witness = max_margin(x.n + 1, eqs, ges)
        margins.append(FaceMargin(delta.key(), t, witness))
        if t <= 0:
            strict = False
    return ConvexityCertificate(strict, margins)


def face_inside_polyhedron(y: PolyComplex, g: Face, x: PolyComplex, delta: Face) -> bool:
    hv = x.face_vertices(delta)
    hr = x.face_rays(delta)
    return all(point_in_polyhedron(v, hv, hr) for v in y.face_vertices(g)) and all(
        ray_in_cone(r, hr) for r in y.face_rays(g)
    )


def regular_subdivision_check(x: PolyComplex, y: PolyComplex, f: PLFunction) -> bool:
    """f is strictly convex on the restriction of y to each face of x."""
    for delta in x.maximal_faces():
        sub_faces = [g for g in y.faces if face_inside_polyhedron(y, g, x, delta)]
        if not _relative_convexity(y, f, sub_faces):
            return False
    return True


def _relative_convexity(y: PolyComplex, f: PLFunction, sub_faces: list[Face]) -> bool:
    for delta in sub_faces:
        vs, rs = set(), set()
        for g in sub_faces:
            if y.leq(delta, g):
                vs.update(g.v - delta.v)
                rs.update(g.r - delta.r)
        if not vs and not rs:
            continue
        eqs = []
        for vid in sorted(delta.v):
            eqs.append((list(y.vertices[vid]) + [1], f.value(vid)))
        for rid in sorted(delta.r):
            eqs.append((list(y.rays[rid]) + [0], f.slope(rid)))
        ges = []
        for vid in sorted(vs):
            ges.append(([-c for c in y.vertices[vid]] + [-1], -f.value(vid)))
        for rid in sorted(rs):
            ges.append(([-c for c in y.rays[rid]] + [0], -f.slope(rid)))
        t, _ = max_margin(y.n + 1, eqs, ges)
        if t <= 0:
            return False
    return True


# -- unimodularity -----------------------------------------------------------------


def unimodularity_decomposition(x: PolyComplex, f: Face) -> tuple[bool, bool]:
    """(finite part unimodular, recession part unimodular relative to it),
    with respect to the lattice (1/scale_k) Z^n.  The face must be simplicial.
    """
    from .lattice import smith_normal_form
    from .rationals import smith_gcd_minors

    verts = x.face_vertices(f)
    rays = x.face_rays(f)
    k = x.scale_k
    base = verts[0]
    diffs = []
    for v in verts[1:]:
        d = [k * (a - b) for a, b in zip(v, base)]
        if any(e.denominator != 1 for e in d):
            return (False, False)
        diffs.append([int(e) for e in d])
    if diffs:
        fin_ok = smith_gcd_minors([[diffs[j][i] for j in range(len(diffs))] for i in range(x.n)], len(diffs)) == 1
    else:
        fin_ok = True
    if not rays:
        return (fin_ok, True)
    if not diffs:
        inf_ok = smith_gcd_minors([[rays[j][i] for j in range(len(rays))] for i in range(x.n)], len(rays)) == 1
        return (fin_ok, inf_ok)
    # project the rays modulo the saturation of span(diffs)
    mat = [[diffs[j][i] for j in range(len(diffs))] for i in range(x.n)]
    u, d, _ = smith_normal_form(mat)
    rank = sum(1 for i in range(min(len(diffs), x.n)) if d[i][i] != 0)
    proj_rows = [u[i] for i in range(rank, x.n)]
    projected = []
    for r in rays:
        pr = tuple(sum(row[i] * r[i] for i in range(x.n)) for row in proj_rows)
        if all(e == 0 for e in pr):
            return (fin_ok, False)
        projected.append(pr)
    q = len(proj_rows)
    inf_ok = smith_gcd_minors(
        [[projected[j][i] for j in range(len(projected))] for i in range(q)], len(projected)
    ) == 1
    return (fin_ok, inf_ok)


def face_is_unimodular(x: PolyComplex, f: Face) -> bool:
    """Direct test: vertex differences and primitive rays extend to a basis of
    the (1/scale_k)-lattice."""
    from .rationals import smith_gcd_minors

    verts = x.face_vertices(f)
    rays = x.face_rays(f)
    k = x.scale_k
    base = verts[0]
    gens = []
    for v in verts[1:]:
        d = [k * (a - b) for a, b in zip(v, base)]
        if any(e.denominator != 1 for e in d):
            return False
        gens.append([int(e) for e in d])
    for r in rays:
        gens.append(list(r))
    if not gens:
        return True
    mat = [[gens[j][i] for j in range(len(gens))] for i in range(x.n)]
    if QMatrix(mat).rank() != len(gens):
        return False
    return smith_gcd_minors(mat, len(gens)) == 1


def complex_is_unimodular(x: PolyComplex) -> bool:
    return all(face_is_unimodular(x, f) for f in x.maximal_faces())


# -- conversions between fans and conical complexes ---------------------------------


def fan_to_complex(fan: UnimodularFan) -> PolyComplex:
    x = PolyComplex(fan.lattice_rank)
    origin = tuple(Fraction(0) for _ in range(fan.lattice_rank))
    if fan.lattice_rank == 0:
        x.add_polyhedron([origin], [])
        return x
    for c in fan.maximal_cones:
        x.add_polyhedron([origin], [fan.rays[i] for i in sorted(c)])
    return x


def complex_to_fan(x: PolyComplex) -> UnimodularFan:
    """A conical simplicial complex (single vertex at the origin) as a fan."""
    origin = tuple(Fraction(0) for _ in range(x.n))
    if x.vertices != [origin]:
        raise InvalidComplex("not a conical complex based at the origin")
    maximal = [sorted(f.r) for f in x.maximal_faces()]
    return UnimodularFan.from_maximal_cones(x.n, x.rays, maximal)
