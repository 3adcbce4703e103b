"""The tropical Steenbrink complex ST_1^{a,b} of a compactified unimodular
triangulation: blocks are Chow graded pieces of the star fans of compact
faces, with the signed restriction/Gysin differential, the monodromy and
Lefschetz operators, the polarization, and the comparison with tropical
cohomology.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .chow import ChowElement, ChowRing
from .fans import UnimodularFan
from .hodge import ample_certificate, primitive_part
from .lattice import quotient_projection
from .polyhedra import Face, PolyComplex
from .rationals import QMatrix, Signature, primitive_vector, row_space_basis, signature
from .tropical import CompactTropicalSpace, XFace


class NotAmple(ValueError):
    pass


class EdgeIncompatible(ValueError):
    pass


class ComplexStars:
    """Star fans of the compact sedentarity-zero faces of a triangulation,
    their Chow rings, and the restriction/Gysin maps between them.

    Generators of a star fan are labelled by the vertex or ray id of the
    covering face that produces them, so the maps between neighbouring stars
    are label-aware.  All lattice work happens in the k-scaled integer
    lattice.
    """

    def __init__(self, x: CompactTropicalSpace):
        self.x = x
        self.Y = x.Y
        self.k = x.Y.scale_k
        self._fans: dict[Face, UnimodularFan] = {}
        self._rings: dict[Face, ChowRing] = {}
        self._duals: dict[Face, list] = {}

    def _tangent_lattice(self, delta: Face) -> list[tuple[int, ...]]:
        verts = self.Y.face_vertices(delta)
        base = verts[0]
        out = []
        for v in verts[1:]:
            vec = [self.k * (a - b) for a, b in zip(v, base)]
            assert all(e.denominator == 1 for e in vec)
            out.append(tuple(int(e) for e in vec))
        return out

    def _gen_vector(self, delta: Face, gen) -> tuple[int, ...]:
        kind, idx = gen
        if kind == "r":
            return self.Y.rays[idx]
        base = self.Y.face_vertices(delta)[0]
        vec = [self.k * (a - b) for a, b in zip(self.Y.vertices[idx], base)]
        assert all(e.denominator == 1 for e in vec)
        return tuple(int(e) for e in vec)

    def star_gens(self, delta: Face) -> list:
        """Generator labels of the star: one per covering face of delta."""
        labels = []
        for eta in self.Y.faces:
            if self.Y.leq(delta, eta) and self.Y.dim(eta) == self.Y.dim(delta) + 1:
                extra_v = eta.v - delta.v
                extra_r = eta.r - delta.r
                if extra_v:
                    (w,) = extra_v
                    labels.append(("v", w))
                else:
                    (r,) = extra_r
                    labels.append(("r", r))
        return sorted(labels)

    def fan(self, delta: Face) -> UnimodularFan:
        if delta in self._fans:
            return self._fans[delta]
        tangent = self._tangent_lattice(delta)
        n = self.Y.n
        proj, _ = quotient_projection(tangent, n)
        pm = QMatrix(proj) if proj else QMatrix.identity(n)

        labels = self.star_gens(delta)
        label_index = {g: i for i, g in enumerate(labels)}
        rays = []
        for g in labels:
            vec = pm.apply(self._gen_vector(delta, g))
            vec = tuple(int(e) for e in vec)
            rays.append(primitive_vector(vec))
        maximal = []
        for eta in self.Y.faces:
            if self.Y.leq(delta, eta):
                gens = [("v", w) for w in eta.v - delta.v] + [("r", r) for r in eta.r - delta.r]
                if len(gens) and not any(
                    self.Y.leq(eta, mu) and eta != mu for mu in self.Y.faces if self.Y.leq(delta, mu)
                ):
                    maximal.append(sorted(label_index[g] for g in gens))
        if not maximal:
            maximal = [[]]
        fan = UnimodularFan.from_maximal_cones(
            len(rays[0]) if rays else n - len(tangent),
            rays,
            maximal,
            ray_labels=tuple(labels),
            provenance={"star_of_face": delta},
        )
        self._fans[delta] = fan
        return fan

    def ring(self, delta: Face) -> ChowRing:
        if delta not in self._rings:
            self._rings[delta] = ChowRing(self.fan(delta), check_unimodular=False)
        return self._rings[delta]

    def _label_index(self, delta: Face) -> dict:
        return {g: i for i, g in enumerate(self.fan(delta).ray_labels)}

    def dropped_label(self, gamma: Face, delta: Face):
        extra_v = delta.v - gamma.v
        extra_r = delta.r - gamma.r
        if extra_v:
            (w,) = extra_v
            return ("v", w)
        (r,) = extra_r
        return ("r", r)

    def restriction_matrix(self, gamma: Face, delta: Face, k: int) -> QMatrix:
        """i^*: A^k(star gamma) -> A^k(star delta) for a covering pair."""
        ring_g = self.ring(gamma)
        ring_d = self.ring(delta)
        if k > ring_d.d:
            return QMatrix.zero(0, ring_g.dim(k))
        if k < 0 or k > ring_g.d:
            return QMatrix.zero(ring_d.dim(k), 0)
        images = self._generator_images(gamma, delta)
        cols = []
        for m in ring_g.basis[k]:
            img = ring_d.one()
            for rho in m:
                img = ring_d.multiply(img, images[rho])
            cols.append(img.coords)
        if not cols:
            return QMatrix.zero(ring_d.dim(k), 0)
        return QMatrix.from_columns(cols)

    def _generator_images(self, gamma: Face, delta: Face) -> dict[int, ChowElement]:
        fan_g = self.fan(gamma)
        ring_d = self.ring(delta)
        idx_d = self._label_index(delta)
        dropped = self.dropped_label(gamma, delta)
        idx_g = self._label_index(gamma)
        rho_idx = idx_g[dropped]
        # integral dual taking value 1 on the sigma ray, inside star gamma
        duals = quotient_projection([fan_g.rays[rho_idx]], fan_g.lattice_rank)[1]
        f = duals[0]
        images: dict[int, ChowElement] = {}
        for label, rho in idx_g.items():
            if label == dropped:
                coords = [Fraction(0)] * ring_d.dim(1)
                for label2, rho2 in idx_d.items():
                    vec = fan_g.rays[idx_g[label2]]
                    val = sum(Fraction(a) * b for a, b in zip(f, vec))
                    if val:
                        col = ring_d.reduce_monomial(1, (rho2,))
                        coords = [u - val * w for u, w in zip(coords, col)]
                images[rho] = ChowElement(ring_d, 1, tuple(coords))
            elif label in idx_d and self._joint_face_exists(delta, label):
                images[rho] = ring_d.generator(idx_d[label])
            else:
                images[rho] = ring_d.zero(1)
        return images

    def _joint_face_exists(self, delta: Face, label) -> bool:
        kind, idx = label
        v = set(delta.v)
        r = set(delta.r)
        if kind == "v":
            v.add(idx)
        else:
            r.add(idx)
        return Face(frozenset(v), frozenset(r)) in self.Y._face_set

    def gysin_matrix(self, delta: Face, gamma: Face, k: int) -> QMatrix:
        """gys: A^k(star delta) -> A^{k+1}(star gamma) for a covering pair."""
        ring_g = self.ring(gamma)
        ring_d = self.ring(delta)
        if k < 0 or k > ring_d.d:
            return QMatrix.zero(ring_g.dim(k + 1), 0)
        idx_g = self._label_index(gamma)
        dropped = self.dropped_label(gamma, delta)
        rho = idx_g[dropped]
        back = {i: lab for lab, i in self._label_index(delta).items()}
        cols = []
        for m in ring_d.basis[k]:
            lifted = tuple(sorted([idx_g[back[i]] for i in m] + [rho]))
            cols.append(ring_g.reduce_monomial(k + 1, lifted))
        if not cols:
            return QMatrix.zero(ring_g.dim(k + 1), 0)
        return QMatrix.from_columns(cols)


@dataclass
class SteenbrinkComplex:
    """Blocks ST^{a,b,s} with the signed differential d = i* + gys."""

    x: CompactTropicalSpace
    stars: ComplexStars
    d: int
    finite: list[Face] = field(default_factory=list)

    @staticmethod
    def build(x: CompactTropicalSpace) -> "SteenbrinkComplex":
        stars = ComplexStars(x)
        finite = sorted((f.delta for f in x.finite_faces()), key=Face.key)
        st = SteenbrinkComplex(x, stars, x.d, finite)
        st.assert_identities()
        return st

    # -- block structure -------------------------------------------------------

    def block_faces(self, a: int, b: int, s: int) -> list[tuple[Face, int]]:
        """(face, Chow degree) pairs with nonzero contribution to (a, b, s)."""
        if b % 2 or s < abs(a) or (s - a) % 2:
            return []
        h = a + b - s
        if h % 2 or h < 0:
            return []
        k = h // 2
        out = []
        for f in self.finite:
            if self.x.Y.dim(f) == s and self.stars.ring(f).dim(k) > 0:
                out.append((f, k))
        return out

    def st_dim(self, a: int, b: int) -> int:
        return sum(
            self.stars.ring(f).dim(k)
            for s in self.s_range(a)
            for f, k in self.block_faces(a, b, s)
        )

    def s_range(self, a: int):
        return range(abs(a), self.d + 1, 2)

    def basis_layout(self, a: int, b: int):
        """Offsets of the (s, face) blocks inside ST^{a,b}."""
        layout = []
        off = 0
        for s in self.s_range(a):
            for f, k in self.block_faces(a, b, s):
                nd = self.stars.ring(f).dim(k)
                layout.append((s, f, k, off, nd))
                off += nd
        return layout, off

    # -- operators ---------------------------------------------------------------

    def _sign(self, gamma: Face, delta: Face) -> int:
        return self.x._sign(XFace(gamma, frozenset()), XFace(delta, frozenset()))

    def i_star_matrix(self, a: int, b: int) -> QMatrix:
        src, ns = self.basis_layout(a, b)
        dst, nt = self.basis_layout(a + 1, b)
        rows = [[Fraction(0)] * ns for _ in range(nt)]
        for (s, f, k, off, nd) in src:
            for (s2, g, k2, off2, nd2) in dst:
                if s2 != s + 1 or k2 != k or not self.x.Y.leq(f, g):
                    continue
                mat = self.stars.restriction_matrix(f, g, k)
                sign = self._sign(f, g)
                for i in range(mat.rows):
                    for j in range(mat.cols):
                        if mat.data[i][j]:
                            rows[off2 + i][off + j] += sign * mat.data[i][j]
        return QMatrix(rows, cols=ns)

    def gys_matrix(self, a: int, b: int) -> QMatrix:
        src, ns = self.basis_layout(a, b)
        dst, nt = self.basis_layout(a + 1, b)
        rows = [[Fraction(0)] * ns for _ in range(nt)]
        for (s, f, k, off, nd) in src:
            for (s2, g, k2, off2, nd2) in dst:
                if s2 != s - 1 or k2 != k + 1 or not self.x.Y.leq(g, f):
                    continue
                mat = self.stars.gysin_matrix(f, g, k)
                sign = self._sign(g, f)
                for i in range(mat.rows):
                    for j in range(mat.cols):
                        if mat.data[i][j]:
                            rows[off2 + i][off + j] += sign * mat.data[i][j]
        return QMatrix(rows, cols=ns)

    def differential(self, a: int, b: int) -> QMatrix:
        return self.i_star_matrix(a, b) + self.gys_matrix(a, b)

    def monodromy_matrix(self, a: int, b: int) -> QMatrix:
        """N: ST^{a,b} -> ST^{a+2,b-2}: identity on blocks with s >= |a+2|."""
        src, ns = self.basis_layout(a, b)
        dst, nt = self.basis_layout(a + 2, b - 2)
        rows = [[Fraction(0)] * ns for _ in range(nt)]
        for (s, f, k, off, nd) in src:
            for (s2, g, k2, off2, nd2) in dst:
                if s2 == s and g == f and k2 == k:
                    for i in range(nd):
                        rows[off2 + i][off + i] = Fraction(1)
        return QMatrix(rows, cols=ns)

    def assert_identities(self) -> None:
        """d^2 = 0 together with the three anticommutation identities."""
        for a in range(-self.d - 1, self.d + 1):
            for b in range(0, 2 * self.d + 1, 2):
                i1 = self.i_star_matrix(a, b)
                i2 = self.i_star_matrix(a + 1, b)
                g1 = self.gys_matrix(a, b)
                g2 = self.gys_matrix(a + 1, b)
                for prod in (i2 * i1, g2 * g1, i2 * g1 + g2 * i1):
                    assert all(e == 0 for row in prod.data for e in row), (a, b)

    # -- row cohomology and comparison -----------------------------------------------

    def row_cohomology(self, p: int) -> dict[int, int]:
        out = {}
        b = 2 * p
        prev_rank = 0
        for a in range(-self.d, self.d + 1):
            dim_a = self.st_dim(a, b)
            mat = self.differential(a, b)
            r = mat.rank()
            out[a] = dim_a - r - prev_rank
            prev_rank = r
        return out

    def comparison_check(self) -> bool:
        """Thm: H^{q-p}(ST^{.,2p}) = h^{p,q} for all p, q."""
        from .tropical import betti_table

        table = betti_table(self.x)
        for p in range(self.d + 1):
            rows = self.row_cohomology(p)
            for q in range(self.d + 1):
                if rows.get(q - p, 0) != table.get((p, q), 0):
                    return False
            # odd rows vanish by construction (blocks are zero)
        return True

    def hodge_diamond_symmetric(self) -> bool:
        for a in range(-self.d, self.d + 1):
            for b in range(0, 2 * self.d + 1, 2):
                if self.st_dim(a, b) != self.st_dim(-a, b + 2 * a):
                    return False
                if self.st_dim(a, b) != self.st_dim(a, 2 * self.d - 2 * a - b):
                    return False
        return True


# -- Kahler forms -----------------------------------------------------------------------


@dataclass
class KahlerForm:
    """Compatible ample classes at the finite vertices."""

    st: SteenbrinkComplex
    vertex_classes: dict[Face, ChowElement]

    def as_st_vector(self) -> tuple[Fraction, ...]:
        layout, total = self.st.basis_layout(0, 2)
        vec = [Fraction(0)] * total
        for (s, f, k, off, nd) in layout:
            if s == 0 and f in self.vertex_classes:
                for i, c in enumerate(self.vertex_classes[f].coords):
                    vec[off + i] = c
        return tuple(vec)


def kahler_form(st: SteenbrinkComplex, vertex_classes: dict[Face, ChowElement], check_ample: bool = True) -> KahlerForm:
    """Verify ampleness (exact LP) and edge compatibility, and return the
    Kahler witness; its differential vanishes, so it defines a class in
    H^{1,1}."""
    vertices = [f for f in st.finite if st.x.Y.dim(f) == 0]
    for v in vertices:
        if v not in vertex_classes:
            raise EdgeIncompatible("a finite vertex is missing its ample class")
        if check_ample:
            cert = ample_certificate(st.stars.ring(v), vertex_classes[v])
            if not cert.strictly_convex:
                raise NotAmple(f"class at vertex {sorted(v.v)} is not ample")
    for e in st.finite:
        if st.x.Y.dim(e) != 1:
            continue
        ends = [v for v in vertices if st.x.Y.leq(v, e)]
        if len(ends) != 2:
            continue
        r1 = st.stars.restriction_matrix(ends[0], e, 1).apply(vertex_classes[ends[0]].coords)
        r2 = st.stars.restriction_matrix(ends[1], e, 1).apply(vertex_classes[ends[1]].coords)
        if r1 != r2:
            raise EdgeIncompatible(f"classes disagree on edge {e.key()}")
    form = KahlerForm(st, dict(vertex_classes))
    image = st.differential(0, 2).apply(form.as_st_vector())
    assert all(e == 0 for e in image), "Kahler witness must be d-closed"
    return form


def kahler_from_function(st: SteenbrinkComplex, f) -> KahlerForm:
    """Ample vertex classes from a strictly convex PL function on Y."""
    classes = {}
    for v in st.finite:
        if st.x.Y.dim(v) != 0:
            continue
        ring = st.stars.ring(v)
        fan = st.stars.fan(v)
        (vid,) = v.v
        base_val = f.value(vid)
        values = {}
        for rho, label in enumerate(fan.ray_labels):
            kind, idx = label
            if kind == "v":
                # star ray towards another vertex w: slope of f along the edge
                w = st.x.Y.vertices[idx]
                base = st.x.Y.vertices[vid]
                direction = [st.stars.k * (a - b) for a, b in zip(w, base)]
                prim = primitive_vector(direction)
                scale = next(Fraction(d) / p for d, p in zip(direction, prim) if p != 0)
                values[rho] = (f.value(idx) - base_val) / scale
            else:
                values[rho] = Fraction(f.slope(idx), 1) / st.stars.k
        classes[v] = ring.from_ray_values(values)
    return kahler_form(st, classes)


def lefschetz_classes(st: SteenbrinkComplex, form: KahlerForm) -> dict[Face, ChowElement]:
    """ell^delta = i*_{v < delta}(ell^v) for every finite face, asserted
    independent of the vertex chain used."""
    out: dict[Face, ChowElement] = dict(form.vertex_classes)
    for s in range(1, st.d + 1):
        for f in st.finite:
            if st.x.Y.dim(f) != s:
                continue
            candidates = []
            for g in st.finite:
                if st.x.Y.dim(g) == s - 1 and st.x.Y.leq(g, f) and g in out:
                    mat = st.stars.restriction_matrix(g, f, 1)
                    candidates.append(tuple(mat.apply(out[g].coords)))
            assert candidates, "every face must see a vertex class"
            assert all(c == candidates[0] for c in candidates), "ell^delta depends on the path"
            out[f] = ChowElement(st.stars.ring(f), 1, candidates[0])
    return out


@dataclass
class Operators:
    st: SteenbrinkComplex
    ell_classes: dict[Face, ChowElement]

    def ell_matrix(self, a: int, b: int) -> QMatrix:
        src, ns = self.st.basis_layout(a, b)
        dst, nt = self.st.basis_layout(a, b + 2)
        rows = [[Fraction(0)] * ns for _ in range(nt)]
        for (s, f, k, off, nd) in src:
            ring = self.st.stars.ring(f)
            mat = ring.multiplication_matrix(self.ell_classes[f], k)
            for (s2, g, k2, off2, nd2) in dst:
                if s2 == s and g == f and k2 == k + 1:
                    for i in range(mat.rows):
                        for j in range(mat.cols):
                            if mat.data[i][j]:
                                rows[off2 + i][off + j] += mat.data[i][j]
        return QMatrix(rows, cols=ns)

    def n_matrix(self, a: int, b: int) -> QMatrix:
        return self.st.monodromy_matrix(a, b)

    def psi(self, a: int, b: int) -> QMatrix:
        """Pairing ST^{a,b} x ST^{-a, 2d-b} -> Q."""
        d = self.st.d
        src, ns = self.st.basis_layout(a, b)
        dst, nt = self.st.basis_layout(-a, 2 * d - b)
        eps = (-1) ** (a + b // 2) if b % 2 == 0 else 1
        rows = [[Fraction(0)] * nt for _ in range(ns)]
        for (s, f, k, off, nd) in src:
            ring = self.st.stars.ring(f)
            for (s2, g, k2, off2, nd2) in dst:
                if s2 != s or g != f:
                    continue
                # deg(x_f . y_f) with x in A^k, y in A^{k2}, k + k2 = top
                for i in range(nd):
                    ei = ring.element(k, [1 if t == i else 0 for t in range(nd)])
                    for j in range(nd2):
                        ej = ring.element(k2, [1 if t == j else 0 for t in range(nd2)])
                        rows[off + i][off2 + j] = eps * ring.degree_of(ring.multiply(ei, ej))
        return QMatrix(rows, cols=nt)


def operators(st: SteenbrinkComplex, form: KahlerForm) -> Operators:
    return Operators(st, lefschetz_classes(st, form))


def hl_primitive_part(st: SteenbrinkComplex, ops: Operators, a: int, b: int) -> list[tuple[Fraction, ...]]:
    """P^{a,b} = ker N^{-a+1} cap ker ell^{d-a-b+1} inside ST^{a,b}."""
    assert a <= 0 and b <= st.d - a
    rows = []
    mat_n = QMatrix.identity(st.st_dim(a, b))
    aa, bb = a, b
    for _ in range(-a + 1):
        mat_n = st.monodromy_matrix(aa, bb) * mat_n
        aa, bb = aa + 2, bb - 2
    rows.extend(mat_n.data)
    mat_l = QMatrix.identity(st.st_dim(a, b))
    bb = b
    for _ in range(st.d - a - b + 1):
        mat_l = ops.ell_matrix(a, bb) * mat_l
        bb += 2
    rows.extend(mat_l.data)
    return QMatrix(rows, cols=st.st_dim(a, b)).kernel_basis()


def primitive_parts_match_local(st: SteenbrinkComplex, ops: Operators, a: int, b: int) -> bool:
    """P^{a,b} equals the direct sum of the local Chow primitive parts
    P^{2a+b}(delta) over faces of dimension -a."""
    prim = hl_primitive_part(st, ops, a, b)
    layout, total = st.basis_layout(a, b)
    local_vectors = []
    if (2 * a + b) % 2 == 0 and 2 * a + b >= 0:
        k = (2 * a + b) // 2
        for (s, f, kk, off, nd) in layout:
            if s != -a or kk != k:
                continue
            ring = st.stars.ring(f)
            if 2 * k > ring.d:
                continue
            for v in primitive_part(ring, ops.ell_classes[f], k):
                vec = [Fraction(0)] * total
                for i, c in enumerate(v):
                    vec[off + i] = c
                local_vectors.append(tuple(vec))
    span_prim = row_space_basis(prim)
    span_local = row_space_basis(local_vectors)
    return span_prim == span_local


def polarization_check(st: SteenbrinkComplex, ops: Operators) -> dict:
    """The six psi identities, positivity on the HL-primitive parts, and the
    Hodge-Lefschetz decomposition dimension count."""
    d = st.d
    result = {"identities": True, "primitive_definite": True, "decomposition": True}
    for a in range(-d, d + 1):
        for b in range(0, 2 * d + 1, 2):
            ns = st.st_dim(a, b)
            if ns == 0:
                continue
            psi = ops.psi(a, b)
            psi_back = ops.psi(-a, 2 * d - b)
            # (i) psi(x, y) = (-1)^d psi(y, x)
            if psi.rows and psi.cols:
                flipped = QMatrix(
                    [[((-1) ** d) * psi_back.data[j][i] for j in range(psi_back.rows)] for i in range(psi_back.cols)],
                    cols=psi.cols,
                )
                if psi != flipped:
                    result["identities"] = False
            # (ii) psi(Nx, y) + psi(x, Ny) = 0
            n1 = st.monodromy_matrix(a, b)
            n2 = st.monodromy_matrix(-a - 2, 2 * d - b + 2)
            lhs = _pairing_compose(ops.psi(a + 2, b - 2), n1, None)
            rhs = _pairing_compose(psi, None, n2)
            if not _mat_zero(lhs + rhs):
                result["identities"] = False
            # (iii) psi(ell x, y) + psi(x, ell y) = 0
            l1 = ops.ell_matrix(a, b)
            l2 = ops.ell_matrix(-a, 2 * d - b - 2)
            lhs = _pairing_compose(ops.psi(a, b + 2), l1, None)
            rhs = _pairing_compose(psi, None, l2)
            if not _mat_zero(lhs + rhs):
                result["identities"] = False
            # (iv)+(v)+(vi): d-skewness
            d1 = st.differential(a, b)
            d2 = st.differential(-a - 1, 2 * d - b)
            lhs = _pairing_compose(ops.psi(a + 1, b), d1, None)
            rhs = _pairing_compose(psi, None, d2)
            if not _mat_zero(lhs + rhs):
                result["identities"] = False
    # positivity of psi(., ell^{d-a-b} N^{-a} .) on P^{a,b}
    for a in range(-d, 1):
        for b in range(0, d - a + 1):
            if b % 2 or st.st_dim(a, b) == 0:
                continue
            prim = hl_primitive_part(st, ops, a, b)
            if not prim:
                continue
            mat_n = QMatrix.identity(st.st_dim(a, b))
            aa, bb = a, b
            for _ in range(-a):
                mat_n = st.monodromy_matrix(aa, bb) * mat_n
                aa, bb = aa + 2, bb - 2
            mat_l = QMatrix.identity(mat_n.rows)
            bb2 = bb
            for _ in range(d - a - b):
                mat_l = ops.ell_matrix(aa, bb2) * mat_l
                bb2 += 2
            psi = ops.psi(a, b)
            op = mat_l * mat_n
            pm = QMatrix(prim)
            gram = pm * (psi * (op * pm.transpose()))  # psi(x, L N y)
            sig = signature(_symmetrize(gram))
            if not sig.is_positive_definite():
                result["primitive_definite"] = False
    # decomposition ST^{a,b} = sum ell^r N^s P^{a-2s, b+2s-2r}
    for a in range(-d, 1):
        for b in range(0, 2 * d + 1, 2):
            if b > d - a:
                continue
            want = st.st_dim(a, b)
            total = 0
            for s in range(0, d + 1):
                for r in range(0, d + 1):
                    a2, b2 = a - 2 * s, b + 2 * s - 2 * r
                    if a2 > 0 or b2 < 0 or b2 % 2 or b2 > d - a2:
                        continue
                    if st.st_dim(a2, b2) == 0:
                        continue
                    total += len(hl_primitive_part(st, ops, a2, b2))
            if total != want:
                result["decomposition"] = False
    return result


def _pairing_compose(pairing: QMatrix, left: Optional[QMatrix], right: Optional[QMatrix]) -> QMatrix:
    """pairing(left ., right .) as a matrix in the source bases."""
    out = pairing
    if left is not None:
        out = left.transpose() * out
    if right is not None:
        out = out * right
    return out


def _mat_zero(m: QMatrix) -> bool:
    return all(e == 0 for row in m.data for e in row)


def _symmetrize(m: QMatrix) -> QMatrix:
    return QMatrix(
        [
            [(m.data[i][j] + m.data[j][i]) / 2 for j in range(m.cols)]
            for i in range(m.rows)
        ]
    )


# -- Hodge index for surfaces --------------------------------------------------------


def hodge_index_check(st: SteenbrinkComplex) -> dict:
    """d = 2: signature of the intersection pairing on H^{1,1} equals
    (1 + b2, h^{11} - 1 - b2)."""
    from .tropical import betti_table

    assert st.d == 2, "Hodge index applies to surfaces"
    # representatives of H^{1,1} inside ker(d: ST^{0,2} -> ST^{1,2})
    dmat = st.differential(0, 2)
    kernel = dmat.kernel_basis()
    prev = st.differential(-1, 2)
    image = row_space_basis([prev.column(j) for j in range(prev.cols)])
    reps = []
    current = list(image)
    for v in kernel:
        if not _in_span_local(current, v):
            reps.append(v)
            current.append(v)
    # intersection pairing: sum over blocks of local degrees (normalized so
    # that deg(x^2) = 1 on the projective plane model)
    layout, total = st.basis_layout(0, 2)
    pair_rows = []
    for u in reps:
        row = []
        for w in reps:
            val = Fraction(0)
            for (s, f, k, off, nd) in layout:
                ring = st.stars.ring(f)
                k2 = ring.d - k
                # both components must live in complementary degrees
                if k + k2 != ring.d:
                    continue
                eu = ring.element(k, u[off : off + nd])
                ew = ring.element(k, w[off : off + nd])
                if 2 * k == ring.d:
                    val += ring.degree_of(ring.multiply(eu, ew))
            row.append(val)
        pair_rows.append(row)
    pairing = QMatrix(pair_rows) if pair_rows else QMatrix.zero(0, 0)
    sig = signature(pairing)
    table = betti_table(st.x)
    b2 = table.get((0, 2), 0)
    h11 = table.get((1, 1), 0)
    expected = Signature(1 + b2, h11 - 1 - b2, 0)
    return {
        "signature": (sig.n_plus, sig.n_minus, sig.n_zero),
        "expected": (expected.n_plus, expected.n_minus, expected.n_zero),
        "b2": b2,
        "h11": h11,
        "match": sig == expected,
    }


def _in_span_local(vectors, v):
    base = row_space_basis(vectors)
    if not base:
        return all(x == 0 for x in v)
    return QMatrix(base).transpose().solve(v) is not None
