"""Verification of the Kahler package on Chow rings: Hard Lefschetz,
Hodge-Riemann relations, Lefschetz decomposition, Keel's lemma after a star
subdivision, the ascent/descent probe, and exact-LP ampleness certificates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .chow import ChowElement, ChowRing, NotAStarSubdivision, StarRings
from .fans import UnimodularFan
from .lp import max_margin
from .rationals import QMatrix, Signature, signature


# -- ampleness ----------------------------------------------------------------


@dataclass
class ConvexityFaceReport:
    cone: tuple[int, ...]
    margin: Fraction
    witness: Optional[tuple[Fraction, ...]]  # linear functional achieving it


@dataclass
class AmpleCertificate:
    strictly_convex: bool
    faces: list[ConvexityFaceReport]

    @property
    def failing_faces(self) -> list[ConvexityFaceReport]:
        return [f for f in self.faces if f.margin <= 0]


def strict_convexity_certificate(fan: UnimodularFan, values: dict[int, Fraction]) -> AmpleCertificate:
    """Exact certificate that the cone-wise linear function with the given ray
    values is strictly convex on the fan.

    For each cone sigma, a margin-maximization LP looks for a linear form
    agreeing with f on sigma and smaller than f by a positive margin on the
    generators of the other cones in the star of sigma.  Strict convexity
    holds iff every margin is positive.
    """
    n = fan.lattice_rank
    vals = {r: Fraction(values.get(r, 0)) for r in range(len(fan.rays))}
    reports = []
    ok = True
    for sigma in sorted(fan.cones, key=lambda c: (len(c), sorted(c))):
        neighbors = sorted(
            {r for c in fan.cones if sigma <= c for r in c - sigma}
        )
        if not neighbors and sigma:
            continue  # maximal cones impose no condition
        eqs = [(fan.rays[r], vals[r]) for r in sorted(sigma)]
        # neighbor rows encode f(e_r) - l(e_r) >= t, written -l(e_r) - t >= -f(e_r)
        ges = [([-x for x in fan.rays[r]], -vals[r]) for r in neighbors]
        t, witness = max_margin(n, eqs, ges)
        reports.append(ConvexityFaceReport(tuple(sorted(sigma)), t, witness))
        if t <= 0:
            ok = False
    return AmpleCertificate(ok, reports)


def ample_certificate(ring: ChowRing, ell: ChowElement) -> AmpleCertificate:
    """Certify ampleness of a degree-one class: strict convexity of its
    monomial-basis representative (well-defined modulo linear forms)."""
    values = {}
    if ring.d >= 1:
        for coeff, m in zip(ell.coords, ring.basis[1]):
            values[m[0]] = coeff
    return strict_convexity_certificate(ring.fan, values)


# -- Hard Lefschetz / Hodge-Riemann ---------------------------------------------


@dataclass
class HLWitness:
    holds: bool
    failing_k: Optional[int] = None
    kernel_vector: Optional[tuple[Fraction, ...]] = None


def check_HL(ring: ChowRing, ell: ChowElement) -> HLWitness:
    """ell^(d-2k): A^k -> A^{d-k} is an isomorphism for all k <= d/2."""
    d = ring.d
    for k in range(d // 2 + 1):
        if ring.dim(k) != ring.dim(d - k):
            return HLWitness(False, k, None)
        mat = ring.power_matrix(ell, d - 2 * k, k)
        ker = mat.kernel_basis()
        if ker:
            return HLWitness(False, k, ker[0])
    return HLWitness(True)


def primitive_part(ring: ChowRing, ell: ChowElement, k: int) -> list[tuple[Fraction, ...]]:
    """Basis (in A^k coordinates) of ker(ell^{d-2k+1}: A^k -> A^{d-k+1})."""
    if k > ring.d // 2:
        raise ValueError("primitive parts are defined for k <= d/2")
    mat = ring.power_matrix(ell, ring.d - 2 * k + 1, k)
    return mat.kernel_basis()


def hodge_riemann_form(ring: ChowRing, ell: ChowElement, k: int) -> QMatrix:
    """Gram matrix Q_k(a, b) = deg(ell^{d-2k} a b) on the basis of A^k."""
    d = ring.d
    pow_mat = ring.power_matrix(ell, d - 2 * k, k)
    nb = ring.dim(k)
    rows = []
    for i in range(nb):
        ei = ring.element(k, [1 if t == i else 0 for t in range(nb)])
        li = ring.element(d - k, pow_mat.apply(ei.coords))
        row = []
        for j in range(nb):
            ej = ring.element(k, [1 if t == j else 0 for t in range(nb)])
            row.append(ring.degree_of(ring.multiply(li, ej)))
        rows.append(row)
    return QMatrix(rows) if rows else QMatrix.zero(0, 0)


def expected_hr_signature(ring: ChowRing, k: int) -> int:
    """The alternating sum sum_{i<=k} (-1)^i (dim A^i - dim A^{i-1})."""
    total = 0
    for i in range(k + 1):
        prev = ring.dim(i - 1) if i >= 1 else 0
        total += (-1) ** i * (ring.dim(i) - prev)
    return total


@dataclass
class HRReport:
    fan_id: str
    ell_coords: tuple[Fraction, ...]
    per_k: list[dict] = field(default_factory=list)
    hl: bool = False
    hr: bool = False
    pd: bool = False

    def to_json(self) -> dict:
        return {
            "fan": self.fan_id,
            "ell": [str(c) for c in self.ell_coords],
            "per_k": [
                {
                    "k": row["k"],
                    "dim": row["dim"],
                    "primitive_dim": row["primitive_dim"],
                    "signature": list(row["signature"]),
                    "expected_index": row["expected_index"],
                    "primitive_definite": row["primitive_definite"],
                }
                for row in self.per_k
            ],
            "HL": self.hl,
            "HR": self.hr,
            "PD": self.pd,
        }


def check_HR(ring: ChowRing, ell: ChowElement, fan_id: str = "") -> HRReport:
    """Hodge-Riemann relations: the signature of Q_k matches the alternating
    sum, and (-1)^k Q_k is positive definite on the primitive part."""
    d = ring.d
    report = HRReport(fan_id, ell.coords)
    hr_ok = True
    for k in range(d // 2 + 1):
        q = hodge_riemann_form(ring, ell, k)
        sig = signature(q) if q.rows else Signature(0, 0, 0)
        expected = expected_hr_signature(ring, k)
        prim = primitive_part(ring, ell, k)
        prim_ok = True
        if prim:
            pm = QMatrix(prim)
            gram = pm * q * pm.transpose()
            signed = QMatrix([[((-1) ** k) * e for e in row] for row in gram.data])
            prim_ok = signature(signed).is_positive_definite()
        sig_ok = sig.index == expected and sig.n_zero == 0
        hr_ok = hr_ok and sig_ok and prim_ok
        report.per_k.append(
            {
                "k": k,
                "dim": ring.dim(k),
                "primitive_dim": len(prim),
                "signature": (sig.n_plus, sig.n_minus, sig.n_zero),
                "expected_index": expected,
                "primitive_definite": prim_ok,
            }
        )
    report.hl = check_HL(ring, ell).holds
    report.pd = ring.poincare_duality_holds()
    report.hr = hr_ok and report.hl
    return report


def lefschetz_decomposition(ring: ChowRing, ell: ChowElement, k: int) -> list[list[tuple[Fraction, ...]]]:
    """The pieces ell^{k-i} P^i of A^k, verified to be a Q_k-orthogonal direct
    sum decomposition."""
    if not check_HL(ring, ell).holds:
        raise ValueError("Lefschetz decomposition requires HL")
    pieces = []
    for i in range(k + 1):
        prim = primitive_part(ring, ell, i)
        fwd = ring.power_matrix(ell, k - i, i)
        piece = [fwd.apply(v) for v in prim]
        pieces.append(piece)
    vectors = [v for piece in pieces for v in piece]
    total = sum(len(p) for p in pieces)
    if total != ring.dim(k) or (vectors and QMatrix(vectors).rank() != total):
        raise AssertionError("Lefschetz pieces do not decompose A^k")
    q = hodge_riemann_form(ring, ell, k)
    for i in range(len(pieces)):
        for j in range(i):
            for v in pieces[i]:
                for w in pieces[j]:
                    val = sum(
                        v[a] * q.data[a][b] * w[b] for a in range(len(v)) for b in range(len(w))
                    )
                    if val != 0:
                        raise AssertionError("Lefschetz pieces are not orthogonal")
    return pieces


# -- Keel's lemma and ascent/descent ---------------------------------------------


def keel_decomposition(stars: StarRings, sigma, subdivided: UnimodularFan) -> dict:
    """Check the Keel decomposition after the barycentric star subdivision of
    ``sigma``: graded dimensions match eq. A^k(S') = A^k(S) + sum_i
    A^{k-i}(S^sigma) T^i, and the explicit generator map is bijective per
    degree."""
    parent = stars.parent
    sigma = parent.require_cone(sigma)
    prov = subdivided.provenance.get("subdivision_of")
    if prov is None or prov[0] != parent or prov[1] != sigma:
        if len(sigma) == 1 and subdivided == parent:
            prov = (parent, sigma)
        else:
            raise NotAStarSubdivision("fan does not record this star subdivision")
    ring = stars.ring(frozenset())
    ring_star = stars.ring(sigma)
    ring_sub = ChowRing(subdivided, check_unimodular=False)
    r = len(sigma)
    dims_ok = all(
        ring_sub.dim(k)
        == ring.dim(k) + sum(ring_star.dim(k - i) for i in range(1, r))
        for k in range(ring_sub.d + 1)
    )

    result = {"dims_match": dims_ok, "bijective": True, "graded_dims": ring_sub.graded_dims()}
    if len(sigma) == 1:
        result["bijective"] = parent == subdivided
        return result

    rho = subdivided.provenance["new_ray"]
    x_rho = ring_sub.generator(rho)

    def chi_of_parent_monomial(m) -> ChowElement:
        img = ring_sub.one()
        for ray in m:
            gen = ring_sub.generator(ray)
            if ray in sigma:
                gen = gen + x_rho
            img = ring_sub.multiply(img, gen)
        return img

    restr = {}
    for k in range(ring_sub.d + 1):
        cols = []
        for m in ring.basis[k]:
            cols.append(chi_of_parent_monomial(m).coords)
        for i in range(1, r):
            if k - i < 0 or k - i > ring_star.d:
                continue
            if (k - i) not in restr:
                restr[k - i] = stars.restriction_matrix(frozenset(), sigma, k - i)
            rmat = restr[k - i]
            for mb in range(ring_star.dim(k - i)):
                target = [Fraction(1) if t == mb else Fraction(0) for t in range(ring_star.dim(k - i))]
                lift = rmat.solve(target)
                assert lift is not None, "restriction to the star must be surjective"
                img = chi_lift(ring, ring_sub, sigma, lift, k - i, chi_of_parent_monomial)
                # multiply by (-x_rho)^i
                for _ in range(i):
                    img = ring_sub.multiply(img, (-1) * x_rho)
                cols.append(img.coords)
        if cols:
            mat = QMatrix.from_columns(cols)
            if mat.rows != mat.cols or mat.rank() != mat.rows:
                result["bijective"] = False
        elif ring_sub.dim(k) != 0:
            result["bijective"] = False
    return result


def chi_lift(ring, ring_sub, sigma, lift_coords, k, chi_of_parent_monomial) -> ChowElement:
    img = ring_sub.zero(k)
    for c, m in zip(lift_coords, ring.basis[k]):
        if c:
            img = img + c * chi_of_parent_monomial(m)
    return img


def subdivided_class(ring_sub: ChowRing, ring: ChowRing, sigma, ell: ChowElement) -> ChowElement:
    """ell' = sum ell(e_r) x_r + (sum_{r in sigma} ell(e_r)) x_rho on the
    star-subdivided fan."""
    rho = ring_sub.fan.provenance["new_ray"]
    values = {}
    for coeff, m in zip(ell.coords, ring.basis[1]):
        values[m[0]] = coeff
    values[rho] = sum(values.get(r, Fraction(0)) for r in sigma)
    return ring_sub.from_ray_values(values)


def ascent_descent_probe(
    stars: StarRings,
    sigma,
    eps_list: Sequence = (1, Fraction(1, 2), Fraction(1, 8), Fraction(1, 32)),
    ell: Optional[ChowElement] = None,
) -> dict:
    """For each epsilon, certify HR(S', ell' - eps x_rho) exactly; reports the
    per-epsilon verdicts (the paper guarantees success for all small enough
    epsilon but gives no effective bound)."""
    from .fans import star_subdivide

    parent = stars.parent
    sigma = parent.require_cone(sigma)
    ring = stars.ring(frozenset())
    if ell is None:
        ell = ring.from_ray_values({r: 1 for r in range(len(parent.rays))})
    base = check_HR(ring, ell)
    star_ring = stars.ring(sigma)
    ell_sigma = stars.restrict(frozenset(), sigma, ell)
    star_report = check_HR(star_ring, ell_sigma)
    sub = star_subdivide(parent, sigma)
    ring_sub = ChowRing(sub, check_unimodular=False)
    rho = sub.provenance["new_ray"]
    ell_prime = subdivided_class(ring_sub, ring, sigma, ell)
    verdicts = []
    for eps in eps_list:
        cls = ell_prime + (-Fraction(eps)) * ring_sub.generator(rho)
        rep = check_HR(ring_sub, cls)
        verdicts.append({"eps": Fraction(eps), "HR": rep.hr})
    return {
        "base_HR": base.hr,
        "star_HR": star_report.hr,
        "per_eps": verdicts,
    }
