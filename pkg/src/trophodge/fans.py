"""Rational simplicial fans: Bergman fans of matroids, star fans, products,
barycentric star subdivisions, tropical modifications, and the face poset of
canonical compactifications.

Cones are stored as sorted sets of ray indices; the face relation is subset
containment (all fans here are simplicial).  Quotient-lattice coordinates for
star fans are fixed deterministically by Hermite reduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Optional, Sequence

from .lattice import interior_lattice_witness, quotient_projection
from .lp import LinearProgram, OPTIMAL
from .matroids import Matroid, NotSimple
from .rationals import QMatrix, primitive_vector, qvec, smith_gcd_minors

Cone = frozenset


class ConeNotInFan(KeyError):
    pass


class NotUnimodular(ValueError):
    pass


class SubfanNotContained(ValueError):
    pass


class InvalidFan(ValueError):
    pass


def _complete_faces(maximal: Iterable[frozenset]) -> frozenset:
    cones = {Cone()}
    for c in maximal:
        c = Cone(c)
        for r in range(1, len(c) + 1):
            cones.update(Cone(s) for s in combinations(sorted(c), r))
    return frozenset(cones)


@dataclass(frozen=True)
class UnimodularFan:
    """A rational simplicial fan, unimodular unless stated otherwise."""

    lattice_rank: int
    rays: tuple[tuple[int, ...], ...]
    cones: frozenset  # frozensets of ray indices, closed under faces
    ray_labels: tuple = ()  # optional provenance, e.g. flats for Bergman fans
    provenance: dict = field(default_factory=dict, compare=False, repr=False)

    @staticmethod
    def from_maximal_cones(
        lattice_rank: int,
        rays: Sequence[Sequence[int]],
        maximal: Iterable[Iterable[int]],
        ray_labels: Sequence = (),
        provenance: Optional[dict] = None,
    ) -> "UnimodularFan":
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        for r in rays:
            if len(r) != lattice_rank:
                raise InvalidFan("ray dimension mismatch")
            if all(x == 0 for x in r):
                raise InvalidFan("zero ray")
            if gcd(*[abs(x) for x in r] or [0]) not in (0, 1):
                raise InvalidFan(f"ray {r} is not primitive")
        cones = _complete_faces(Cone(c) for c in maximal)
        for c in cones:
            if c and max(c) >= len(rays):
                raise InvalidFan("cone refers to a missing ray")
        return UnimodularFan(
            lattice_rank,
            rays,
            cones,
            tuple(ray_labels) if ray_labels else tuple(range(len(rays))),
            provenance or {},
        )

    # -- basic queries ----------------------------------------------------

    @property
    def dim(self) -> int:
        return max((len(c) for c in self.cones), default=0)

    def cones_of_dim(self, k: int) -> list[frozenset]:
        return sorted((c for c in self.cones if len(c) == k), key=sorted)

    @property
    def maximal_cones(self) -> list[frozenset]:
        return [c for c in self.cones if not any(c < d for d in self.cones)]

    def require_cone(self, sigma: Iterable[int]) -> frozenset:
        s = Cone(sigma)
        if s not in self.cones:
            raise ConeNotInFan(str(sorted(s)))
        return s

    def ray_matrix(self, cone: Iterable[int]) -> list[list[int]]:
        """Rows indexed by ambient coordinates, columns by the cone's rays."""
        idx = sorted(cone)
        return [[self.rays[j][i] for j in idx] for i in range(self.lattice_rank)]

    def is_unimodular(self) -> bool:
        for c in self.maximal_cones:
            if not c:
                continue
            if smith_gcd_minors(self.ray_matrix(c), len(c)) != 1:
                return False
        return True

    def is_pure(self) -> bool:
        d = self.dim
        return all(len(c) == d for c in self.maximal_cones)

    def is_complete(self) -> bool:
        """Support equals the whole space.

        Criterion: nonempty pure dimension n and every codimension-one cone a
        facet of exactly two maximal cones (valid for genuine fans).
        """
        n = self.lattice_rank
        maxc = self.maximal_cones
        if not maxc or any(len(c) != n for c in maxc):
            return False
        if n == 0:
            return True
        for tau in self.cones_of_dim(n - 1):
            if sum(1 for c in maxc if tau < c) != 2:
                return False
        return True

    def contains_point(self, point: Sequence) -> bool:
        p = qvec(point)
        for c in self.maximal_cones:
            if not c:
                if all(x == 0 for x in p):
                    return True
                continue
            lam = QMatrix(self.ray_matrix(c)).solve(p)
            if lam is not None and all(x >= 0 for x in lam):
                return True
        return all(x == 0 for x in p)

    def cone_containing_in_relint(self, point: Sequence) -> Optional[frozenset]:
        p = qvec(point)
        if all(x == 0 for x in p):
            return Cone()
        for c in self.cones:
            if not c:
                continue
            lam = QMatrix(self.ray_matrix(c)).solve(p)
            if lam is not None and all(x > 0 for x in lam):
                return c
        return None

    def is_valid_fan(self) -> bool:
        """Pairwise intersections are common faces (exact LP separation test)."""
        for c in self.cones:
            if c and QMatrix(self.ray_matrix(c)).rank() != len(c):
                return False
        maxc = self.maximal_cones
        for a, b in combinations(maxc, 2):
            shared = a & b
            only_a = sorted(a - shared)
            only_b = sorted(b - shared)
            if not only_a and not only_b:
                return False  # duplicate cone
            lp = LinearProgram(self.lattice_rank)
            for r in shared:
                lp.add_eq(self.rays[r], 0)
            for r in only_a:
                lp.add_ge(self.rays[r], 1)
            for r in only_b:
                lp.add_ge([-x for x in self.rays[r]], 1)
            if lp.solve().status != OPTIMAL:
                return False
        return True

    def relabelled(self, **prov) -> "UnimodularFan":
        d = dict(self.provenance)
        d.update(prov)
        return UnimodularFan(self.lattice_rank, self.rays, self.cones, self.ray_labels, d)


# -- Bergman fans ----------------------------------------------------------


def bergman_fan(m: Matroid) -> UnimodularFan:
    """The Bergman fan of a simple matroid, in Z^E / Z e_E.

    Quotient coordinates drop the largest ground-set label.  Rays are the
    vectors e_F of proper flats, cones the flags of proper flats.
    """
    if not m.is_simple():
        raise NotSimple("Bergman fans require a simple loopless matroid")
    lattice = m.flats()
    proper = list(lattice.proper_flats)
    ground = list(m.ground_set)
    dropped = ground[-1]
    coords = ground[:-1]
    n = len(coords)

    def flat_vector(f: frozenset) -> tuple[int, ...]:
        if dropped in f:
            return tuple(-1 if c not in f else 0 for c in coords)
        return tuple(1 if c in f else 0 for c in coords)

    rays = [flat_vector(f) for f in proper]
    flat_index = {f: i for i, f in enumerate(proper)}
    maximal = []
    for chain in lattice.chains_of_proper_flats():
        if len(chain) == m.rank_total - 1:
            maximal.append([flat_index[f] for f in chain])
    if m.rank_total == 1:
        maximal = [[]]
    fan = UnimodularFan.from_maximal_cones(
        n, rays, maximal, ray_labels=tuple(proper), provenance={"matroid": m}
    )
    return fan


# -- star fans ---------------------------------------------------------------


def star_fan(f: UnimodularFan, sigma: Iterable[int]) -> UnimodularFan:
    """The star fan of ``sigma``, in the quotient lattice N / N_sigma.

    Rays are labelled by the parent-fan ray index they come from, recorded in
    ``provenance["parent_ray"]``.
    """
    s = f.require_cone(sigma)
    gens = [f.rays[i] for i in sorted(s)]
    proj, duals = quotient_projection(gens, f.lattice_rank)
    nq = f.lattice_rank - len(s)

    def project(v: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(row[i] * v[i] for i in range(f.lattice_rank)) for row in proj)

    star_rays: list[tuple[int, ...]] = []
    parent_ray: list[int] = []
    ray_index: dict[int, int] = {}
    ray_parents = sorted(
        {r for c in f.cones if s <= c for r in c - s}
    )
    for r in ray_parents:
        vec = project(f.rays[r])
        if all(x == 0 for x in vec):
            raise InvalidFan("ray collapses in the quotient")
        g = gcd(*[abs(x) for x in vec])
        if g != 1:
            raise NotUnimodular("projected ray not primitive")
        ray_index[r] = len(star_rays)
        star_rays.append(vec)
        parent_ray.append(r)
    maximal = [
        [ray_index[r] for r in sorted(c - s)]
        for c in f.cones
        if s <= c and not any(s <= d and c < d for d in f.cones)
    ]
    return UnimodularFan.from_maximal_cones(
        nq,
        star_rays,
        maximal,
        ray_labels=tuple(f.ray_labels[r] for r in parent_ray),
        provenance={
            "star_of": (f, s),
            "parent_ray": tuple(parent_ray),
            "projection": tuple(tuple(row) for row in proj),
            "cone_duals": tuple(tuple(row) for row in duals),
        },
    )


def product_fan(f1: UnimodularFan, f2: UnimodularFan) -> UnimodularFan:
    n1, n2 = f1.lattice_rank, f2.lattice_rank
    rays = [tuple(r) + (0,) * n2 for r in f1.rays] + [(0,) * n1 + tuple(r) for r in f2.rays]
    k1 = len(f1.rays)
    maximal = []
    for c1 in f1.maximal_cones:
        for c2 in f2.maximal_cones:
            maximal.append(sorted(c1) + [k1 + i for i in sorted(c2)])
    labels = tuple(("l", l) for l in f1.ray_labels) + tuple(("r", l) for l in f2.ray_labels)
    return UnimodularFan.from_maximal_cones(
        n1 + n2, rays, maximal, ray_labels=labels, provenance={"product_of": (f1, f2)}
    )


# -- star subdivision ---------------------------------------------------------


def star_subdivide(f: UnimodularFan, sigma: Iterable[int]) -> UnimodularFan:
    """Barycentric star subdivision: new ray = sum of the primitive generators
    of ``sigma``; cones follow the blow-up rule.
    """
    s = f.require_cone(sigma)
    if len(s) == 0:
        raise ConeNotInFan("cannot subdivide the zero cone")
    if len(s) == 1:
        return f
    new_ray = tuple(sum(f.rays[i][k] for i in s) for k in range(f.lattice_rank))
    assert gcd(*[abs(x) for x in new_ray]) == 1, "barycentre of a unimodular cone is primitive"
    rays = list(f.rays) + [new_ray]
    rho = len(f.rays)
    maximal = []
    for c in f.maximal_cones:
        if s <= c:
            for dropped in sorted(s):
                maximal.append(sorted(c - {dropped}) + [rho])
        else:
            maximal.append(sorted(c))
    labels = tuple(f.ray_labels) + ((tuple(sorted(s)), "barycentre"),)
    out = UnimodularFan.from_maximal_cones(
        f.lattice_rank, rays, maximal, ray_labels=labels,
        provenance={"subdivision_of": (f, s), "new_ray": rho},
    )
    return out


# -- tropical modification -----------------------------------------------------


def tropical_modification(
    f_prime: UnimodularFan,
    delta_prime_cones: Iterable[frozenset],
    values: dict[int, int] | None = None,
) -> UnimodularFan:
    """Tropical modification of ``f_prime`` along the subfan ``delta_prime``.

    ``values`` assigns the integral value of the modification function to each
    ray of ``f_prime``; if omitted, a function with divisor -delta_prime is
    solved for.  The output lives in one dimension more, with the new
    coordinate appended last; the extra "vertical" ray is the last ray.
    """
    delta = {Cone(c) for c in delta_prime_cones}
    for c in delta:
        if c not in f_prime.cones:
            raise SubfanNotContained(str(sorted(c)))
    for c in delta:
        for r in range(1, len(c)):
            for sub in combinations(sorted(c), r):
                if Cone(sub) not in delta:
                    raise SubfanNotContained("delta_prime is not closed under faces")
    if Cone() not in delta:
        delta.add(Cone())

    if values is None:
        values = _solve_modification_function(f_prime, delta)
    n = f_prime.lattice_rank
    lifted = [tuple(r) + (int(values.get(i, 0)),) for i, r in enumerate(f_prime.rays)]
    vertical = (0,) * n + (1,)
    rays = lifted + [vertical]
    v_idx = len(lifted)
    maximal = []
    max_delta = [c for c in delta if not any(c < d for d in delta)]
    for c in f_prime.maximal_cones:
        maximal.append(sorted(c))
    for c in max_delta:
        maximal.append(sorted(c) + [v_idx])
    labels = tuple(f_prime.ray_labels) + ("vertical",)
    return UnimodularFan.from_maximal_cones(
        n + 1, rays, maximal, ray_labels=labels,
        provenance={"modification_of": (f_prime, frozenset(delta)), "vertical_ray": v_idx},
    )


def _solve_modification_function(f_prime: UnimodularFan, delta: set) -> dict[int, int]:
    """Integral ray values of a cone-wise linear f with div(f) = -delta.

    For each codimension-one cone tau of f_prime, the order of f at tau is
    sum_eta f~_eta(v_eta) - f_tau(sum_eta v_eta), with v_eta the chosen lifts
    of the primitive normal vectors; it must be -1 on delta facets, 0 else.
    """
    d = f_prime.dim
    nrays = len(f_prime.rays)
    rows, rhs = [], []
    facets_delta = {c for c in delta if len(c) == d - 1}
    for tau in f_prime.cones_of_dim(d - 1):
        ups = [c for c in f_prime.cones_of_dim(d) if tau < c]
        if len(ups) < 2:
            continue
        row = [Fraction(0)] * nrays
        total = [Fraction(0)] * f_prime.lattice_rank
        for up in ups:
            (r,) = up - tau
            row[r] += 1
            total = [a + b for a, b in zip(total, f_prime.rays[r])]
        # subtract f restricted to tau evaluated at the sum of the lifts
        lam = QMatrix(f_prime.ray_matrix(tau)).solve(total) if tau else None
        if tau:
            assert lam is not None, "balancing sum must lie in span(tau)"
            for coef, r in zip(lam, sorted(tau)):
                row[r] -= coef
        else:
            assert all(x == 0 for x in total), "1-dimensional balancing fails"
        rows.append(row)
        rhs.append(Fraction(-1) if tau in facets_delta else Fraction(0))
    if not rows:
        return {}
    sol = QMatrix(rows).solve(rhs)
    if sol is None:
        raise SubfanNotContained("no cone-wise linear function has divisor -delta")
    scale = 1
    for x in sol:
        scale = scale * x.denominator // gcd(scale, x.denominator)
    if scale != 1:
        raise SubfanNotContained("divisor equation has no integral solution")
    return {i: int(x) for i, x in enumerate(sol)}


def bergman_modification_data(m: Matroid, a) -> tuple[UnimodularFan, list[frozenset], dict[int, int]]:
    """Canonical data realizing bergman_fan(m) as a modification.

    Returns (fan of m\\a, cones of the m/a subfan, integral function values)
    in the coordinates where the new direction is the a-coordinate.  Requires
    ``a`` proper and not the largest ground-set label.
    """
    ground = list(m.ground_set)
    if a == ground[-1]:
        raise ValueError("pick a label other than the largest (coordinate convention)")
    if m.is_loop(a) or m.is_coloop(a):
        raise ValueError("tropical modification needs a proper element")
    deletion = m.delete(a)
    f_prime = bergman_fan(deletion)
    # proper flats of m/a are F with F+a a flat of m (no simplicity needed)
    rest = frozenset(g for g in ground if g != a)
    contraction_flats = {
        f - {a} for f in m.flats().flats if a in f and f - {a} and f - {a} != rest
    }
    # the contraction subfan: cones whose flags consist of contraction flats
    sub_ray = {
        i for i, flat in enumerate(f_prime.ray_labels) if flat in contraction_flats
    }
    delta = [c for c in f_prime.cones if c <= sub_ray]
    dropped = ground[-1]
    flats_m = set(m.flats().flats)
    values = {}
    for i, flat in enumerate(f_prime.ray_labels):
        inside = 1 if dropped in flat else 0
        if flat in flats_m:
            values[i] = -inside
        else:
            values[i] = 1 - inside
    return f_prime, delta, values


# -- canonical compactification (face poset level) ------------------------------


@dataclass(frozen=True)
class CompactifiedFanPoset:
    """Faces (tau, sigma), tau <= sigma, of the canonical compactification.

    The face (tau', sigma') lies in the closure of (tau, sigma) iff
    tau <= tau' <= sigma' <= sigma; sedentarity of (tau, sigma) is tau.
    """

    fan: UnimodularFan
    faces: tuple[tuple[frozenset, frozenset], ...]

    @staticmethod
    def of(fan: UnimodularFan) -> "CompactifiedFanPoset":
        faces = []
        for sigma in sorted(fan.cones, key=lambda c: (len(c), sorted(c))):
            for k in range(len(sigma) + 1):
                for tau_t in combinations(sorted(sigma), k):
                    tau = Cone(tau_t)
                    if tau in fan.cones:
                        faces.append((tau, sigma))
        return CompactifiedFanPoset(fan, tuple(faces))

    def dim(self, face) -> int:
        tau, sigma = face
        return len(sigma) - len(tau)

    def sedentarity(self, face) -> frozenset:
        return face[0]

    def leq(self, f1, f2) -> bool:
        tau1, sigma1 = f1
        tau2, sigma2 = f2
        return tau2 <= tau1 and tau1 <= sigma1 and sigma1 <= sigma2

    def covers(self, face) -> list:
        return [g for g in self.faces if self.leq(face, g) and self.dim(g) == self.dim(face) + 1]


def compactified_face_poset(f: UnimodularFan) -> CompactifiedFanPoset:
    return CompactifiedFanPoset.of(f)


# -- checks used by tests -------------------------------------------------------


def check_balancing(f: UnimodularFan) -> bool:
    """Unit-weight balancing: around every codimension-one cone, the primitive
    normal vectors of the adjacent facets sum to zero modulo span(tau)."""
    d = f.dim
    for tau in f.cones_of_dim(d - 1):
        ups = [c for c in f.cones_of_dim(d) if tau < c]
        if len(ups) < 2:
            return False
        total = [0] * f.lattice_rank
        for up in ups:
            (r,) = up - tau
            total = [a + b for a, b in zip(total, f.rays[r])]
        if tau:
            lam = QMatrix(f.ray_matrix(tau)).solve(total)
            if lam is None:
                return False
        elif any(x != 0 for x in total):
            return False
    return True


def triangulate_by_blowups(f: UnimodularFan) -> UnimodularFan:
    """Resolve a simplicial fan to a unimodular one by repeated blow-ups at
    lattice witnesses in non-unimodular cones."""
    fan = f
    guard = 0
    while True:
        bad = None
        for c in sorted(fan.cones, key=lambda c: (len(c), sorted(c))):
            if c and smith_gcd_minors(fan.ray_matrix(c), len(c)) != 1:
                bad = c
                break
        if bad is None:
            return fan
        witness = interior_lattice_witness([fan.rays[i] for i in sorted(bad)])
        assert witness is not None
        fan = _blow_up_at_point(fan, witness)
        guard += 1
        if guard > 500:
            raise NotUnimodular("resolution did not terminate")


def _blow_up_at_point(f: UnimodularFan, x: Sequence[int]) -> UnimodularFan:
    xp = primitive_vector(x)
    if xp in f.rays:
        rho = f.rays.index(xp)
        rays = list(f.rays)
        labels = list(f.ray_labels)
    else:
        rays = list(f.rays) + [xp]
        labels = list(f.ray_labels) + [("blowup", xp)]
        rho = len(f.rays)

    def contains(c: frozenset) -> bool:
        if not c:
            return False
        lam = QMatrix(f.ray_matrix(c)).solve(qvec(xp))
        return lam is not None and all(v >= 0 for v in lam)

    maximal = []
    for c in f.maximal_cones:
        if not contains(c):
            maximal.append(sorted(c))
            continue
        for k in range(len(c)):
            for tau_t in combinations(sorted(c), k):
                tau = Cone(tau_t)
                if not contains(tau):
                    maximal.append(sorted(tau) + [rho])
    return UnimodularFan.from_maximal_cones(f.lattice_rank, rays, maximal, ray_labels=labels)
