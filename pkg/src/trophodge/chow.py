"""Chow rings of unimodular fans.

A^*(Sigma) is the quotient of the polynomial ring on ray variables by the
ideal of non-cone monomials (I1) together with the linear relations
sum_rho f(e_rho) x_rho for integral linear forms f (I2).  Degrees are computed
by dense exact linear algebra over the monomial span of each degree; bases are
chosen among square-free monomials whenever possible.

Restriction and Gysin maps between the Chow rings of star fans of a common
parent fan are provided, together with the degree map, Poincare pairing, and
the generator-level isomorphism checks for products and tropical
modifications.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .fans import Cone, UnimodularFan, star_fan
from .lattice import quotient_projection
from .rationals import QMatrix, qvec

Monomial = tuple[int, ...]  # sorted ray indices with multiplicity


class NotUnimodularFan(ValueError):
    pass


class DegreeOverflow(ValueError):
    pass


class WrongDegree(ValueError):
    pass


class IncompatibleStars(ValueError):
    pass


class NotAStarSubdivision(ValueError):
    pass


def _compositions(total: int, parts: int):
    """All positive integer compositions of ``total`` into ``parts`` parts."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class ChowElement:
    ring: "ChowRing"
    degree: int
    coords: tuple[Fraction, ...]

    def __add__(self, other: "ChowElement") -> "ChowElement":
        if self.degree != other.degree or self.ring.fan != other.ring.fan:
            raise WrongDegree("can only add elements of equal degree in the same ring")
        return ChowElement(self.ring, self.degree, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "ChowElement") -> "ChowElement":
        return self + (-1) * other

    def __rmul__(self, scalar) -> "ChowElement":
        c = Fraction(scalar)
        return ChowElement(self.ring, self.degree, tuple(c * a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, ChowElement):
            return self.ring.multiply(self, other)
        return self.__rmul__(other)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)


class ChowRing:
    """The graded Chow ring of a unimodular fan, with exact rational data."""

    def __init__(self, fan: UnimodularFan, check_unimodular: bool = True):
        if check_unimodular and not fan.is_unimodular():
            raise NotUnimodularFan("Chow rings are built for unimodular fans")
        self.fan = fan
        self.d = fan.dim
        n = fan.lattice_rank
        self.monomials: list[list[Monomial]] = []
        self.mono_index: list[dict[Monomial, int]] = []
        self.basis: list[list[Monomial]] = []
        self.proj: list[QMatrix] = []

        for k in range(self.d + 1):
            monos = self._degree_monomials(k)
            index = {m: i for i, m in enumerate(monos)}
            self.monomials.append(monos)
            self.mono_index.append(index)
            if k == 0:
                self.basis.append([()])
                self.proj.append(QMatrix.identity(1))
                continue
            rows = []
            for m in self.monomials[k - 1]:
                for i in range(n):
                    row = [Fraction(0)] * len(monos)
                    nonzero = False
                    for rho in range(len(fan.rays)):
                        coeff = fan.rays[rho][i]
                        if coeff == 0:
                            continue
                        prod = tuple(sorted(m + (rho,)))
                        j = index.get(prod)
                        if j is not None:
                            row[j] += coeff
                            nonzero = True
                    if nonzero:
                        rows.append(row)
            if rows:
                red, pivots = QMatrix(rows).rref()
            else:
                red, pivots = QMatrix.zero(0, len(monos)), ()
            pivot_set = set(pivots)
            basis_idx = [j for j in range(len(monos)) if j not in pivot_set]
            # pivot column p of rref row r satisfies e_p = -sum over basis cols
            proj_cols = {j: pos for pos, j in enumerate(basis_idx)}
            pmat = [[Fraction(0)] * len(monos) for _ in range(len(basis_idx))]
            for pos, j in enumerate(basis_idx):
                pmat[pos][j] = Fraction(1)
            for r, p in enumerate(pivots):
                for j in basis_idx:
                    if red.data[r][j] != 0:
                        pmat[proj_cols[j]][p] = -red.data[r][j]
            self.basis.append([monos[j] for j in basis_idx])
            self.proj.append(QMatrix(pmat) if basis_idx else QMatrix.zero(0, len(monos)))

        if self.dim(0) != 1:
            raise NotUnimodularFan("A^0 must be one-dimensional")
        self._init_degree_map()

    def _degree_monomials(self, k: int) -> list[Monomial]:
        if k == 0:
            return [()]
        monos: set[Monomial] = set()
        for c in self.fan.cones:
            if 0 < len(c) <= k:
                idx = sorted(c)
                for comp in _compositions(k, len(idx)):
                    monos.add(tuple(sorted(sum(([r] * e for r, e in zip(idx, comp)), []))))
        def square_free(m):
            return len(set(m)) == len(m)
        return sorted(monos, key=lambda m: (square_free(m), m))

    def _init_degree_map(self) -> None:
        d = self.d
        maximal = [c for c in self.fan.maximal_cones if len(c) == d]
        omegas = []
        for c in maximal:
            m = tuple(sorted(c))
            omegas.append(self.reduce_monomial(d, m))
        if not omegas:
            omegas = [self.reduce_monomial(0, ())]
        first = omegas[0]
        if any(o != first for o in omegas[1:]):
            raise NotUnimodularFan("canonical element depends on the maximal cone")
        self.omega = first
        nonzero = [i for i, x in enumerate(first) if x != 0]
        if self.dim(d) != 1 or len(nonzero) != 1:
            raise NotUnimodularFan("top graded piece is not generated by the canonical element")
        self._omega_scale = first[nonzero[0]]
        self._omega_pos = nonzero[0]

    # -- graded structure -------------------------------------------------

    def dim(self, k: int) -> int:
        if not 0 <= k <= self.d:
            return 0
        return len(self.basis[k])

    def graded_dims(self) -> tuple[int, ...]:
        return tuple(self.dim(k) for k in range(self.d + 1))

    def reduce_monomial(self, k: int, m: Monomial) -> tuple[Fraction, ...]:
        if frozenset(m) not in self.fan.cones:
            return tuple(Fraction(0) for _ in range(self.dim(k)))
        j = self.mono_index[k][tuple(sorted(m))]
        return self.proj[k].column(j)

    def element(self, k: int, coords: Sequence) -> ChowElement:
        coords = qvec(coords)
        if len(coords) != self.dim(k):
            raise WrongDegree("coordinate length mismatch")
        return ChowElement(self, k, coords)

    def zero(self, k: int) -> ChowElement:
        return ChowElement(self, k, tuple(Fraction(0) for _ in range(self.dim(k))))

    def one(self) -> ChowElement:
        return ChowElement(self, 0, (Fraction(1),))

    def generator(self, rho: int) -> ChowElement:
        """The class x_rho of a ray."""
        return ChowElement(self, 1, self.reduce_monomial(1, (rho,)))

    def from_ray_values(self, values) -> ChowElement:
        """The degree-one class sum values[rho] * x_rho (a cone-wise linear
        function given by its values on the primitive ray generators)."""
        coords = [Fraction(0)] * self.dim(1)
        for rho, v in dict(values).items():
            col = self.reduce_monomial(1, (rho,))
            coords = [a + Fraction(v) * b for a, b in zip(coords, col)]
        return ChowElement(self, 1, tuple(coords))

    # -- multiplication ----------------------------------------------------

    def multiply(self, a: ChowElement, b: ChowElement) -> ChowElement:
        if a.ring.fan != self.fan or b.ring.fan != self.fan:
            raise IncompatibleStars("elements of a different ring")
        k = a.degree + b.degree
        if k > self.d:
            raise DegreeOverflow(f"degree {k} exceeds top degree {self.d}")
        out = [Fraction(0)] * self.dim(k)
        for i, ca in enumerate(a.coords):
            if ca == 0:
                continue
            ma = self.basis[a.degree][i]
            for j, cb in enumerate(b.coords):
                if cb == 0:
                    continue
                mb = self.basis[b.degree][j]
                prod = tuple(sorted(ma + mb))
                if frozenset(prod) not in self.fan.cones:
                    continue
                col = self.reduce_monomial(k, prod)
                f = ca * cb
                out = [x + f * y for x, y in zip(out, col)]
        return ChowElement(self, k, tuple(out))

    def multiplication_matrix(self, ell: ChowElement, k: int) -> QMatrix:
        """Matrix of multiplication by a degree-one class, A^k -> A^{k+1}.

        A^{d+1} is the zero space, so the matrix has zero rows for k = d.
        """
        if k + 1 > self.d:
            return QMatrix.zero(0, self.dim(k))
        cols = []
        for m in self.basis[k]:
            prod = self.multiply(ell, ChowElement(self, k, tuple(
                Fraction(1) if mm == m else Fraction(0) for mm in self.basis[k]
            )))
            cols.append(prod.coords)
        if not cols:
            return QMatrix.zero(self.dim(k + 1), 0)
        return QMatrix.from_columns(cols)

    def power_matrix(self, ell: ChowElement, power: int, k: int) -> QMatrix:
        """Matrix of multiplication by ell^power from A^k to A^{k+power}."""
        if k + power > self.d:
            return QMatrix.zero(0, self.dim(k))
        mat = QMatrix.identity(self.dim(k))
        deg = k
        for _ in range(power):
            mat = self.multiplication_matrix(ell, deg) * mat
            deg += 1
        return mat

    # -- degree map and pairing ----------------------------------------------

    def degree_of(self, a: ChowElement) -> Fraction:
        if a.degree != self.d:
            raise WrongDegree("degree map applies to the top graded piece")
        return a.coords[self._omega_pos] / self._omega_scale

    def poincare_pairing(self, k: int) -> QMatrix:
        rows = []
        for m1 in self.basis[k]:
            row = []
            e1 = ChowElement(self, k, tuple(Fraction(1) if m == m1 else Fraction(0) for m in self.basis[k]))
            for m2 in self.basis[self.d - k]:
                e2 = ChowElement(self, self.d - k, tuple(
                    Fraction(1) if m == m2 else Fraction(0) for m in self.basis[self.d - k]
                ))
                row.append(self.degree_of(self.multiply(e1, e2)))
            rows.append(row)
        if not rows:
            return QMatrix.zero(0, self.dim(self.d - k))
        return QMatrix(rows)

    def poincare_duality_holds(self) -> bool:
        for k in range(self.d + 1):
            if self.dim(k) != self.dim(self.d - k):
                return False
            if self.poincare_pairing(k).rank() != self.dim(k):
                return False
        return True


# -- star-fan rings with restriction and Gysin maps ---------------------------


class StarRings:
    """Chow rings of the star fans of a fixed parent fan, with the restriction
    and Gysin maps between them.  Star fans are cached per cone."""

    def __init__(self, parent: UnimodularFan):
        self.parent = parent
        self._stars: dict[frozenset, UnimodularFan] = {}
        self._rings: dict[frozenset, ChowRing] = {}

    def star(self, cone: Iterable[int]) -> UnimodularFan:
        c = self.parent.require_cone(cone)
        if c not in self._stars:
            self._stars[c] = star_fan(self.parent, c) if c else self.parent
        return self._stars[c]

    def ring(self, cone: Iterable[int]) -> ChowRing:
        c = self.parent.require_cone(cone)
        if c not in self._rings:
            self._rings[c] = ChowRing(self.star(c), check_unimodular=False)
        return self._rings[c]

    def _parent_ray(self, cone: frozenset) -> tuple[int, ...]:
        if not cone:
            return tuple(range(len(self.parent.rays)))
        return self.star(cone).provenance["parent_ray"]

    def _star_index(self, cone: frozenset) -> dict[int, int]:
        return {r: i for i, r in enumerate(self._parent_ray(cone))}

    def restriction_on_generators(self, tau: Iterable[int], sigma: Iterable[int]) -> dict[int, ChowElement]:
        """Images of the generators x_rho of A^1(Sigma^tau) in A^1(Sigma^sigma).

        Case split on each ray rho of Sigma^tau (with parent ray r):
        keep x_rho when sigma + r is a cone, substitute the I2 expression when
        r lies in sigma, send to zero otherwise.
        """
        tau = self.parent.require_cone(tau)
        sigma = self.parent.require_cone(sigma)
        if not tau <= sigma:
            raise IncompatibleStars("tau must be a face of sigma")
        ring_sigma = self.ring(sigma)
        star_tau = self.star(tau)
        idx_tau = self._star_index(tau)
        idx_sigma = self._star_index(sigma)
        extra = sorted(sigma - tau)

        # coordinates of sigma/tau inside N^tau, and the dual functionals of
        # its rays within a deterministic unimodular completion
        if extra:
            gens = [star_tau.rays[idx_tau[r]] for r in extra]
            _, duals = quotient_projection(gens, star_tau.lattice_rank)
        else:
            duals = []

        images: dict[int, ChowElement] = {}
        for r, rho in idx_tau.items():
            if r in sigma:
                pos = extra.index(r)
                f = duals[pos]
                coords = [Fraction(0)] * ring_sigma.dim(1)
                for r2, rho2 in idx_sigma.items():
                    vec = star_tau.rays[idx_tau[r2]]
                    val = sum(Fraction(a) * b for a, b in zip(f, vec))
                    if val:
                        col = ring_sigma.reduce_monomial(1, (rho2,))
                        coords = [x - val * y for x, y in zip(coords, col)]
                images[rho] = ChowElement(ring_sigma, 1, tuple(coords))
            elif sigma | {r} in self.parent.cones:
                images[rho] = ring_sigma.generator(idx_sigma[r])
            else:
                images[rho] = ring_sigma.zero(1)
        return images

    def restriction_matrix(self, tau, sigma, k: int) -> QMatrix:
        """Matrix of i*_{tau<sigma}: A^k(Sigma^tau) -> A^k(Sigma^sigma)."""
        tau = self.parent.require_cone(tau)
        sigma = self.parent.require_cone(sigma)
        ring_tau = self.ring(tau)
        ring_sigma = self.ring(sigma)
        if k > ring_sigma.d:
            return QMatrix.zero(0, ring_tau.dim(k))
        gens = self.restriction_on_generators(tau, sigma)
        cols = []
        for m in ring_tau.basis[k]:
            img = ring_sigma.one()
            for rho in m:
                img = ring_sigma.multiply(img, gens[rho])
            cols.append(img.coords)
        if not cols:
            return QMatrix.zero(ring_sigma.dim(k), 0)
        return QMatrix.from_columns(cols)

    def restrict(self, tau, sigma, a: ChowElement) -> ChowElement:
        mat = self.restriction_matrix(tau, sigma, a.degree)
        return ChowElement(self.ring(sigma), a.degree, mat.apply(a.coords))

    def gysin_matrix(self, sigma, tau, k: int) -> QMatrix:
        """Matrix of gys_{sigma>tau}: A^k(Sigma^sigma) -> A^{k+dim}(Sigma^tau),
        multiplication by the product of the x_rho for rho in sigma - tau."""
        tau = self.parent.require_cone(tau)
        sigma = self.parent.require_cone(sigma)
        if not tau <= sigma:
            raise IncompatibleStars("tau must be a face of sigma")
        ring_tau = self.ring(tau)
        ring_sigma = self.ring(sigma)
        idx_tau = self._star_index(tau)
        idx_sigma = self._star_index(sigma)
        back = {rho: r for r, rho in idx_sigma.items()}
        extra = sorted(sigma - tau)
        r_shift = len(extra)
        cols = []
        for m in ring_sigma.basis[k]:
            lifted = tuple(sorted([idx_tau[back[rho]] for rho in m] + [idx_tau[r] for r in extra]))
            cols.append(ring_tau.reduce_monomial(k + r_shift, lifted))
        if not cols:
            return QMatrix.zero(ring_tau.dim(k + r_shift), 0)
        return QMatrix.from_columns(cols)

    def gys(self, sigma, tau, a: ChowElement) -> ChowElement:
        mat = self.gysin_matrix(sigma, tau, a.degree)
        shift = len(self.parent.require_cone(sigma)) - len(self.parent.require_cone(tau))
        return ChowElement(self.ring(tau), a.degree + shift, mat.apply(a.coords))

    def restrict_class(self, sigma, a: ChowElement) -> ChowElement:
        """Restriction from the full fan (tau = 0) to Sigma^sigma."""
        return self.restrict(Cone(), sigma, a)


# -- ring-level checks ----------------------------------------------------------


def tensor_check(r1: ChowRing, r2: ChowRing, r12: ChowRing) -> bool:
    """Kunneth check for a product fan: graded dimensions convolve and the
    degree map factorizes on the canonical elements."""
    dims1, dims2, dims12 = r1.graded_dims(), r2.graded_dims(), r12.graded_dims()
    d1, d2 = r1.d, r2.d
    if r12.d != d1 + d2:
        return False
    for k in range(r12.d + 1):
        conv = sum(r1.dim(i) * r2.dim(k - i) for i in range(k + 1))
        if conv != r12.dim(k):
            return False
    # deg appliance: omega_1 x omega_2 is the canonical element of the product
    prov = r12.fan.provenance.get("product_of")
    if prov is not None:
        f1, f2 = prov
        c1 = next(c for c in f1.maximal_cones if len(c) == d1)
        c2 = next(c for c in f2.maximal_cones if len(c) == d2)
        k1 = len(f1.rays)
        mono = tuple(sorted(list(c1) + [k1 + i for i in c2]))
        cls = ChowElement(r12, r12.d, r12.reduce_monomial(r12.d, mono))
        if r12.degree_of(cls) != r1.degree_of(
            ChowElement(r1, d1, r1.reduce_monomial(d1, tuple(sorted(c1))))
        ) * r2.degree_of(ChowElement(r2, d2, r2.reduce_monomial(d2, tuple(sorted(c2))))):
            return False
    return bool(dims1 and dims2 and dims12)


def modification_check(
    modified: UnimodularFan,
    ring_modified: Optional[ChowRing] = None,
    ring_base: Optional[ChowRing] = None,
    h: Optional[Sequence] = None,
) -> bool:
    """The generator substitution phi: A(Sigma) -> A(Sigma') for a tropical
    modification Sigma of Sigma' is bijective in every degree.

    ``h`` is an integral linear form on the modified fan's lattice taking
    value 1 on the vertical direction; the default is the last dual
    coordinate.
    """
    prov = modified.provenance.get("modification_of")
    if prov is None:
        raise IncompatibleStars("fan does not record a tropical modification")
    base, _ = prov
    v_idx = modified.provenance["vertical_ray"]
    n = modified.lattice_rank
    if h is None:
        h = [0] * (n - 1) + [1]
    h = qvec(h)
    if sum(a * b for a, b in zip(h, modified.rays[v_idx])) != 1:
        raise IncompatibleStars("h must take value 1 on the vertical ray")
    ra = ring_modified or ChowRing(modified)
    rb = ring_base or ChowRing(base)
    if ra.d != rb.d:
        return False
    # generator images: x_vertical -> -sum h(e_r) x_r, other rays map by index
    images: dict[int, ChowElement] = {}
    for rho in range(len(modified.rays)):
        if rho == v_idx:
            coords = [Fraction(0)] * rb.dim(1)
            for r2 in range(len(base.rays)):
                val = sum(a * b for a, b in zip(h, modified.rays[r2]))
                if val:
                    col = rb.reduce_monomial(1, (r2,))
                    coords = [x - val * y for x, y in zip(coords, col)]
            images[rho] = ChowElement(rb, 1, tuple(coords))
        else:
            images[rho] = rb.generator(rho)
    for k in range(ra.d + 1):
        if ra.dim(k) != rb.dim(k):
            return False
        cols = []
        for m in ra.basis[k]:
            img = rb.one()
            for rho in m:
                img = rb.multiply(img, images[rho])
            cols.append(img.coords)
        if k and cols and QMatrix.from_columns(cols).rank() != ra.dim(k):
            return False
    return True
