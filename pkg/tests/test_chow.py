from fractions import Fraction
from itertools import combinations

import pytest

from trophodge.chow import (
    ChowRing,
    DegreeOverflow,
    StarRings,
    modification_check,
    tensor_check,
)
from trophodge.fans import (
    Cone,
    UnimodularFan,
    bergman_fan,
    bergman_modification_data,
    product_fan,
    tropical_modification,
)
from trophodge.matroids import Matroid


def tp1_fan():
    return UnimodularFan.from_maximal_cones(1, [(1,), (-1,)], [[0], [1]])


def tp2_fan():
    return UnimodularFan.from_maximal_cones(
        2, [(1, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]]
    )


def u33_ring():
    fan = bergman_fan(Matroid.uniform(3, 3))
    return fan, ChowRing(fan)


def flat_gen(fan, ring, flat):
    return ring.generator(fan.ray_labels.index(frozenset(flat)))


def test_tp2_truncated_polynomial_ring():
    ring = ChowRing(tp2_fan())
    assert ring.graded_dims() == (1, 1, 1)
    x = ring.generator(0)
    assert ring.degree_of(x * x) == 1


def test_zero_fan_ring():
    zero = UnimodularFan.from_maximal_cones(0, [], [[]])
    ring = ChowRing(zero)
    assert ring.graded_dims() == (1,)
    assert ring.degree_of(ring.one()) == 1


def test_u33_graded_dims():
    _, ring = u33_ring()
    assert ring.graded_dims() == (1, 4, 1)


def test_u33_degree_table():
    fan, ring = u33_ring()
    for f, g in combinations(fan.ray_labels, 2):
        xf, xg = flat_gen(fan, ring, f), flat_gen(fan, ring, g)
        expected = 1 if (f < g or g < f) else 0
        assert ring.degree_of(xf * xg) == expected, (f, g)
    for f in fan.ray_labels:
        xf = flat_gen(fan, ring, f)
        assert ring.degree_of(xf * xf) == -1


def test_u33_ell_squared_is_six():
    fan, ring = u33_ring()
    ell = ring.from_ray_values({i: 1 for i in range(6)})
    assert ring.degree_of(ell * ell) == 6


def test_unit_and_degree_overflow():
    fan, ring = u33_ring()
    a = ring.from_ray_values({0: 3, 2: -1})
    assert (ring.one() * a).coords == a.coords
    omega = ring.element(ring.d, ring.omega)
    assert ring.degree_of(omega) == 1
    with pytest.raises(DegreeOverflow):
        ring.multiply(omega, a)


def test_linear_function_is_zero_class():
    fan, ring = u33_ring()
    # values of the globally linear function x -> first coordinate
    values = {i: fan.rays[i][0] for i in range(len(fan.rays))}
    assert ring.from_ray_values(values).is_zero()


def test_poincare_pairing_u33():
    _, ring = u33_ring()
    m = ring.poincare_pairing(1)
    assert m.rows == m.cols == 4
    assert m.rank() == 4
    assert ring.poincare_duality_holds()


def test_poincare_duality_on_corpus():
    K4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    for m in [Matroid.uniform(2, 3), Matroid.uniform(2, 4), Matroid.uniform(3, 4), Matroid.graphic(K4)]:
        ring = ChowRing(bergman_fan(m))
        assert ring.poincare_duality_holds()
        dims = ring.graded_dims()
        assert dims == tuple(reversed(dims))


def test_restriction_to_ray_kills_incomparable_u33():
    fan, ring = u33_ring()
    stars = StarRings(fan)
    rho0 = fan.ray_labels.index(frozenset({0}))
    x1 = flat_gen(fan, ring, {1})
    restricted = stars.restrict(Cone(), Cone({rho0}), x1)
    assert restricted.is_zero()
    one = stars.restrict(Cone(), Cone({rho0}), ring.one())
    assert one.coords == (1,)


def test_restriction_is_surjective_ring_map_u33():
    fan, _ = u33_ring()
    stars = StarRings(fan)
    for sigma in fan.cones:
        if not sigma:
            continue
        ring_sigma = stars.ring(sigma)
        for k in range(ring_sigma.d + 1):
            mat = stars.restriction_matrix(Cone(), sigma, k)
            assert mat.rank() == ring_sigma.dim(k), (sorted(sigma), k)


def test_restriction_multiplicative():
    # parent of dimension 3 so a ray-star still has products in degree 2
    fan = product_fan(tp2_fan(), tp1_fan())
    ring = ChowRing(fan)
    stars = StarRings(fan)
    for sigma in fan.cones_of_dim(1):
        a = ring.from_ray_values({0: 2, 1: -1, 3: 5})
        b = ring.from_ray_values({2: 1, 4: 7})
        lhs = stars.restrict(Cone(), sigma, ring.multiply(a, b))
        rhs = stars.ring(sigma).multiply(
            stars.restrict(Cone(), sigma, a), stars.restrict(Cone(), sigma, b)
        )
        assert lhs.coords == rhs.coords


def test_gysin_identities_u33():
    fan, ring = u33_ring()
    stars = StarRings(fan)
    rho = fan.ray_labels.index(frozenset({1}))
    sigma = Cone({rho})
    x_sigma = ring.generator(rho)
    for rho2 in range(6):
        x = ring.generator(rho2)
        # gys(i*(x)) = x_{sigma/0} * x
        lhs = stars.gys(sigma, Cone(), stars.restrict(Cone(), sigma, x))
        rhs = ring.multiply(x_sigma, x)
        assert lhs.coords == rhs.coords
    # deg_sigma = deg_0 o gys on the canonical element of the star
    ring_sigma = stars.ring(sigma)
    omega_sigma = ring_sigma.element(ring_sigma.d, ring_sigma.omega)
    assert ring.degree_of(stars.gys(sigma, Cone(), omega_sigma)) == ring_sigma.degree_of(omega_sigma)


def test_gysin_restriction_duality():
    # deg_tau(x * gys(y)) = deg_sigma(i*(x) * y) on a 2-cone of U(3,3)
    fan, ring = u33_ring()
    stars = StarRings(fan)
    sigma = next(c for c in fan.cones if len(c) == 1)
    ring_sigma = stars.ring(sigma)
    for m in ring.basis[1]:
        x = ring.element(1, ring.reduce_monomial(1, m))
        for ms in ring_sigma.basis[0]:
            y = ring_sigma.one()
            lhs = ring.degree_of(ring.multiply(x, stars.gys(sigma, Cone(), y)))
            rhs = ring_sigma.degree_of(ring_sigma.multiply(stars.restrict(Cone(), sigma, x), y))
            assert lhs == rhs


def test_projection_formula():
    fan, ring = u33_ring()
    stars = StarRings(fan)
    sigma = next(c for c in fan.cones if len(c) == 1)
    ring_sigma = stars.ring(sigma)
    x = ring.from_ray_values({0: 1, 5: -2})
    y = ring_sigma.one()
    lhs = stars.gys(sigma, Cone(), ring_sigma.multiply(stars.restrict(Cone(), sigma, x), y))
    rhs = ring.multiply(x, stars.gys(sigma, Cone(), y))
    assert lhs.coords == rhs.coords


def test_tensor_check_tp1xtp1():
    f = tp1_fan()
    p = product_fan(f, f)
    r1 = ChowRing(f)
    r12 = ChowRing(p)
    assert r12.graded_dims() == (1, 2, 1)
    assert tensor_check(r1, r1, r12)


def test_tensor_check_u33_x_tp1():
    f1 = bergman_fan(Matroid.uniform(3, 3))
    f2 = tp1_fan()
    p = product_fan(f1, f2)
    r12 = ChowRing(p)
    assert r12.graded_dims() == (1, 5, 5, 1)
    assert tensor_check(ChowRing(f1), ChowRing(f2), r12)


def test_modification_preserves_chow():
    m = Matroid.uniform(2, 3)
    f_prime, delta, values = bergman_modification_data(m, 0)
    modified = tropical_modification(f_prime, delta, values)
    assert modification_check(modified)


def test_modification_preserves_chow_u34():
    m = Matroid.uniform(3, 4)
    f_prime, delta, values = bergman_modification_data(m, 0)
    modified = tropical_modification(f_prime, delta, values)
    assert modification_check(modified)
    dims_modified = ChowRing(modified).graded_dims()
    dims_base = ChowRing(f_prime).graded_dims()
    assert dims_modified == dims_base
