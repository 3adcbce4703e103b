from fractions import Fraction

from trophodge.chow import ChowRing, StarRings
from trophodge.fans import Cone, UnimodularFan, bergman_fan, star_subdivide
from trophodge.hodge import (
    ample_certificate,
    ascent_descent_probe,
    check_HL,
    check_HR,
    expected_hr_signature,
    hodge_riemann_form,
    keel_decomposition,
    lefschetz_decomposition,
    primitive_part,
    strict_convexity_certificate,
)
from trophodge.matroids import Matroid
from trophodge.rationals import signature


def tp2_fan():
    return UnimodularFan.from_maximal_cones(
        2, [(1, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]]
    )


def u33():
    fan = bergman_fan(Matroid.uniform(3, 3))
    ring = ChowRing(fan)
    ell = ring.from_ray_values({i: 1 for i in range(6)})
    return fan, ring, ell


def test_hl_tp2():
    ring = ChowRing(tp2_fan())
    assert check_HL(ring, ring.generator(0)).holds
    zero = ring.zero(1)
    w = check_HL(ring, zero)
    assert not w.holds and w.failing_k == 0


def test_hl_u33():
    _, ring, ell = u33()
    assert check_HL(ring, ell).holds


def test_primitive_dims_u33():
    _, ring, ell = u33()
    assert len(primitive_part(ring, ell, 0)) == 1
    assert len(primitive_part(ring, ell, 1)) == 3  # 4 - 1 by Lefschetz decomposition


def test_hr_u33_signature_and_orthogonal_basis():
    fan, ring, ell = u33()
    q1 = hodge_riemann_form(ring, ell, 1)
    sig = signature(q1)
    assert (sig.n_plus, sig.n_minus, sig.n_zero) == (1, 3, 0)
    assert sig.index == -2 == expected_hr_signature(ring, 1)
    report = check_HR(ring, ell, "u33")
    assert report.hr and report.hl and report.pd
    # the paper's orthogonal witness basis with squares (-1,-1,-1,1)
    labels = {f: i for i, f in enumerate(fan.ray_labels)}
    x0 = ring.generator(labels[frozenset({0})])
    x1 = ring.generator(labels[frozenset({1})])
    x2 = ring.generator(labels[frozenset({2})])
    x01 = ring.generator(labels[frozenset({0, 1})])
    w = x0 + x01 + x1
    basis = [x0, x1, x2, w]
    squares = [ring.degree_of(ring.multiply(b, b)) for b in basis]
    assert squares == [-1, -1, -1, 1]
    for i in range(4):
        for j in range(i):
            assert ring.degree_of(ring.multiply(basis[i], basis[j])) == 0


def test_hr_u33_non_ample_class():
    fan, ring, _ = u33()
    labels = {f: i for i, f in enumerate(fan.ray_labels)}
    ellp = ring.from_ray_values(
        {labels[frozenset({1})]: 1, labels[frozenset({1, 2})]: 1, labels[frozenset({2})]: 1}
    )
    assert ring.degree_of(ring.multiply(ellp, ellp)) == 1
    assert check_HR(ring, ellp).hr
    cert = ample_certificate(ring, ellp)
    assert not cert.strictly_convex
    assert cert.failing_faces  # the function vanishes around the rho_0 ray


def test_ample_certificate_u33_sum_of_rays():
    _, ring, ell = u33()
    cert = ample_certificate(ring, ell)
    assert cert.strictly_convex
    assert all(f.margin > 0 for f in cert.faces)


def test_strict_convexity_single_cone_zero_function():
    quadrant = UnimodularFan.from_maximal_cones(2, [(1, 0), (0, 1)], [[0, 1]])
    cert = strict_convexity_certificate(quadrant, {})
    assert cert.strictly_convex


def test_affine_function_not_strict_on_complete_fan():
    ring = ChowRing(tp2_fan())
    cert = strict_convexity_certificate(tp2_fan(), {0: 1, 1: 0, 2: -1})
    # these are the values of the linear form x -> x_1, so nothing is strict
    assert not cert.strictly_convex
    del ring


def test_u34_paper_class():
    fan = bergman_fan(Matroid.uniform(3, 4))
    ring = ChowRing(fan)
    eps = Fraction(1, 100)
    labels = {f: i for i, f in enumerate(fan.ray_labels)}

    def L(*elts):
        return labels[frozenset(elts)]

    ell = ring.from_ray_values(
        {
            L(0): 2 + 2 * eps,
            L(2): 1,
            L(3): 1,
            L(0, 1): eps,
            L(0, 2): 3 + eps,
            L(0, 3): 3 + eps,
            L(2, 3): -1,
        }
    )
    report = check_HR(ring, ell, "u34")
    assert report.hr
    cert = ample_certificate(ring, ell)
    assert not cert.strictly_convex  # the paper's class is not ample
    # but all its restrictions to proper star fans are ample
    stars = StarRings(fan)
    for sigma in fan.cones:
        if not sigma:
            continue
        res = stars.restrict(Cone(), sigma, ell)
        cert_sigma = ample_certificate(stars.ring(sigma), res)
        assert cert_sigma.strictly_convex, sorted(sigma)


def test_lefschetz_decomposition_u33():
    _, ring, ell = u33()
    pieces = lefschetz_decomposition(ring, ell, 1)
    assert [len(p) for p in pieces] == [1, 3]


def test_keel_tp2():
    fan = tp2_fan()
    stars = StarRings(fan)
    sigma = Cone({0, 1})
    sub = star_subdivide(fan, sigma)
    out = keel_decomposition(stars, sigma, sub)
    assert out["dims_match"] and out["bijective"]
    assert out["graded_dims"] == (1, 2, 1)


def test_keel_ray_is_trivial():
    fan = tp2_fan()
    stars = StarRings(fan)
    sub = star_subdivide(fan, [0])
    out = keel_decomposition(stars, Cone({0}), sub)
    assert out["dims_match"] and out["bijective"]


def test_keel_u33():
    fan = bergman_fan(Matroid.uniform(3, 3))
    stars = StarRings(fan)
    sigma = next(c for c in fan.cones if len(c) == 2)
    sub = star_subdivide(fan, sigma)
    out = keel_decomposition(stars, sigma, sub)
    assert out["dims_match"] and out["bijective"]
    assert out["graded_dims"] == (1, 5, 1)


def test_ascent_descent_tp2():
    fan = tp2_fan()
    stars = StarRings(fan)
    sigma = Cone({0, 1})
    report = ascent_descent_probe(stars, sigma)
    assert report["base_HR"] and report["star_HR"]
    assert all(v["HR"] for v in report["per_eps"])


def test_hr_implies_hl_implies_pd_on_corpus():
    for m in [Matroid.uniform(2, 3), Matroid.uniform(3, 3), Matroid.uniform(3, 4)]:
        ring = ChowRing(bergman_fan(m))
        ell = ring.from_ray_values({i: 1 for i in range(len(ring.fan.rays))})
        rep = check_HR(ring, ell)
        if rep.hr:
            assert rep.hl
        if rep.hl:
            assert rep.pd


def test_local_hr_implies_hl():
    # if HR holds on every ray star, HL holds for positive combinations
    fan = bergman_fan(Matroid.uniform(3, 4))
    ring = ChowRing(fan)
    stars = StarRings(fan)
    ell = ring.from_ray_values({i: 1 for i in range(len(fan.rays))})
    all_stars_hr = all(
        check_HR(stars.ring(c), stars.restrict(Cone(), c, ell)).hr
        for c in fan.cones_of_dim(1)
    )
    assert all_stars_hr
    assert check_HL(ring, ell).holds
