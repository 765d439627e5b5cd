import math

import numpy as np
import pytest

import residue_lab.continuation as cont
import residue_lab.manifold as M
import residue_lab.oracles as O
from residue_lab._util import NumericError
from residue_lab.continuation import ReachError, WeightKind


# --- profiles ---------------------------------------------------------------

def test_circle_leading_coefficient(circle_profile):
    # abar_0 = o_0 = 2 for the constant weight
    assert circle_profile.coeffs[0] == pytest.approx(2.0, rel=1e-3)
    assert circle_profile.coeffs[1] == pytest.approx(0.25, rel=1e-6)


def test_sphere_leading_coefficient(sphere2_profile):
    assert sphere2_profile.coeffs[0] == pytest.approx(2 * math.pi, rel=1e-3)


def test_torus_leading_coefficient(torus_profile):
    assert torus_profile.coeffs[0] == pytest.approx(2 * math.pi, rel=1e-3)


def test_geodesic_sphere_profile():
    prof = cont.distance_profile(M.sphere(2, 1.0), geodesic=True)
    assert prof.coeffs[0] == pytest.approx(2 * math.pi, rel=1e-9)
    assert prof.coeffs[1] == pytest.approx(-math.pi / 3, rel=1e-7)
    with pytest.raises(NumericError):
        cont.distance_profile(M.torus(2, 1), geodesic=True)


def test_profile_evenness(circle_profile, torus_profile):
    leak = cont.evenness_diagnostic(M.circle(1.0), circle_profile)
    assert leak < 1e-3
    leak_t = cont.evenness_diagnostic(M.torus(2.0, 1.0), torus_profile)
    assert leak_t < 1e-3


def test_reach_refusal():
    with pytest.raises(ReachError):
        cont.distance_profile(M.torus(2.0, 1.0), delta=2.0)


def test_profile_serialization_roundtrip(circle_profile):
    text = circle_profile.to_text()
    back = cont.DistanceProfile.from_text(text)
    assert back.to_text() == text
    v0 = cont.beta_eval(circle_profile, 1.0).value
    v1 = cont.beta_eval(back, 1.0).value
    # the deserialized profile evaluates tails through the cell table
    assert abs(v0 - v1) / abs(v0) < 1e-6
    r0 = cont.residue_from_profile(circle_profile, -3)[0]
    r1 = cont.residue_from_profile(back, -3)[0]
    assert r0 == r1


# --- beta evaluation ---------------------------------------------------------

def test_beta_circle_values(circle_profile):
    assert cont.beta_eval(circle_profile, 0.0).value.real == pytest.approx(
        (2 * math.pi) ** 2, rel=1e-9)
    assert cont.beta_eval(circle_profile, 1.0).value.real == pytest.approx(
        16 * math.pi, rel=1e-9)
    assert abs(cont.beta_eval(circle_profile, -2.0).value) < 1e-6


def test_beta_matches_direct_double_quadrature(circle_profile, torus_profile):
    for z in (2.0, 1.0, -0.4):
        d = cont.direct_double_quadrature(M.circle(1.0), z)
        b = cont.beta_eval(circle_profile, z).value
        assert abs(b - d) / abs(d) < 1e-7
    # torus: z = 2 makes the pair integrand polynomial, so the plain pair sum
    # is spectrally accurate too
    d = cont.direct_double_quadrature(M.torus(2.0, 1.0), 2.0, order=48)
    b = cont.beta_eval(torus_profile, 2.0).value
    assert abs(b - d) / abs(d) < 1e-7
    # at z = 1 the all-pairs sum carries the diagonal kink error
    d = cont.direct_double_quadrature(M.torus(2.0, 1.0), 1.0, order=48)
    b = cont.beta_eval(torus_profile, 1.0).value
    assert abs(b - d) / abs(d) < 1e-4


def test_beta_complex_z(circle_profile):
    z = 0.5 + 1.25j
    ref = O.beta_sphere(2, z)
    val = cont.beta_eval(circle_profile, z).value
    assert abs(val - ref) / abs(ref) < 1e-9


def test_pole_guard_returns_residue_and_finite_part(circle_profile):
    be = cont.beta_eval(circle_profile, -1.0 + 1e-5)
    assert be.at_pole
    assert be.nearest_pole == -1.0
    assert be.residue == pytest.approx(4 * math.pi, rel=1e-6)
    assert be.value == be.finite_part


def test_homogeneity_circle():
    prof1 = cont.distance_profile(M.circle(1.0))
    prof2 = cont.distance_profile(M.circle(2.0))
    for z in (1.3, -0.5, -2.0):
        b1 = cont.beta_eval(prof1, z).value
        b2 = cont.beta_eval(prof2, z).value
        assert abs(b2 - 2.0 ** (z + 2) * b1) <= 1e-9 * max(abs(b2), 1.0)
    # residue homogeneity R_{cM}(k) = c^(k+2m) R_M(k), m = 1
    r1 = cont.residue_from_profile(prof1, -3)[0]
    r2 = cont.residue_from_profile(prof2, -3)[0]
    assert r2 == pytest.approx(2.0 ** (-3 + 2) * r1, rel=1e-9)


def test_homogeneity_empirical(ellipse_profile):
    scaled = cont.distance_profile(M.ellipse(2.0, 1.2))
    for z in (1.0, -2.0):
        b1 = cont.beta_eval(ellipse_profile, z).value
        b2 = cont.beta_eval(scaled, z).value
        assert abs(b2 - 2.0 ** (z + 2) * b1) <= 1e-6 * max(abs(b2), abs(b1), 1.0)


# --- Hadamard finite parts ---------------------------------------------------

def test_hadamard_equals_beta_off_poles(circle_profile):
    assert cont.hadamard_finite_part(circle_profile, -2.0) == pytest.approx(
        cont.beta_eval(circle_profile, -2.0).value, abs=1e-12)


def test_round_circle_minimizes_regularized_energy(ellipse_profile, circle_profile):
    e_circle = cont.hadamard_finite_part(circle_profile, -2.0).real
    e_ellipse = cont.hadamard_finite_part(ellipse_profile, -2.0).real
    assert abs(e_circle) < 1e-6
    assert e_ellipse > 1e-3


def test_ball_finite_part_matches_closed_form_limit():
    body = M.ball(3, 1.0)
    be = cont.body_beta(body, -3.0)
    assert be.at_pole
    h = 1e-5
    res = O.beta_ball_residue(3, -3)
    lim = 0.5 * (O.beta_ball(3, -3 + h) - res / h + O.beta_ball(3, -3 - h) + res / h)
    assert be.residue == pytest.approx(res, rel=1e-9)
    assert be.finite_part.real == pytest.approx(lim.real, rel=1e-5)


# --- bodies ------------------------------------------------------------------

def test_body_beta_matches_oracle_all_z():
    body = M.ball(3, 1.0)
    prof = cont.body_profile(body)
    for z in (3.3, 1.1, -0.7, -2.9, -2.0):
        ref = O.beta_ball(3, z)
        val = cont.body_beta(body, z, profile=prof).value
        assert abs(val - ref) / abs(ref) < 1e-6


def test_body_residues_from_profile_ball2():
    body = M.ball(2, 1.0)
    prof = cont.body_profile(body)
    # poles of the disc energy: -2 (volume) and -3, -5 (boundary ladder)
    assert cont.body_residue_from_profile(body, -2, profile=prof) == pytest.approx(
        O.beta_ball_residue(2, -2), rel=1e-6)
    assert cont.body_residue_from_profile(body, -3, profile=prof) == pytest.approx(
        O.beta_ball_residue(2, -3), rel=1e-8)


def test_relative_beta_parallel_body_difference():
    # (1/2) d/deps B_{Omega_eps}(z) at eps = 0 by central differences
    body = M.ball(2, 1.0)
    z = 1.0
    eps = 1e-3
    bp = cont.body_beta(M.parallel_body(body, eps), z).value
    bm = cont.body_beta(M.parallel_body(body, -eps), z).value
    fd = 0.5 * (bp - bm) / (2 * eps)
    rel = cont.relative_beta(body, z).value
    assert abs(fd - rel) / abs(rel) < 1e-4


def test_relative_residue_no_pole_at_minus_n_plus_1():
    body = M.ball(3, 1.0)
    prof = cont.relative_profile(body)
    val, err = cont.residue_from_profile(prof, -2)  # z = -n+1 on the boundary ladder
    assert abs(val) < 1e-8


def test_nu_body_duality_ball():
    # R_{boundary,nu}(z) = -z (z+n-2) R_body(z-2) at z = -n-1 and z = -n-3,
    # with the two sides computed independently
    n = 3
    body = M.ball(n, 1.0)
    prof = cont.body_profile(body)
    z = -n - 1.0
    lhs = cont.residue_from_profile(prof, z)[0]
    from residue_lab.residues import body_residues
    rhs = -z * (z + n - 2) * body_residues(body, order=32).value(z - 2)
    assert lhs == pytest.approx(rhs, rel=1e-8)
    # z = -n-3: both sides vanish for the ball (the nu-weighted chord model is
    # exactly quadratic; the closed-form residue carries a 1/Gamma(-1) zero)
    z2 = -n - 3.0
    lhs2 = cont.residue_from_profile(prof, z2)[0]
    rhs2 = -z2 * (z2 + n - 2) * oracles_ball_residue(n, z2 - 2.0)
    assert abs(lhs2) < 1e-8
    assert abs(rhs2) < 1e-14


def oracles_ball_residue(n, pole):
    from residue_lab.oracles import beta_ball_residue
    return beta_ball_residue(n, pole)


def test_nu_body_duality_ellipsoid():
    n = 3
    body = M.ellipsoid_body((1.0, 1.15, 0.9))
    prof = cont.distance_profile(body.boundary, weight=WeightKind.NORMAL_PRODUCT,
                                 order=48)
    z = -n - 1.0
    lhs = cont.residue_from_profile(prof, z)[0]
    from residue_lab.residues import body_residues
    rhs = -z * (z + n - 2) * body_residues(body, order=32).value(z - 2)
    assert lhs == pytest.approx(rhs, rel=2e-2)


# --- pointwise relative residues ----------------------------------------------

def test_boundary_local_relative_residue_constant():
    from residue_lab.oracles import sphere_volume
    body = M.ball(3, 1.0)
    target = sphere_volume(2) / 2
    for u in ([0.6, 0.9], [1.2, 0.9], [2.0, 4.0]):
        val = cont.relative_local_residue_at_point(body, u, "boundary", order=96)
        assert val == pytest.approx(target, rel=1e-3)


def test_local_relative_residue_nonconstant_on_ellipse():
    eb = M.ellipsoid_body((1.0, 0.6))
    us = ([0.3], [0.9], [1.5], [2.2])
    bl = [cont.relative_local_residue_at_point(eb, u, "boundary", order=512) for u in us]
    loc = [cont.relative_local_residue_at_point(eb, u, "local", order=512) for u in us]
    for v in bl:
        assert v == pytest.approx(math.pi, rel=1e-3)
    assert max(loc) - min(loc) > 0.5  # genuinely non-constant


# --- polygonal knots -----------------------------------------------------------

_SQUARE = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)]


def test_polygon_residues_match_oracle():
    r1o, r2o = O.polygon_knot_residues(_SQUARE)
    r1n, r2n = cont._polygon_residues_numeric(_SQUARE)
    assert r1n == pytest.approx(r1o, rel=1e-12)
    assert r2n == pytest.approx(r2o, rel=1e-9)
    rng = np.random.default_rng(11)
    poly = rng.normal(size=(5, 3))
    r1o, r2o = O.polygon_knot_residues(poly)
    r1n, r2n = cont._polygon_residues_numeric(poly)
    assert r1n == pytest.approx(r1o, rel=1e-12)
    assert r2n == pytest.approx(r2o, rel=1e-9)


def test_polygon_beta_against_brute_quadrature():
    # z = 2: the pair integrand is a polynomial, so a plain high-order tensor
    # rule over every edge pair (including self) is exact
    z = 2.0
    from residue_lab.manifold.quadrature import gauss_on
    v = np.asarray(_SQUARE, dtype=float)
    edges = np.roll(v, -1, axis=0) - v
    total = 0.0
    s, w = gauss_on(0.0, 1.0, 24)
    for i in range(4):
        for j in range(4):
            p = v[i][None, :] + s[:, None] * edges[i][None, :]
            q = v[j][None, :] + s[:, None] * edges[j][None, :]
            d = np.linalg.norm(p[:, None, :] - q[None, :, :], axis=2)
            total += np.einsum("i,ij,j->", w, d ** z, w)
    be = cont.polygon_beta(_SQUARE, z)
    assert be.value.real == pytest.approx(total, rel=1e-10)


def test_polygon_beta_pole_rows():
    be = cont.polygon_beta(_SQUARE, -2.0)
    assert be.at_pole
    assert be.residue == pytest.approx(-8 + 4 * math.pi, rel=1e-8)
    be1 = cont.polygon_beta(_SQUARE, -1.0)
    assert be1.residue == pytest.approx(8.0, rel=1e-12)


def test_distance_profile_rejects_polygons():
    with pytest.raises(NumericError):
        cont.distance_profile(M.polygon_knot(_SQUARE))


# --- worker determinism ---------------------------------------------------------

def test_worker_count_bit_stable(ellipse_spec):
    p1 = cont.distance_profile(ellipse_spec, workers=1)
    p4 = cont.distance_profile(ellipse_spec, workers=4)
    assert p1.to_text() == p4.to_text()
    assert np.array_equal(p1.tail_w, p4.tail_w)
