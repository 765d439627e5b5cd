import math

import numpy as np
import pytest

import residue_lab.manifold as M
import residue_lab.residues as R
from residue_lab.manifold.frames import curvature_frame
from residue_lab.oracles import sphere_volume


def test_residue_first_examples():
    assert R.residue_first(M.circle(1.0), order=48) == pytest.approx(4 * math.pi, rel=1e-10)
    assert R.residue_first(M.sphere(2, 1.0), order=32) == pytest.approx(
        8 * math.pi ** 2, rel=1e-10)
    # homogeneity degree m: Sphere(2, c) -> c^2 * 8 pi^2
    assert R.residue_first(M.sphere(2, 1.7), order=32) == pytest.approx(
        1.7 ** 2 * 8 * math.pi ** 2, rel=1e-10)


def test_residue_second_examples():
    assert R.residue_second(M.sphere(2, 1.0), order=24) == pytest.approx(0.0, abs=1e-12)
    assert R.residue_second(M.circle(1.0), order=48) == pytest.approx(
        math.pi / 2, rel=1e-10)
    # surface form (pi/8) int (k1 - k2)^2 agrees on surfaces
    tor = M.torus(2.0, 1.0)
    assert R.residue_second(tor, order=40) == pytest.approx(
        R.residue_second_surface_form(tor, order=40), rel=1e-12)


def test_body_residues_ball3():
    rep = R.body_residues(M.ball(3, 1.0), order=32)
    assert rep.value(-3) == pytest.approx(16 * math.pi ** 2 / 3, rel=1e-12)
    assert rep.value(-4) == pytest.approx(-4 * math.pi ** 2, rel=1e-12)
    assert rep.value(-6) == pytest.approx(math.pi ** 2 / 3, rel=1e-12)
    # the (3H^2 - 2Sc) cross-check form
    assert R.body_residue_n3_crosscheck(M.ball(3, 1.0), order=32) == pytest.approx(
        math.pi ** 2 / 3, rel=1e-12)


def test_relative_residues_ball3():
    rep = R.relative_residues(M.ball(3, 1.0), order=32)
    assert rep.value(-3) == pytest.approx(8 * math.pi ** 2, rel=1e-12)
    assert rep.value(-4) == pytest.approx(-4 * math.pi ** 2, rel=1e-12)
    # difference field vanishes identically on round spheres (H constant)
    diff = rep.metadata["difference_field"]
    fr = curvature_frame(M.sphere(2, 1.0), [0.8, 0.3], max_order=4)
    assert diff(fr) == pytest.approx(0.0, abs=1e-12)


def test_residue_report_serialization():
    rep = R.body_residues(M.ball(3, 1.0), order=16)
    text = rep.to_text()
    assert text.startswith("RESIDUE-REPORT 1")
    assert "residue -3 " in text
    assert text == R.body_residues(M.ball(3, 1.0), order=16).to_text()


def test_m8_requires_four_dim():
    from residue_lab._util import NumericError
    with pytest.raises(NumericError):
        R.residue_m8(M.sphere(2, 1.0))


def test_weyl_tube_k2():
    out = R.weyl_tube_k2(M.sphere(2, 1.0), order=24)
    assert out["direct"] == pytest.approx(4 * math.pi, rel=1e-10)
    assert out["residues"] == pytest.approx(4 * math.pi, rel=1e-10)
    # torus in R^3: both paths agree
    out_t = R.weyl_tube_k2(M.torus(2.0, 1.0), order=40)
    assert out_t["direct"] == pytest.approx(out_t["residues"], rel=1e-6)
    # flat Clifford-style torus in R^4: int Sc = 0
    out_c = R.weyl_tube_k2(M.clifford_torus(1.0, 1.0), order=16)
    assert abs(out_c["direct"]) < 1e-6
    assert abs(out_c["residues"]) < 1e-6


def test_lk_ball3_closed_values():
    C = R.lk_curvatures(M.ball(3, 1.0), order=32)
    assert C[3] == pytest.approx(4 * math.pi / 3, rel=1e-12)
    assert C[2] == pytest.approx(2 * math.pi, rel=1e-12)
    assert C[1] == pytest.approx(4.0, rel=1e-12)
    assert C[0] == pytest.approx(1.0, rel=1e-12)
    # Steiner polynomial reproduces the parallel-ball volume exactly
    vol = R.steiner_volume(M.ball(3, 1.0), 0.1, order=32)
    assert vol == pytest.approx(4 * math.pi / 3 * 1.1 ** 3, rel=1e-12)


def test_lk_two_dim_body():
    # ellipse body: C2 = area, C1 = perimeter / 2, C0 = 1
    body = M.ellipsoid_body((1.0, 0.6))
    C = R.lk_curvatures(body, order=64)
    assert C[2] == pytest.approx(math.pi * 0.6, rel=1e-10)
    assert C[0] == pytest.approx(1.0, rel=1e-10)
    CR = R.lk_from_residues(body, order=64)
    for k, v in CR.items():
        assert v == pytest.approx(C[k], rel=1e-8)


def test_intrinsic_residues_and_heat():
    s3 = R.sphere_intrinsic_data(3, 1.0)
    rr = R.intrinsic_residues(s3)
    assert rr[-3] == pytest.approx(8 * math.pi ** 3, rel=1e-12)
    assert rr[-5] == pytest.approx(-8 * math.pi ** 3 / 3, rel=1e-12)
    s2 = R.sphere_intrinsic_data(2, 1.0)
    a0, a1, a2 = R.heat_coefficients(s2)
    assert a0 == pytest.approx(4 * math.pi, rel=1e-14)
    assert a1 == pytest.approx(8 * math.pi / 6, rel=1e-14)
    assert a2 == pytest.approx(4 * math.pi / 15, rel=1e-13)
    # first two intrinsic residues match a0, a1 up to fixed constants
    rr2 = R.intrinsic_residues(s2)
    assert rr2[-2] == pytest.approx(sphere_volume(1) * 4 * math.pi, rel=1e-13)
    flat = R.flat_torus_intrinsic_data(2, 4 * math.pi ** 2)
    rrf = R.intrinsic_residues(flat)
    assert rrf[-4] == 0.0 and rrf[-6] == 0.0
    assert R.heat_coefficients(flat)[1:] == (0.0, 0.0)


def test_scalar_meansq_unit_sphere_values():
    fr = curvature_frame(M.sphere(2, 1.0), [1.0, 0.5])
    assert R.local_residue_m2_nu(fr) == pytest.approx(-math.pi, abs=1e-12)
    assert R.local_residue_m2(fr) == pytest.approx(0.0, abs=1e-13)
    assert R.scalar_from_residues(fr) == pytest.approx(2.0, abs=1e-11)
    assert R.meansq_from_residues(fr) == pytest.approx(4.0, abs=1e-11)


def test_residue_m8_sphere_and_duality():
    r8 = R.residue_m8(M.sphere(4, 1.0), order=40)
    assert abs(r8["modified"]) < 1e-10
    assert r8["spread"] < 1e-10
    r8nu = R.nu_residue_m8(M.sphere(4, 1.0), order=40)
    assert r8nu["modified"] == pytest.approx(2 * math.pi ** 4 / 3, rel=1e-12)
    from residue_lab.oracles import beta_ball_residue
    dual = -(-8.0) * (-8.0 + 3.0) * beta_ball_residue(5, -10)
    assert r8nu["modified"] == pytest.approx(dual, rel=1e-12)


def test_residue_m8_full_grid_path():
    # the generic 4-D tensor-product path; on the round sphere the integrand
    # is constant, so a coarse grid already gives the exact value
    grid = R.nu_residue_m8(M.sphere(4, 1.0), order=8, reduced=False)["modified"]
    assert grid == pytest.approx(2 * math.pi ** 4 / 3, rel=1e-5)
