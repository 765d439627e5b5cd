import math

import numpy as np
import pytest

import residue_lab.continuation as cont
import residue_lab.manifold as M
import residue_lab.mobius as MB
from residue_lab._util import NumericError


def test_inversion_distance_identity():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(8, 3))
    y = rng.normal(size=(8, 3))
    inv = MB.Inversion(center=(0.0, 0.0, 0.0), radius=1.0)
    lhs = (np.linalg.norm(inv.apply(x) - inv.apply(y), axis=1)
           * np.linalg.norm(x, axis=1) * np.linalg.norm(y, axis=1))
    rhs = np.linalg.norm(x - y, axis=1)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_inversion_maps_circles_to_circles():
    circ = M.circle(1.0)
    mp = MB.MobiusMap((MB.Inversion(center=(2.5, 0.0), radius=1.0),))
    img = MB.transform_spec(circ, mp)
    pts = img.patches[0].chart(np.linspace(0, 2 * math.pi, 64)[:, None])
    A = np.concatenate([2 * pts, np.ones((len(pts), 1))], axis=1)
    b = (pts ** 2).sum(axis=1)
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    assert np.max(np.abs(A @ sol - b)) < 1e-10


def test_unit_inversion_scales_centered_spheres():
    sp = M.sphere(3, 0.5)
    mp = MB.MobiusMap((MB.Inversion(center=(0.0,) * 4, radius=1.0),))
    img = MB.transform_spec(sp, mp)
    pts = img.patches[0].chart(np.array([[0.3, 1.0, 2.0], [1.4, 2.2, 0.1]]))
    assert np.linalg.norm(pts, axis=1) == pytest.approx([2.0, 2.0], rel=1e-12)


def test_transformed_curvature_examples():
    # off-center unit sphere through (1,0,0)-(3,0,0): image radius 1/3
    kt = MB.transformed_curvatures(np.array([-1.0, -1.0]), p=np.array([3.0, 0, 0]),
                                   nu=np.array([1.0, 0, 0]))
    assert np.abs(kt) == pytest.approx([3.0, 3.0], rel=1e-14)
    # the centered unit sphere is preserved
    kt2 = MB.transformed_curvatures(np.array([-1.0, -1.0]), p=np.array([0, 1.0, 0]),
                                    nu=np.array([0, 1.0, 0]))
    assert np.abs(kt2) == pytest.approx([1.0, 1.0], rel=1e-14)


def test_guard_ball_violation():
    # the guard is checked on the spec samples; park the center on one
    circ = M.circle(1.0)
    node = M.sample_quadrature(circ, 16).x[0]
    mp = MB.MobiusMap((MB.Inversion(center=tuple(node), radius=1.0),))
    with pytest.raises(NumericError):
        MB.transform_spec(circ, mp)


def test_weyl_decomposition_identity_random():
    rng = np.random.default_rng(4)
    for _ in range(20):
        rm, ric, sc = np.abs(rng.normal(size=3)) * 5
        assert abs(MB.weyl_decomposition_identity(rm, ric, sc)) < 1e-12


def test_knot_value_invariance_ellipse():
    # odd dimension: the value B(-2) is the Moebius invariant
    ell = M.ellipse(1.0, 0.6)
    prof = cont.distance_profile(ell)
    before = cont.beta_eval(prof, -2.0).value.real
    mp = MB.MobiusMap((MB.Inversion(center=(2.2, 0.4), radius=1.0),))
    img = MB.transform_spec(ell, mp)
    prof_t = cont.distance_profile(img)
    after = cont.beta_eval(prof_t, -2.0).value.real
    assert after == pytest.approx(before, rel=2e-4)


def test_scaling_shifts_finite_part_by_residue_log(torus_profile):
    # E_{cM}(-4) = E_M(-4) + R_M(-4) ln c when z = -2m; the finite part is
    # exactly not scale invariant when the residue is nonzero
    c = 2.0
    prof_c = cont.distance_profile(M.torus(2.0 * c, 1.0 * c))
    e1 = cont.hadamard_finite_part(torus_profile, -4.0).real
    e2 = cont.hadamard_finite_part(prof_c, -4.0).real
    r4 = cont.residue_from_profile(torus_profile, -4.0)[0]
    assert e2 - e1 == pytest.approx(r4 * math.log(c), rel=1e-5)
    assert abs(r4 * math.log(c)) > 1.0  # the shift is far from zero


def test_nu_residue_m4_invariance_torus():
    tor = M.torus(2.0, 1.0)
    mp = MB.MobiusMap((MB.Inversion(center=(0.0, 0.0, 2.5), radius=1.0),))
    rep = MB.invariance_report(tor, mp, "nu_residue_m4", order=32)
    assert rep["rel"] < 1e-6


def test_invariance_quantities_unknown():
    with pytest.raises(NumericError):
        MB._quantity(M.sphere(2, 1.0), "bogus", 16)
