import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from residue_lab import oracles
from residue_lab._util import NumericError


def test_gamma_against_mpmath():
    pts = [0.5, 1.0, 2.7, 5.5, -0.3, -2.3, 0.5 + 3j, -4.2 + 1.5j, 10.0 - 2.0j]
    for z in pts:
        ref = complex(mpmath.gamma(z))
        val = oracles.gamma(z)
        assert abs(val - ref) / abs(ref) < 1e-12


@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=20.0,
                          allow_nan=False, allow_infinity=False))
@settings(max_examples=200, deadline=None)
def test_gamma_functional_equation(z):
    # stay away from the negative-integer poles of either factor
    if min(abs(z.real - round(z.real)), 1.0) < 1e-3 and z.real < 1.5 and abs(z.imag) < 1e-3:
        return
    lhs = oracles.gamma(z + 1)
    rhs = z * oracles.gamma(z)
    assert abs(lhs - rhs) <= 1e-11 * max(abs(lhs), 1.0)


def test_gamma_pole_residues():
    for k in range(6):
        is_pole, res = oracles.gamma_pole(-k)
        assert is_pole
        assert res == pytest.approx((-1.0) ** k / math.factorial(k), rel=1e-14)
    assert oracles.gamma_pole(0.5) == (False, 0.0)


def test_unit_sphere_and_ball_volumes():
    assert oracles.sphere_volume(0) == pytest.approx(2.0, rel=1e-14)
    assert oracles.sphere_volume(1) == pytest.approx(2 * math.pi, rel=1e-14)
    assert oracles.sphere_volume(2) == pytest.approx(4 * math.pi, rel=1e-14)
    assert oracles.sphere_volume(3) == pytest.approx(2 * math.pi ** 2, rel=1e-14)
    assert oracles.ball_volume(2) == pytest.approx(math.pi, rel=1e-14)
    assert oracles.ball_volume(3) == pytest.approx(4 * math.pi / 3, rel=1e-14)


def test_beta_sphere_low_values():
    assert oracles.beta_sphere(2, 0).real == pytest.approx((2 * math.pi) ** 2, rel=1e-13)
    assert oracles.beta_sphere(2, 1).real == pytest.approx(16 * math.pi, rel=1e-13)
    # circle value at z = -2 vanishes (Gamma pole in the denominator)
    assert abs(oracles.beta_sphere(2, -2)) < 1e-13


def test_beta_ball_volume_normalization():
    for n in (2, 3, 5):
        vol = oracles.ball_volume(n)
        assert oracles.beta_ball(n, 0).real == pytest.approx(vol ** 2, rel=1e-12)


def test_beta_ball_residue_b5():
    assert oracles.beta_ball_residue(5, -10) == pytest.approx(-math.pi ** 4 / 60, rel=1e-12)


def test_beta_ball_residue_is_volume_residue():
    # at z = -n the residue equals o_{n-1} Vol(B^n)
    for n in (2, 3, 4):
        tgt = oracles.sphere_volume(n - 1) * oracles.ball_volume(n)
        assert oracles.beta_ball_residue(n, -n) == pytest.approx(tgt, rel=1e-12)


def test_relative_is_half_parallel_derivative():
    # B_rel(z) = (z + 2n)/2 * B_ball(z) symbolically, from the (1+eps) scaling
    for n in (2, 3):
        for z in (1.7, 0.3, -0.8, -n + 0.4):
            lhs = oracles.beta_ball_relative(n, z)
            rhs = (z + 2 * n) / 2.0 * oracles.beta_ball(n, z)
            assert abs(lhs - rhs) < 1e-12 * abs(rhs)


def test_spheroid_closed_form_limits():
    assert oracles.spheroid_gw(1.0) == pytest.approx(math.pi ** 2, rel=1e-14)
    assert oracles.spheroid_r8(1.0) == 0.0
    assert oracles.spheroid_gw(1.0 + 1e-4) == pytest.approx(math.pi ** 2, abs=1e-3)
    assert abs(oracles.spheroid_r8(1.0 - 1e-4)) < 1e-3
    # 0 < a < 1 branch is real and continuous through the log form
    assert oracles.spheroid_gw(0.8) > 0
    with pytest.raises(NumericError):
        oracles.spheroid_r8_nu(1.0)


def test_polygon_square():
    square = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)]
    r1, r2 = oracles.polygon_knot_residues(square)
    assert r1 == pytest.approx(8.0, abs=1e-14)
    assert r2 == pytest.approx(-8.0 + 4 * math.pi, abs=1e-13)


def test_polygon_scaling():
    rng = np.random.default_rng(3)
    poly = rng.normal(size=(6, 3))
    r1, r2 = oracles.polygon_knot_residues(poly)
    r1c, r2c = oracles.polygon_knot_residues(2.0 * poly)
    assert r1c == pytest.approx(2.0 * r1, rel=1e-12)
    assert r2c == pytest.approx(r2, rel=1e-12)


def test_polygon_regular_kgon_perimeter():
    k = 64
    ang = 2 * np.pi * np.arange(k) / k
    poly = np.stack([np.cos(ang), np.sin(ang), np.zeros(k)], axis=1)
    r1, _ = oracles.polygon_knot_residues(poly)
    perimeter = k * 2 * math.sin(math.pi / k)
    assert r1 == pytest.approx(2 * perimeter, rel=1e-12)


def test_polygon_collinear_rejected():
    bad = [(0, 0, 0), (1, 0, 0), (2, 0, 0), (1, 1, 0)]
    with pytest.raises(NumericError):
        oracles.polygon_knot_residues(bad)
