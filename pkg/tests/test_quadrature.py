import math

import numpy as np
import pytest

import residue_lab.manifold as M
from residue_lab.manifold.quadrature import (DegenerateJacobianError, gauss_on,
                                             sphere_monomial_integral)
from residue_lab.manifold.shapes import Patch, ManifoldSpec
from residue_lab.oracles import sphere_volume


def test_circle_circumference():
    assert M.sample_quadrature(M.circle(1.0), 50).total_weight == pytest.approx(
        2 * math.pi, abs=1e-10)


def test_sphere_area():
    assert M.sample_quadrature(M.sphere(2, 1.0), 40).total_weight == pytest.approx(
        4 * math.pi, abs=1e-8)


def test_spheroid_volume_against_reduced_element():
    # independent 1-D quadrature of the reduced volume element
    a = math.sqrt(2)
    ts, ws = gauss_on(0.0, math.pi, 200)
    vol_1d = 2 * math.pi ** 2 * float(
        np.sum(ws * np.sqrt(a * a * np.sin(ts) ** 2 + np.cos(ts) ** 2) * np.sin(ts) ** 3))
    vol_4d = M.sample_quadrature(M.spheroid(a), 24).total_weight
    assert vol_4d == pytest.approx(vol_1d, abs=1e-8)


def test_torus_area():
    assert M.sample_quadrature(M.torus(2, 1), 40).total_weight == pytest.approx(
        4 * math.pi ** 2 * 2, rel=1e-12)


def test_ball_volume():
    assert M.body_volume(M.ball(3, 1.0), 40) == pytest.approx(4 * math.pi / 3, rel=1e-12)
    assert M.body_volume(M.ellipsoid_body((1.0, 2.0, 0.5)), 40) == pytest.approx(
        4 * math.pi / 3 * 1.0 * 2.0 * 0.5, rel=1e-10)


def test_degenerate_jacobian_reported():
    def chart(u):
        u = np.atleast_2d(u)
        return np.stack([u[:, 0] ** 3, np.zeros(len(u))], axis=1)

    patch = Patch(box=((-1.0, 1.0),), chart=chart, periodic=(False,), label="cusp")
    spec = ManifoldSpec(kind="ellipse", m=1, n=2, patches=(patch,))
    with pytest.raises(DegenerateJacobianError, match="cusp"):
        M.sample_quadrature(spec, 3)  # odd order puts a node on the cusp


def test_sphere_monomial_integrals_match_tables():
    m = 4
    o3 = sphere_volume(3)
    assert sphere_monomial_integral(m, (4,)) == pytest.approx(3 * o3 / (m * (m + 2)), rel=1e-14)
    assert sphere_monomial_integral(m, (2, 2)) == pytest.approx(o3 / (m * (m + 2)), rel=1e-14)
    assert sphere_monomial_integral(m, (6,)) == pytest.approx(
        15 * o3 / (m * (m + 2) * (m + 4)), rel=1e-14)
    assert sphere_monomial_integral(m, (4, 2)) == pytest.approx(
        3 * o3 / (m * (m + 2) * (m + 4)), rel=1e-14)
    assert sphere_monomial_integral(m, (2, 2, 2)) == pytest.approx(
        o3 / (m * (m + 2) * (m + 4)), rel=1e-14)
    # odd powers vanish
    assert sphere_monomial_integral(m, (3, 2)) == 0.0
    # n = 2 moment used by the relative residues
    assert sphere_monomial_integral(3, (2,)) == pytest.approx(sphere_volume(2) / 3, rel=1e-14)


def test_sphere_monomials_monte_carlo_parity():
    # fixed-seed spot check that odd-power monomials integrate to ~0 and an
    # even one matches, directly against sampling on S^3
    rng = np.random.default_rng(7)
    w = rng.normal(size=(200000, 4))
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    o3 = sphere_volume(3)
    odd = float(np.mean(w[:, 0] ** 3 * w[:, 1] ** 2)) * o3
    even = float(np.mean(w[:, 0] ** 2 * w[:, 1] ** 2 * w[:, 2] ** 2)) * o3
    assert abs(odd) < 5e-3
    assert even == pytest.approx(sphere_monomial_integral(4, (2, 2, 2)), abs=5e-3)


def test_reparametrization_invariance_torus():
    # same torus, parameters swapped and shifted
    R, r = 2.0, 1.0

    def chart(u):
        u = np.atleast_2d(u)
        ph, th = u[:, 0], u[:, 1] + 0.7
        w = R + r * np.cos(th)
        return np.stack([w * np.cos(ph), w * np.sin(ph), r * np.sin(th)], axis=1)

    patch = Patch(box=((0.0, 2 * math.pi), (0.0, 2 * math.pi)), chart=chart,
                  periodic=(True, True), label="torus-alt")
    alt = ManifoldSpec(kind="torus_alt", m=2, n=3, patches=(patch,),
                       params={"R": R, "r": r})
    a1 = M.sample_quadrature(M.torus(R, r), 32).total_weight
    a2 = M.sample_quadrature(alt, 32).total_weight
    assert a1 == pytest.approx(a2, rel=1e-10)
    from residue_lab.residues import residue_second
    r1 = residue_second(M.torus(R, r), order=32)
    r2 = residue_second(alt, order=32)
    assert r1 == pytest.approx(r2, rel=1e-7)


def test_node_sequence_protocol():
    nodes = M.sample_quadrature(M.sphere(2, 1.0), 6)
    assert len(nodes) == 36
    first = nodes[0]
    assert first.w > 0
    assert np.linalg.norm(first.x) == pytest.approx(1.0, rel=1e-12)
    assert np.linalg.norm(first.nu) == pytest.approx(1.0, rel=1e-12)
    assert sum(n.w for n in nodes) == pytest.approx(nodes.total_weight, rel=1e-14)
