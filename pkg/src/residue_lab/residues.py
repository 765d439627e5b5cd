"""Closed-form residue integrands evaluated by quadrature over curvature frames.

This is the curvature-formula route to the residues, independent of the
distance-profile continuation engine. Frames come from exact Taylor series
on polynomial-implicit shapes, so most integrals here converge at spectral
rate in the quadrature order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._util import NumericError, fmt_float
from .manifold.frames import CurvatureFrame, curvature_frame
from .manifold.localexp import local_residue_graph
from .manifold.quadrature import body_volume, gauss_on, patch_grid, sample_quadrature
from .manifold.shapes import ManifoldSpec
from .oracles import ball_volume, sphere_volume


@dataclass
class ResidueReport:
    """Residue values keyed by pole location, with method tags and error estimates."""
    entries: dict = field(default_factory=dict)   # pole -> (value, method, error)
    metadata: dict = field(default_factory=dict)

    def add(self, pole: float, value: float, method: str, error: float = float("nan")):
        self.entries[float(pole)] = (float(value), method, float(error))

    def value(self, pole: float) -> float:
        return self.entries[float(pole)][0]

    def to_text(self) -> str:
        lines = ["RESIDUE-REPORT 1"]
        for key in sorted(self.metadata):
            lines.append(f"meta {key} {self.metadata[key]}")
        for pole in sorted(self.entries, reverse=True):
            v, meth, err = self.entries[pole]
            lines.append(f"residue {fmt_float(pole)} {fmt_float(v)} {meth} {fmt_float(err)}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# frame iteration
# ---------------------------------------------------------------------------

def _line_reducible(surf: ManifoldSpec) -> bool:
    if surf.kind == "spheroid":
        return True
    if surf.kind == "sphere" and surf.m == 4:
        return True
    return bool(surf.params.get("axis_symmetric"))


_LINE_FIBER_ANGLES = (1.0, 1.3, 0.7)


def frame_integral(spec: ManifoldSpec, fn, order: int = 32, max_order: int = 2,
                   reduced: str | bool = "auto") -> float:
    """Integral over the spec (boundary of a body) of a frame functional.

    For 4-dimensional shapes that are rotation-symmetric about the last
    ambient axis, the fiber directions integrate out to 2 pi^2 and the
    integral reduces to a single line of frames.
    """
    surf = spec.surface()
    use_line = reduced is True or (reduced == "auto" and _line_reducible(surf))
    if use_line and surf.m == 4:
        return _line_integral(spec, fn, order, max_order)
    total = 0.0
    for pi, patch in enumerate(surf.patches):
        u, wp = patch_grid(patch, order)
        from .manifold.quadrature import volume_element
        sg = volume_element(patch, u)
        for row, w in zip(u, wp * sg):
            total += w * fn(curvature_frame(spec, row, patch_index=pi, max_order=max_order))
    return total


def _line_integral(spec: ManifoldSpec, fn, order: int, max_order: int) -> float:
    surf = spec.surface()
    patch = surf.patches[0]
    t2, t3, t4 = _LINE_FIBER_ANGLES
    fiber = 2.0 * math.pi ** 2
    denom = math.sin(t2) ** 2 * math.sin(t3)
    ts, ws = gauss_on(0.0, math.pi, order)
    from .manifold.quadrature import volume_element
    u = np.stack([ts, np.full_like(ts, t2), np.full_like(ts, t3),
                  np.full_like(ts, t4)], axis=1)
    sg = volume_element(patch, u)
    total = 0.0
    for row, w, s in zip(u, ws, sg):
        fr = curvature_frame(spec, row, patch_index=0, max_order=max_order)
        total += w * (s / denom) * fiber * fn(fr)
    return total


def volume(spec: ManifoldSpec, order: int = 32) -> float:
    surf = spec.surface()
    if surf.m == 4 and _line_reducible(surf):
        return _line_integral(spec, lambda fr: 1.0, order, 2)
    return sample_quadrature(surf, order).total_weight


# ---------------------------------------------------------------------------
# closed submanifold residues (first two poles)
# ---------------------------------------------------------------------------

def residue_first(spec: ManifoldSpec, order: int = 32) -> float:
    """Residue at z = -m: o_{m-1} Vol(M)."""
    surf = spec.surface()
    return sphere_volume(surf.m - 1) * volume(spec, order)


def residue_second(spec: ManifoldSpec, order: int = 32) -> float:
    """Residue at z = -m-2: (o_{m-1} / 8m) int (2 ||h||^2 - |H|^2)."""
    surf = spec.surface()
    m = surf.m
    pref = sphere_volume(m - 1) / (8.0 * m)
    return pref * frame_integral(spec, lambda fr: 2.0 * fr.hs_norm_sq - fr.mean_sq,
                                 order=order, max_order=2)


def residue_second_surface_form(spec: ManifoldSpec, order: int = 32) -> float:
    """(pi/8) int (kappa_1 - kappa_2)^2 for closed surfaces in R^3; equals residue_second."""
    surf = spec.surface()
    if surf.m != 2 or surf.codim != 1:
        raise NumericError("surface form needs a closed surface in R^3")
    return (math.pi / 8.0) * frame_integral(
        spec, lambda fr: float((fr.kappa[0] - fr.kappa[1]) ** 2), order=order, max_order=2)


def local_residue_m2(frame: CurvatureFrame) -> float:
    """Closed-form local residue at z = -m-2 (constant weight), any codimension."""
    m = frame.m
    f2 = frame.f2
    diag = np.einsum("iiq->iq", f2)
    s_ii = float(np.sum(diag ** 2))
    s_iijj = float(np.sum(np.einsum("iq,jq->ij", diag, diag))) - s_ii
    s_ij = float(np.sum(f2 ** 2)) - s_ii
    return sphere_volume(m - 1) / m * (s_ii / 8.0 - s_iijj / 8.0 + s_ij / 4.0)


def local_residue_m2_nu(frame: CurvatureFrame) -> float:
    """Closed-form nu-weighted local residue at z = -m-2, any codimension."""
    m = frame.m
    f2 = frame.f2
    diag = np.einsum("iiq->iq", f2)
    s_ii = float(np.sum(diag ** 2))
    s_iijj = float(np.sum(np.einsum("iq,jq->ij", diag, diag))) - s_ii
    s_ij = float(np.sum(f2 ** 2)) - s_ii
    return sphere_volume(m - 1) / m * (-3.0 * s_ii / 8.0 - s_iijj / 8.0 - s_ij / 4.0)


def scalar_from_residues(frame: CurvatureFrame) -> float:
    """Sc = -(2m / o_{m-1}) (R_nu^loc(-m-2) + 3 R^loc(-m-2))."""
    m = frame.m
    return -(2.0 * m / sphere_volume(m - 1)) * (
        local_residue_m2_nu(frame) + 3.0 * local_residue_m2(frame))


def meansq_from_residues(frame: CurvatureFrame) -> float:
    """|H|^2 = -(4m / o_{m-1}) (R_nu^loc(-m-2) + R^loc(-m-2))."""
    m = frame.m
    return -(4.0 * m / sphere_volume(m - 1)) * (
        local_residue_m2_nu(frame) + local_residue_m2(frame))


def nu_residue_second(spec: ManifoldSpec, order: int = 32) -> float:
    """nu-weighted residue at z = -m-2 by quadrature of the local formula."""
    return frame_integral(spec, local_residue_m2_nu, order=order, max_order=2)


# ---------------------------------------------------------------------------
# compact bodies
# ---------------------------------------------------------------------------

def body_residues(body: ManifoldSpec, order: int = 32) -> ResidueReport:
    """First three residues of a compact body, at z = -n, -n-1, -n-3."""
    if not body.is_body:
        raise NumericError("body_residues needs a body spec")
    n = body.n
    rep = ResidueReport(metadata={"kind": body.kind, "n": n})

    def at(o):
        vol = body_volume(body, o)
        area = sample_quadrature(body.boundary, o).total_weight
        bh = frame_integral(body, lambda fr: 2.0 * fr.hs_norm_sq + fr.mean_sq,
                            order=o, max_order=2)
        return (sphere_volume(n - 1) * vol,
                -sphere_volume(n - 2) / (n - 1) * area,
                sphere_volume(n - 2) / (24.0 * (n * n - 1)) * bh)

    lo = at(order)
    hi = at(order + 4)
    for pole, vlo, vhi in zip((-n, -n - 1, -n - 3), lo, hi):
        rep.add(pole, vhi, "curvature", abs(vhi - vlo))
    return rep


def body_residue_n3_crosscheck(body: ManifoldSpec, order: int = 32) -> float:
    """The (3 H^2 - 2 Sc) form of the -n-3 body residue; equals the ||h||, |H| form."""
    n = body.n
    return sphere_volume(n - 2) / (24.0 * (n * n - 1)) * frame_integral(
        body, lambda fr: 3.0 * fr.H ** 2 - 2.0 * fr.scalar_curvature, order=order, max_order=2)


def relative_residues(body: ManifoldSpec, order: int = 32) -> ResidueReport:
    """Relative residues at z = -n, -n-1, -n-3 plus the local difference field.

    The difference of boundary-local and local relative residues at -n-3 is
    o_{n-2} / (12 (n^2 - 1)) * Laplacian(H); it is attached to the report as
    ``difference_field``.
    """
    if not body.is_body:
        raise NumericError("relative_residues needs a body spec")
    n = body.n
    rep = ResidueReport(metadata={"kind": body.kind, "n": n, "relative": True})

    def at(o):
        area = sample_quadrature(body.boundary, o).total_weight
        h_int = frame_integral(body, lambda fr: fr.H, order=o, max_order=2)
        cube = frame_integral(
            body, lambda fr: 4.0 * float(np.sum(fr.kappa ** 3)) - fr.H ** 3,
            order=o, max_order=2)
        return (sphere_volume(n - 1) / 2.0 * area,
                sphere_volume(n - 2) / (2.0 * (n - 1)) * h_int,
                sphere_volume(n - 2) / (48.0 * (n * n - 1)) * cube)

    lo = at(order)
    hi = at(order + 4)
    for pole, vlo, vhi in zip((-n, -n - 1, -n - 3), lo, hi):
        rep.add(pole, vhi, "curvature", abs(vhi - vlo))

    def difference_field(frame: CurvatureFrame) -> float:
        return sphere_volume(n - 2) / (12.0 * (n * n - 1)) * frame.delta_H()

    rep.metadata["difference_field"] = difference_field
    return rep


# ---------------------------------------------------------------------------
# z = -8 residues of 4-dimensional hypersurfaces
# ---------------------------------------------------------------------------

def _kappa_sums(k: np.ndarray):
    s_k4 = float(np.sum(k ** 4))
    s_k2k2 = float(sum(k[i] ** 2 * k[j] ** 2 for i in range(4) for j in range(i + 1, 4)))
    s_kk3 = float(sum(k[i] * k[j] ** 3 for i in range(4) for j in range(4) if i != j))
    s_kkk2 = float(sum(k[i] * k[j] * k[l] ** 2 for i in range(4) for j in range(i + 1, 4)
                       for l in range(4) if l != i and l != j))
    prod4 = float(np.prod(k))
    return s_k4, s_k2k2, s_kk3, s_kkk2, prod4


def _c_sums(fr: CurvatureFrame):
    c = fr.c_mono
    s_ciii2 = sum(c(i, i, i) ** 2 for i in range(4))
    s_ciij2 = sum(c(i, i, j) ** 2 for i in range(4) for j in range(4) if i != j)
    s_cijk2 = sum(c(i, j, k) ** 2 for i in range(4) for j in range(i + 1, 4)
                  for k in range(j + 1, 4))
    s_ciik_cjjk = sum(c(i, i, k) * c(j, j, k) for i in range(4) for j in range(i + 1, 4)
                      for k in range(4) if k != i and k != j)
    s_ciii_cijj = sum(c(i, i, i) * c(i, j, j) for i in range(4) for j in range(4) if i != j)
    return s_ciii2, s_ciij2, s_cijk2, s_ciik_cjjk, s_ciii_cijj


def local_r8_raw(fr: CurvatureFrame) -> float:
    """Local residue at z = -8, full formula with fourth-order terms (m = 4)."""
    k = fr.kappa
    H = float(k.sum())
    s_k4, s_k2k2, s_kk3, s_kkk2, prod4 = _kappa_sums(k)
    s_ciii2, s_ciij2, s_cijk2, _, _ = _c_sums(fr)
    d = fr.d_mono
    s_d1 = sum((4.0 * k[i] - H) * d(i, i, i, i) for i in range(4))
    s_d2 = sum((2.0 * k[i] + 2.0 * k[j] - H) * d(i, i, j, j)
               for i in range(4) for j in range(i + 1, 4))
    total = (-63.0 * s_k4 - 26.0 * s_k2k2 + 12.0 * s_kk3 + 20.0 * s_kkk2 + 24.0 * prod4
             + 768.0 * s_ciii2 + 256.0 * s_ciij2 + 128.0 * s_cijk2
             + 192.0 * s_d1 + 64.0 * s_d2)
    return total * math.pi ** 2 / 1536.0


def local_r8_nu_raw(fr: CurvatureFrame) -> float:
    """nu-weighted local residue at z = -8, full formula (m = 4)."""
    k = fr.kappa
    H = float(k.sum())
    s_k4, s_k2k2, s_kk3, s_kkk2, prod4 = _kappa_sums(k)
    s_ciii2, s_ciij2, s_cijk2, s_ciik_cjjk, s_ciii_cijj = _c_sums(fr)
    d = fr.d_mono
    s_d1 = sum((4.0 * k[i] + H) * d(i, i, i, i) for i in range(4))
    s_d2 = sum((2.0 * k[i] + 2.0 * k[j] + H) * d(i, i, j, j)
               for i in range(4) for j in range(i + 1, 4))
    total = (105.0 * s_k4 + 54.0 * s_k2k2 + 60.0 * s_kk3 + 36.0 * s_kkk2 + 24.0 * prod4
             - 960.0 * s_ciii2 - 192.0 * s_ciij2 - 64.0 * s_cijk2
             - 128.0 * s_ciik_cjjk - 384.0 * s_ciii_cijj
             - 192.0 * s_d1 - 64.0 * s_d2)
    return total * math.pi ** 2 / 1536.0


def _delta_pieces_order3(fr: CurvatureFrame):
    """kappa/c parts of Delta|H|^2 and Delta Sc for a 4-D hypersurface.

    The omitted fourth-order parts cancel exactly against the d-terms of the
    raw local residues in the modified combinations below.
    """
    k = fr.kappa
    H = float(k.sum())
    _, _, s_kk3, s_kkk2, _ = _kappa_sums(k)
    s_ciii2, s_ciij2, s_cijk2, s_ciik_cjjk, s_ciii_cijj = _c_sums(fr)
    c = fr.c_mono
    s_cijj2 = sum(c(i, j, j) ** 2 for i in range(4) for j in range(4) if i != j)
    grad_h_sq = 4.0 * sum(
        (2.0 * c(i, i, i) + sum(c(i, j, j) for j in range(4))) ** 2 for i in range(4))
    delta_h_kc = -2.0 * float(np.sum(k ** 3)) - H * float(np.sum(k ** 2))
    delta_hsq_kc = 2.0 * H * delta_h_kc + 2.0 * grad_h_sq
    delta_sc_kc = (-8.0 * s_kk3 - 4.0 * s_kkk2
                   + 48.0 * s_ciii_cijj + 16.0 * s_ciik_cjjk
                   - 16.0 * s_cijj2 - 12.0 * s_cijk2)
    return delta_hsq_kc, delta_sc_kc


def local_r8_modified(fr: CurvatureFrame) -> float:
    """Order-3 integrand for the -8 residue: raw kappa/c parts with the
    d-terms traded for the Laplacian corrections (which drop the d's)."""
    k = fr.kappa
    s_k4, s_k2k2, s_kk3, s_kkk2, prod4 = _kappa_sums(k)
    s_ciii2, s_ciij2, s_cijk2, _, _ = _c_sums(fr)
    kc = (-63.0 * s_k4 - 26.0 * s_k2k2 + 12.0 * s_kk3 + 20.0 * s_kkk2 + 24.0 * prod4
          + 768.0 * s_ciii2 + 256.0 * s_ciij2 + 128.0 * s_cijk2) * math.pi ** 2 / 1536.0
    dhsq, dsc = _delta_pieces_order3(fr)
    return kc - math.pi ** 2 / 384.0 * (3.0 * dhsq - 4.0 * dsc)


def local_r8_nu_modified(fr: CurvatureFrame) -> float:
    k = fr.kappa
    s_k4, s_k2k2, s_kk3, s_kkk2, prod4 = _kappa_sums(k)
    s_ciii2, s_ciij2, s_cijk2, s_ciik_cjjk, s_ciii_cijj = _c_sums(fr)
    kc = (105.0 * s_k4 + 54.0 * s_k2k2 + 60.0 * s_kk3 + 36.0 * s_kkk2 + 24.0 * prod4
          - 960.0 * s_ciii2 - 192.0 * s_ciij2 - 64.0 * s_cijk2
          - 128.0 * s_ciik_cjjk - 384.0 * s_ciii_cijj) * math.pi ** 2 / 1536.0
    dhsq, dsc = _delta_pieces_order3(fr)
    return kc + math.pi ** 2 / 384.0 * (5.0 * dhsq - 4.0 * dsc)


def residue_m8(spec: ManifoldSpec, order: int = 48, reduced: str | bool = "auto") -> dict:
    """Residue at z = -8 of a closed 4-D hypersurface, both computation paths.

    'modified' integrates the order-3 integrand (no fourth derivatives);
    'raw' integrates the full local formula. On a closed manifold the two
    integrals agree because the traded terms are exact Laplacians.
    """
    surf = spec.surface()
    if surf.m != 4 or surf.codim != 1:
        raise NumericError("residue_m8 needs a closed 4-D hypersurface")
    modified = frame_integral(spec, local_r8_modified, order=order, max_order=3,
                              reduced=reduced)
    raw = frame_integral(spec, local_r8_raw, order=order, max_order=4, reduced=reduced)
    return {"modified": modified, "raw": raw, "spread": abs(modified - raw)}


def nu_residue_m8(spec: ManifoldSpec, order: int = 48, reduced: str | bool = "auto") -> dict:
    surf = spec.surface()
    if surf.m != 4 or surf.codim != 1:
        raise NumericError("nu_residue_m8 needs a closed 4-D hypersurface")
    modified = frame_integral(spec, local_r8_nu_modified, order=order, max_order=3,
                              reduced=reduced)
    raw = frame_integral(spec, local_r8_nu_raw, order=order, max_order=4, reduced=reduced)
    return {"modified": modified, "raw": raw, "spread": abs(modified - raw)}


# ---------------------------------------------------------------------------
# Lipschitz-Killing curvatures
# ---------------------------------------------------------------------------

def _elementary_symmetric(kappa: np.ndarray) -> np.ndarray:
    m = len(kappa)
    e = np.zeros(m + 1)
    e[0] = 1.0
    for x in kappa:
        e[1:] = e[1:] + x * e[:-1].copy()
    return e


def lk_curvatures(body: ManifoldSpec, order: int = 32) -> list[float]:
    """Direct-path Lipschitz-Killing curvatures C_0 .. C_n of a compact body."""
    if not body.is_body:
        raise NumericError("lk_curvatures needs a body")
    n = body.n
    s_ints = [frame_integral(body, lambda fr, k=k: float(_elementary_symmetric(fr.kappa)[k]),
                             order=order, max_order=2) for k in range(n)]
    out = []
    for k in range(n):
        out.append((-1.0) ** (n - 1 - k) / ((n - k) * ball_volume(n - k)) * s_ints[n - 1 - k])
    out.append(body_volume(body, order))
    return out  # [C_0, ..., C_n]


def lk_from_residues(body: ManifoldSpec, order: int = 32) -> dict:
    """Residue-path Lipschitz-Killing curvatures C_n .. C_{n-3}.

    Uses the four linear relations between LK curvatures and the
    residues, relative residues and boundary residues.
    """
    n = body.n
    br = body_residues(body, order)
    rr = relative_residues(body, order)
    out = {n: br.value(-n) / sphere_volume(n - 1)}
    out[n - 1] = -(n - 1) / (2.0 * sphere_volume(n - 2)) * br.value(-n - 1)
    out[n - 2] = -(n - 1) / (math.pi * sphere_volume(n - 2)) * rr.value(-n - 1)
    if n >= 3:
        bnd_second = residue_second(body.boundary, order)
        out[n - 3] = (3.0 * (n - 1) / (4.0 * math.pi * sphere_volume(n - 2))
                      * ((n + 1) * br.value(-n - 3) - bnd_second))
    return out


def steiner_volume(body: ManifoldSpec, r: float, order: int = 32) -> float:
    """Vol of the outward r-parallel body from the Steiner polynomial."""
    C = lk_curvatures(body, order)
    n = body.n
    return sum(ball_volume(k) * C[n - k] * r ** k for k in range(n + 1))


# ---------------------------------------------------------------------------
# Weyl tube coefficient, intrinsic residues, heat coefficients
# ---------------------------------------------------------------------------

def weyl_tube_k2(spec: ManifoldSpec, order: int = 32) -> dict:
    """Second Weyl tube coefficient (1/2) int Sc, direct and residue paths."""
    surf = spec.surface()
    m = surf.m
    direct = 0.5 * frame_integral(spec, lambda fr: fr.scalar_curvature,
                                  order=order, max_order=2)
    r_nu = frame_integral(spec, local_residue_m2_nu, order=order, max_order=2)
    r_one = frame_integral(spec, local_residue_m2, order=order, max_order=2)
    residue_path = -(m / sphere_volume(m - 1)) * (r_nu + 3.0 * r_one)
    return {"direct": direct, "residues": residue_path}


@dataclass(frozen=True)
class IntrinsicData:
    """Integrated intrinsic curvature data of a closed Riemannian manifold."""
    m: int
    vol: float
    int_sc: float
    int_rm_sq: float
    int_ric_sq: float
    int_sc_sq: float


def intrinsic_residues(data: IntrinsicData) -> dict:
    """First three residues of a closed Riemannian manifold from its curvature.

    The geodesic-ball volume expansion gives R(-m) = o_{m-1} Vol,
    R(-m-2) = -(o_{m-1}/6m) int Sc, and R(-m-4) with weights (-3, 8, 5)/
    (360 m (m+2)) on (|Rm|^2, |Ric|^2, Sc^2).
    """
    m = data.m
    o = sphere_volume(m - 1)
    return {
        -m: o * data.vol,
        -m - 2: -o / (6.0 * m) * data.int_sc,
        -m - 4: o / (360.0 * m * (m + 2)) * (
            -3.0 * data.int_rm_sq + 8.0 * data.int_ric_sq + 5.0 * data.int_sc_sq),
    }


def heat_coefficients(data: IntrinsicData) -> tuple[float, float, float]:
    """Heat-trace coefficients a_0, a_1, a_2; a_2 weights are (2, -2, 5)/360."""
    a0 = data.vol
    a1 = data.int_sc / 6.0
    a2 = (2.0 * data.int_rm_sq - 2.0 * data.int_ric_sq + 5.0 * data.int_sc_sq) / 360.0
    return a0, a1, a2


def sphere_intrinsic_data(m: int, r: float = 1.0) -> IntrinsicData:
    """Closed-form intrinsic data of the round m-sphere of radius r."""
    vol = sphere_volume(m) * r ** m
    sc = m * (m - 1) / r ** 2
    rm_sq = 2.0 * m * (m - 1) / r ** 4
    ric_sq = m * (m - 1) ** 2 / r ** 4
    return IntrinsicData(m=m, vol=vol, int_sc=sc * vol, int_rm_sq=rm_sq * vol,
                         int_ric_sq=ric_sq * vol, int_sc_sq=sc ** 2 * vol)


def flat_torus_intrinsic_data(m: int, vol: float) -> IntrinsicData:
    return IntrinsicData(m=m, vol=vol, int_sc=0.0, int_rm_sq=0.0, int_ric_sq=0.0,
                         int_sc_sq=0.0)


# ---------------------------------------------------------------------------
# extrinsic ball t^6 coefficient for surfaces in R^3
# ---------------------------------------------------------------------------

def extrinsic_ball_t6(frame: CurvatureFrame) -> float:
    """Coefficient of t^6 in the extrinsic-ball volume expansion (m=2, n=3).

    (pi/9216) (-9 (h_ii)^4 + 36 (h_ij h_ij)^2 + 64 h_ij;k h_ij;k
               - 24 h_ii h_jj;kk + 72 h_ij h_ij;kk + 24 h_ij h_kk;ij),
    where the semicolons are covariant derivatives of the second fundamental
    form. Equals one sixth of the graph-method local residue at z = -6; on a
    round sphere the coefficient vanishes identically (the chord-ball area is
    exactly pi t^2).
    """
    if frame.m != 2 or frame.codim != 1:
        raise NumericError("extrinsic_ball_t6 needs a surface in R^3")
    h = frame.f2[..., 0]
    f3 = frame.f3[..., 0]
    f4 = frame.f4[..., 0]
    # At the graph origin: h_ij;k = f_ijk, and
    # h_ij;kl = d_k d_l (f_ij / sqrt g) - dGamma corrections
    #         = f_ijkl - f_ij (h^2)_kl - h_pj h_ki h_pl - h_ip h_kj h_pl.
    hk2 = h @ h
    h_d2 = (f4 - np.einsum("ij,kl->ijkl", h, hk2)
            - np.einsum("pl,ki,pj->ijkl", h, h, h)
            - np.einsum("pl,kj,ip->ijkl", h, h, h))
    trH = float(np.trace(h))
    t1 = -9.0 * trH ** 4
    t2 = 36.0 * float(np.sum(h * h)) ** 2
    t3 = 64.0 * float(np.sum(f3 ** 2))
    t4 = -24.0 * trH * float(np.einsum("jjkk->", h_d2))
    t5 = 72.0 * float(np.einsum("ij,ijkk->", h, h_d2))
    t6 = 24.0 * float(np.einsum("ij,kkij->", h, h_d2))
    return math.pi / 9216.0 * (t1 + t2 + t3 + t4 + t5 + t6)


def extrinsic_ball_t6_graph_oracle(frame: CurvatureFrame) -> float:
    """Independent value: one sixth of the graph-method local residue at -6."""
    return local_residue_graph(frame, j=2, weight="one") / 6.0
