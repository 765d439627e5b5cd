"""Moebius transformations of specs and the invariance test harness."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._util import NumericError
from .manifold.quadrature import sample_quadrature
from .manifold.shapes import ManifoldSpec, Patch

GUARD_FRACTION = 1e-2  # minimum distance of samples to an inversion center, x diameter


@dataclass(frozen=True)
class Inversion:
    center: tuple
    radius: float = 1.0

    def apply(self, x: np.ndarray) -> np.ndarray:
        c = np.asarray(self.center, dtype=float)
        w = np.atleast_2d(x) - c[None, :]
        n2 = np.einsum("ni,ni->n", w, w)
        return c[None, :] + self.radius ** 2 * w / n2[:, None]

    def apply_normal(self, x: np.ndarray, nu: np.ndarray) -> np.ndarray:
        # d(inversion) reflects across the radial direction; outward stays outward
        c = np.asarray(self.center, dtype=float)
        w = np.atleast_2d(x) - c[None, :]
        what = w / np.linalg.norm(w, axis=1, keepdims=True)
        return nu - 2.0 * np.einsum("ni,ni->n", nu, what)[:, None] * what


@dataclass(frozen=True)
class Similarity:
    scale: float = 1.0
    rotation: tuple | None = None     # row-major orthogonal matrix
    translation: tuple | None = None

    def apply(self, x: np.ndarray) -> np.ndarray:
        y = self.scale * np.atleast_2d(x)
        if self.rotation is not None:
            y = y @ np.asarray(self.rotation, dtype=float).T
        if self.translation is not None:
            y = y + np.asarray(self.translation, dtype=float)[None, :]
        return y

    def apply_normal(self, x: np.ndarray, nu: np.ndarray) -> np.ndarray:
        if self.rotation is not None:
            return nu @ np.asarray(self.rotation, dtype=float).T
        return nu


@dataclass(frozen=True)
class MobiusMap:
    """Ordered composition of inversions and similarities (first entry acts first)."""
    steps: tuple = field(default_factory=tuple)

    def apply(self, x: np.ndarray) -> np.ndarray:
        y = np.atleast_2d(np.asarray(x, dtype=float))
        for s in self.steps:
            y = s.apply(y)
        return y

    def apply_normal(self, x: np.ndarray, nu: np.ndarray) -> np.ndarray:
        y = np.atleast_2d(np.asarray(x, dtype=float))
        out = np.atleast_2d(np.asarray(nu, dtype=float))
        for s in self.steps:
            out = s.apply_normal(y, out)
            y = s.apply(y)
        return out

    def check_guard(self, x: np.ndarray):
        y = np.atleast_2d(np.asarray(x, dtype=float))
        diam = float(np.linalg.norm(y.max(axis=0) - y.min(axis=0)))
        for s in self.steps:
            if isinstance(s, Inversion):
                d = np.linalg.norm(y - np.asarray(s.center)[None, :], axis=1)
                if d.min() < GUARD_FRACTION * max(diam, 1e-300):
                    raise NumericError(
                        f"spec intersects the guard ball around inversion center {s.center}")
            y = s.apply(y)


def transform_spec(spec: ManifoldSpec, mmap: MobiusMap,
                   axis_symmetric: bool = False) -> ManifoldSpec:
    """Compose every patch with the map; normals are transported alongside.

    ``axis_symmetric`` marks images that keep the rotational symmetry about
    the last ambient axis (inversion centers on that axis), enabling the
    theta_1-line reduction downstream.
    """
    surf = spec.surface()
    nodes = sample_quadrature(surf, 16, with_normals=False)
    mmap.check_guard(nodes.x)

    def make(p: Patch) -> Patch:
        def chart(u, _p=p, _t=mmap):
            return _t.apply(_p.chart(u))

        normal = None
        if p.normal is not None:
            def normal(u, _p=p, _t=mmap):
                return _t.apply_normal(_p.chart(u), _p.normal(u))

        return Patch(box=p.box, chart=chart, periodic=p.periodic,
                     label=p.label + "+mobius", normal=normal)

    patches = tuple(make(p) for p in surf.patches)
    params = {"base": surf.kind}
    if axis_symmetric:
        params["axis_symmetric"] = True
    new_surf = ManifoldSpec(kind="transformed", m=surf.m, n=surf.n, patches=patches,
                            params=params, oriented=surf.oriented, closed=surf.closed)
    if not spec.is_body:
        return new_surf
    interior = None
    if spec.interior_point is not None:
        interior = tuple(mmap.apply(np.asarray(spec.interior_point)[None, :])[0])
    return ManifoldSpec(kind="transformed_body", m=spec.m, n=spec.n, patches=patches,
                        params=params, is_body=True, boundary=new_surf,
                        interior_point=interior)


def transformed_curvatures(kappa, p, nu, center=None, radius: float = 1.0):
    """Principal curvatures of the inversion image at the image of p.

    kappa_i -> -+ (|p - c|^2 kappa_i + 2 <p - c, nu>) / rho^2; both signs
    correspond to the two normal orientations of the image. The positive
    branch is returned; callers fix the sign by continuity/outwardness.
    """
    p = np.asarray(p, dtype=float)
    if np.allclose(p, 0) and center is None:
        raise NumericError("transformed_curvatures undefined at the inversion center")
    c = np.zeros_like(p) if center is None else np.asarray(center, dtype=float)
    w = p - c
    k = np.asarray(kappa, dtype=float)
    return (np.dot(w, w) * k + 2.0 * float(np.dot(w, nu))) / radius ** 2


# ---------------------------------------------------------------------------
# invariance harness
# ---------------------------------------------------------------------------

def _quantity(spec: ManifoldSpec, name: str, order: int):
    from . import conformal, continuation, residues
    surf = spec.surface()
    if name == "residue_m4":
        return residues.residue_second(spec, order=order)
    if name == "nu_residue_m4":
        return residues.nu_residue_second(spec, order=order)
    if name == "residue_m8":
        reduced = "auto" if (surf.kind in ("sphere", "spheroid")
                             or surf.params.get("axis_symmetric")) else False
        return residues.residue_m8(spec, order=order, reduced=reduced)["modified"]
    if name == "body_residue_m6":
        if not spec.is_body or spec.n != 3:
            raise NumericError("body_residue_m6 needs a 3-dimensional body")
        return residues.body_residues(spec, order=order).value(-6)
    if name == "beta_at_-2":
        prof = continuation.distance_profile(spec, order=order)
        return float(continuation.beta_eval(prof, -2.0).value.real)
    if name == "gw":
        return conformal.graham_witten(spec, order=order)
    raise NumericError(f"unknown invariance quantity {name!r}")


def invariance_report(spec: ManifoldSpec, mmap: MobiusMap, quantity: str,
                      order: int = 32, axis_symmetric: bool = False) -> dict:
    """Recompute the selected quantity on the transformed spec from scratch."""
    before = _quantity(spec, quantity, order)
    image = transform_spec(spec, mmap, axis_symmetric=axis_symmetric)
    after = _quantity(image, quantity, order)
    return {"before": before, "after": after, "diff": abs(after - before),
            "rel": abs(after - before) / max(abs(before), 1e-300)}


def weyl_decomposition_identity(rm_sq: float, ric_sq: float, sc_sq: float) -> float:
    """Residual of -3|Rm|^2 + 8|Ric|^2 + 5 Sc^2 = -2|W|^2 - 4X + (20/3) Sc^2.

    |W|^2 = |Rm|^2 - 2|Ric|^2 + Sc^2/3 and X = (|Rm|^2 - 4|Ric|^2 + Sc^2)/4;
    the identity is algebraic, so the residual vanishes for any inputs.
    """
    w2 = rm_sq - 2.0 * ric_sq + sc_sq / 3.0
    x = 0.25 * (rm_sq - 4.0 * ric_sq + sc_sq)
    lhs = -3.0 * rm_sq + 8.0 * ric_sq + 5.0 * sc_sq
    rhs = -2.0 * w2 - 4.0 * x + 20.0 / 3.0 * sc_sq
    return float(lhs - rhs)
