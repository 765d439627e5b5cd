"""Quadrature sampling of manifold specs.

Tensor-product Gauss-Legendre nodes per patch, with weights premultiplied by
the Riemannian volume element sqrt(det g). Jacobians come from the analytic
normal field when available, otherwise from Richardson-extrapolated central
differences of the chart map.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .._util import NumericError
from .shapes import ManifoldSpec, Patch


class DegenerateJacobianError(NumericError):
    pass


@lru_cache(maxsize=64)
def gauss_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = leggauss(order)
    return x, w


def gauss_on(a: float, b: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = gauss_rule(order)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * x, half * w


@dataclass(frozen=True)
class QuadratureNode:
    patch: str
    u: np.ndarray
    x: np.ndarray
    w: float
    nu: np.ndarray | None = None


class NodeSet:
    """Array-backed sequence of quadrature nodes for one spec."""

    def __init__(self, spec: ManifoldSpec, patch_labels, u, x, w, nu=None):
        self.spec = spec
        self.patch_labels = patch_labels
        self.u = u          # (N, m)
        self.x = x          # (N, n)
        self.w = w          # (N,)
        self.nu = nu        # (N, n) or None

    def __len__(self) -> int:
        return self.x.shape[0]

    def __getitem__(self, i: int) -> QuadratureNode:
        nu = None if self.nu is None else self.nu[i]
        return QuadratureNode(self.patch_labels[i], self.u[i], self.x[i], float(self.w[i]), nu)

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @property
    def total_weight(self) -> float:
        return float(self.w.sum())


def patch_jacobian(patch: Patch, u: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Jacobian d(chart)/du at rows of u, shape (N, n, m).

    Uses the analytic Jacobian when the patch carries one, otherwise
    Richardson-extrapolated central differences.
    """
    u = np.atleast_2d(u)
    if patch.jacobian is not None:
        return patch.jacobian(u)
    N, m = u.shape

    def central(step):
        cols = []
        for d in range(m):
            e = np.zeros(m)
            e[d] = step
            cols.append((patch.chart(u + e) - patch.chart(u - e)) / (2.0 * step))
        return np.stack(cols, axis=2)

    j1 = central(h)
    j2 = central(h / 2.0)
    return (4.0 * j2 - j1) / 3.0


def volume_element(patch: Patch, u: np.ndarray) -> np.ndarray:
    J = patch_jacobian(patch, u)
    g = np.einsum("nia,nib->nab", J, J)
    det = np.linalg.det(g)
    if np.any(det <= 0):
        bad = int(np.argmin(det))
        raise DegenerateJacobianError(
            f"degenerate Jacobian on patch {patch.label!r} at u={np.atleast_2d(u)[bad]}")
    return np.sqrt(det)


def patch_grid(patch: Patch, order: int):
    """Tensor Gauss-Legendre grid on the patch box: (u, w_param)."""
    axes, wts = [], []
    for (a, b) in patch.box:
        xs, ws = gauss_on(a, b, order)
        axes.append(xs)
        wts.append(ws)
    mesh = np.meshgrid(*axes, indexing="ij")
    u = np.stack([mm.ravel() for mm in mesh], axis=1)
    w = wts[0]
    for wi in wts[1:]:
        w = np.multiply.outer(w, wi)
    return u, w.ravel()


def sample_quadrature(spec: ManifoldSpec, order: int, with_normals: bool | None = None) -> NodeSet:
    """Quadrature nodes on the spec (its boundary if the spec is a body)."""
    if order < 2:
        raise ValueError("order must be >= 2")
    surf = spec.surface()
    if with_normals is None:
        with_normals = surf.codim == 1
    u_all, x_all, w_all, nu_all, labels = [], [], [], [], []
    for patch in surf.patches:
        u, wp = patch_grid(patch, order)
        x = patch.chart(u)
        sg = volume_element(patch, u)
        u_all.append(u)
        x_all.append(x)
        w_all.append(wp * sg)
        labels.extend([patch.label] * len(u))
        if with_normals:
            nu_all.append(normals_on_patch(surf, patch, u))
    nu = np.concatenate(nu_all, axis=0) if (with_normals and nu_all) else None
    return NodeSet(surf, labels, np.concatenate(u_all, axis=0),
                   np.concatenate(x_all, axis=0), np.concatenate(w_all), nu)


def normals_on_patch(spec: ManifoldSpec, patch: Patch, u: np.ndarray) -> np.ndarray:
    """Outward unit normals for a hypersurface patch."""
    if patch.normal is not None:
        return patch.normal(u)
    if spec.codim != 1:
        raise NumericError("normals only defined for hypersurfaces")
    J = patch_jacobian(patch, u)
    N, n, m = J.shape
    nu = np.empty((N, n))
    for i in range(N):
        q, _ = np.linalg.qr(J[i], mode="complete")
        v = q[:, m]
        nu[i] = v
    # orient outward using an interior reference point when available
    ref = spec.interior_point
    x = patch.chart(u)
    if ref is None:
        ref = x.mean(axis=0)  # centroid works for the star-shaped builtins
    sgn = np.sign(np.einsum("ni,ni->n", nu, x - np.asarray(ref)[None, :]))
    sgn[sgn == 0] = 1.0
    return nu * sgn[:, None]


def integrate(spec: ManifoldSpec, order: int, fn=None) -> float:
    """Integral of a pointwise function fn(NodeSet) -> (N,) over the spec."""
    nodes = sample_quadrature(spec, order)
    if fn is None:
        return nodes.total_weight
    vals = fn(nodes)
    return float(np.dot(nodes.w, vals))


def body_volume(body: ManifoldSpec, order: int) -> float:
    """Volume of a compact body via the divergence theorem on its boundary."""
    if not body.is_body:
        raise ValueError("body_volume needs a body")
    nodes = sample_quadrature(body, order, with_normals=True)
    flux = np.einsum("ni,ni->n", nodes.x, nodes.nu)
    return float(np.dot(nodes.w, flux)) / body.n


# ---------------------------------------------------------------------------
# sphere monomial moments
# ---------------------------------------------------------------------------

def sphere_monomial_integral(m: int, exponents) -> float:
    """Integral over S^(m-1) of prod_i w_i^(e_i) for even exponents (0 otherwise).

    Uses int = o_{m-1} * prod (e_i - 1)!! / (m (m+2) ... (m + 2(s-1))) with
    s = (sum e_i)/2.
    """
    from ..oracles import sphere_volume
    es = list(exponents) + [0] * (m - len(list(exponents)))
    if any(e % 2 for e in es):
        return 0.0
    s = sum(es) // 2
    num = 1.0
    for e in es:
        for k in range(1, e, 2):
            num *= k
    den = 1.0
    for j in range(s):
        den *= (m + 2 * j)
    return sphere_volume(m - 1) * num / den
