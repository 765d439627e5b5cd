"""The regularization engine.

Builds weighted interpoint-distance distributions psi_lambda(t), fits their
small-t even-polynomial model, and evaluates the analytically continued
energy function

    B(z) = int_0^inf t^z psi'(t) dt
         = sum_j abar_{2j} delta^(z+m+2j) / (z+m+2j)   [fitted small-t part]
           + int_delta^diam t^z psi'(t) dt             [regular tail]

together with its residues and Hadamard finite parts. The small-t split is
exact for the polynomial model; the model residual carries a t^(m-1+2J+2)
weight and is negligible against the fit diagnostics it is reported with.

Profiles for round circles and spheres use closed-form distance
distributions (every weight needed there depends on the chord length only),
which makes the continuation spectrally accurate; generic shapes use a
two-scale empirical scheme: global pair quadrature for the tail and local
polar quadrature around each sample point for the small-t data.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import roots_jacobi

from ._util import NumericError, chunked_map_reduce, fmt_float
from .manifold.frames import reach_estimate
from .manifold.quadrature import gauss_on, gauss_rule, patch_jacobian, sample_quadrature
from .manifold.shapes import ManifoldSpec

POLE_GUARD = 1e-3


class ReachError(NumericError):
    pass


class WeightKind(str, enum.Enum):
    ONE = "one"
    NU = "nu"                          # Grassmann weight of oriented tangent planes
    NORMAL_PRODUCT = "normal-product"  # <nu_x, nu_y>; equals NU on oriented hypersurfaces
    REL_BOUNDARY = "relative-boundary"          # <y - x, nu_y>
    REL_BOUNDARY_FLIPPED = "relative-boundary-flipped"  # <x - y, nu_x>
    CUSTOM = "custom"


def _needs_normals(weight: WeightKind) -> bool:
    return weight in (WeightKind.NU, WeightKind.NORMAL_PRODUCT,
                      WeightKind.REL_BOUNDARY, WeightKind.REL_BOUNDARY_FLIPPED)


def _pair_weight(weight: WeightKind, x, nux, y, nuy, custom=None):
    """Weight on pairs: x (N, n) against y (M, n) -> (N, M)."""
    if weight is WeightKind.ONE:
        return np.ones((x.shape[0], y.shape[0]))
    if weight in (WeightKind.NU, WeightKind.NORMAL_PRODUCT):
        return nux @ nuy.T
    if weight is WeightKind.REL_BOUNDARY:
        return np.einsum("nmk,mk->nm", y[None, :, :] - x[:, None, :], nuy)
    if weight is WeightKind.REL_BOUNDARY_FLIPPED:
        return np.einsum("nmk,nk->nm", x[:, None, :] - y[None, :, :], nux)
    if weight is WeightKind.CUSTOM:
        return custom(x, nux, y, nuy)
    raise NumericError(f"unsupported weight {weight}")


@dataclass
class BetaEvaluation:
    """One evaluation of the meromorphic energy function."""
    z: complex
    value: complex
    nearest_pole: float
    pole_distance: float
    residue: float
    method: str
    at_pole: bool = False
    finite_part: Optional[complex] = None


@dataclass
class DistanceProfile:
    """Weighted interpoint-distance distribution with its small-t model.

    ``coeffs`` are the volume-normalized even coefficients abar_0, abar_2,
    ... of psi'(t) = t^(m-1) (abar_0 + abar_2 t^2 + ...); the global residue
    at z = -m-2j is vol * coeffs[j]. Tail mass is stored as per-cell moments
    (sum w, sum w d, sum w d^2) so the tail integral of t^z is evaluated with
    a second-order midpoint correction at any z.
    """
    m: int
    vol: float
    delta: float
    diam: float
    weight: str
    mode: str                      # "exact" | "empirical"
    coeffs: np.ndarray
    fit_residual: float
    fit_condition: float
    coeff_errors: np.ndarray
    tail_edges: np.ndarray
    tail_w: np.ndarray
    tail_wd: np.ndarray
    tail_wd2: np.ndarray
    kind: str = ""
    exact_tail: Optional[Callable] = None   # psi'(t), unnormalized; serialization cells
    tail_quad: Optional[Callable] = None    # z -> complex, spectral tail integral
    metadata: dict = field(default_factory=dict)

    # -- pole bookkeeping ---------------------------------------------------

    def poles(self) -> np.ndarray:
        return -(self.m + 2.0 * np.arange(len(self.coeffs)))

    def nearest_pole(self, z) -> tuple[float, float]:
        zs = complex(z)
        ps = self.poles()
        d = np.abs(zs - ps)
        i = int(np.argmin(d))
        return float(ps[i]), float(d[i])

    # -- serialization ------------------------------------------------------

    def to_text(self) -> str:
        lines = ["RLPROFILE 1",
                 f"m {self.m}",
                 f"vol {fmt_float(self.vol)}",
                 f"delta {fmt_float(self.delta)}",
                 f"diam {fmt_float(self.diam)}",
                 f"weight {self.weight}",
                 f"mode {self.mode}",
                 f"kind {self.kind}",
                 f"fit_residual {fmt_float(self.fit_residual)}",
                 f"fit_condition {fmt_float(self.fit_condition)}",
                 "coeffs " + " ".join(fmt_float(c) for c in self.coeffs),
                 "coeff_errors " + " ".join(fmt_float(c) for c in self.coeff_errors),
                 f"tail_cells {len(self.tail_w)}"]
        for i in range(len(self.tail_w)):
            lines.append(" ".join(fmt_float(v) for v in
                                  (self.tail_edges[i], self.tail_w[i],
                                   self.tail_wd[i], self.tail_wd2[i])))
        lines.append(f"tail_end {fmt_float(self.tail_edges[-1])}")
        lines.append("end")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "DistanceProfile":
        lines = [ln for ln in text.strip().splitlines()]
        if lines[0] != "RLPROFILE 1":
            raise NumericError("unknown profile format")
        kv = {}
        i = 1
        while True:
            parts = lines[i].split()
            key = parts[0]
            if key == "tail_cells":
                ncell = int(parts[1])
                i += 1
                break
            kv[key] = parts[1:]
            i += 1
        edges, w, wd, wd2 = [], [], [], []
        for row in range(ncell):
            a, b, c, d = (float(v) for v in lines[i + row].split())
            edges.append(a)
            w.append(b)
            wd.append(c)
            wd2.append(d)
        tail_end = float(lines[i + ncell].split()[1])
        edges.append(tail_end)
        return cls(m=int(kv["m"][0]), vol=float(kv["vol"][0]),
                   delta=float(kv["delta"][0]), diam=float(kv["diam"][0]),
                   weight=kv["weight"][0], mode=kv["mode"][0],
                   coeffs=np.array([float(v) for v in kv["coeffs"]]),
                   fit_residual=float(kv["fit_residual"][0]),
                   fit_condition=float(kv["fit_condition"][0]),
                   coeff_errors=np.array([float(v) for v in kv["coeff_errors"]]),
                   tail_edges=np.array(edges), tail_w=np.array(w),
                   tail_wd=np.array(wd), tail_wd2=np.array(wd2),
                   kind=kv.get("kind", [""])[0])


# ---------------------------------------------------------------------------
# round-sphere closed-form distributions
# ---------------------------------------------------------------------------

def _round_chord_density(m: int, r: float):
    """psi'_1,x(t) for the round m-sphere of radius r under chord distance;
    o_{m-1} t^(m-1) (1 - t^2/4r^2)^((m-2)/2) on [0, 2r]."""
    from .oracles import sphere_volume
    o = sphere_volume(m - 1)

    def density(t):
        t = np.asarray(t, dtype=float)
        c = np.clip(1.0 - t * t / (4.0 * r * r), 0.0, None)
        return o * t ** (m - 1) * c ** ((m - 2) / 2.0)

    return density


def _round_weight_factor(weight: WeightKind, r: float):
    """Distance-only weight factor Lambda(t) on the round sphere."""
    if weight is WeightKind.ONE:
        return lambda t: np.ones_like(np.asarray(t, dtype=float))
    if weight in (WeightKind.NU, WeightKind.NORMAL_PRODUCT):
        return lambda t: 1.0 - np.asarray(t, dtype=float) ** 2 / (2.0 * r * r)
    if weight in (WeightKind.REL_BOUNDARY, WeightKind.REL_BOUNDARY_FLIPPED):
        return lambda t: np.asarray(t, dtype=float) ** 2 / (2.0 * r)
    raise NumericError(f"no closed-form weight factor for {weight}")


def _round_sphere_params(spec: ManifoldSpec):
    surf = spec.surface()
    if surf.kind == "circle":
        return 1, surf.params["r"]
    if surf.kind == "sphere":
        return surf.params["m"], surf.params["r"]
    return None


# ---------------------------------------------------------------------------
# small-t fit
# ---------------------------------------------------------------------------

def _fit_even_model(m: int, edges: np.ndarray, masses: np.ndarray, ncoef: int,
                    delta: float, allow_odd: bool = False):
    """Least squares for psi'(t) = t^(m-1) sum_j a_j t^(e_j) from bin masses.

    Exponents e_j are the even powers 0, 2, ..., plus the odd ones when
    ``allow_odd`` (used by the evenness diagnostic). Columns are scaled by
    delta^e for conditioning. Returns (coeffs for even powers, full coeffs,
    exponents, residual, condition, per-coefficient error estimates).
    """
    expo = np.arange(0, 2 * ncoef, 2) if not allow_odd else np.arange(0, 2 * ncoef - 1)
    A = np.zeros((len(masses), len(expo)))
    for j, e in enumerate(expo):
        p = m + e
        A[:, j] = (edges[1:] ** p - edges[:-1] ** p) / p
    scale_rows = (edges[1:] ** m - edges[:-1] ** m) / m
    scale_cols = delta ** expo.astype(float)
    Aw = A / scale_rows[:, None] * scale_cols[None, :]
    bw = masses / scale_rows
    coef_scaled, res, rank, sv = np.linalg.lstsq(Aw, bw, rcond=None)
    coeffs = coef_scaled * scale_cols
    resid = Aw @ coef_scaled - bw
    dof = max(1, len(masses) - len(expo))
    sigma2 = float(resid @ resid) / dof
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else math.inf
    try:
        cov = np.linalg.inv(Aw.T @ Aw) * sigma2
        errs = np.sqrt(np.clip(np.diag(cov), 0.0, None)) * scale_cols
    except np.linalg.LinAlgError:
        errs = np.full(len(expo), math.nan)
    return coeffs, expo, float(np.sqrt(resid @ resid / len(masses))), cond, errs


# ---------------------------------------------------------------------------
# empirical two-scale accumulation
# ---------------------------------------------------------------------------

def _bbox_diameter(x: np.ndarray) -> float:
    span = x.max(axis=0) - x.min(axis=0)
    return float(np.linalg.norm(span))


def _tail_moments(x, wq, nus, weight, delta, edges, workers=None, custom=None):
    """Accumulate (sum w, sum w d, sum w d^2) per tail cell over ordered pairs d >= delta."""
    N = x.shape[0]
    ncell = len(edges) - 1
    chunk_size = max(1, min(512, N))
    chunks = [np.arange(s, min(s + chunk_size, N)) for s in range(0, N, chunk_size)]

    def work(idx):
        xs = x[idx]
        nx = None if nus is None else nus[idx]
        d = np.sqrt(np.maximum(((xs[:, None, :] - x[None, :, :]) ** 2).sum(axis=2), 0.0))
        lam = _pair_weight(weight, xs, nx, x, nus, custom=custom)
        wmat = wq[idx][:, None] * wq[None, :] * lam
        # drop the diagonal and the near zone
        for r, gi in enumerate(idx):
            d[r, gi] = -1.0
        sel = d >= delta
        dv = d[sel]
        wv = wmat[sel]
        cell = np.clip(np.searchsorted(edges, dv, side="right") - 1, 0, ncell - 1)
        out = np.zeros((3, ncell))
        np.add.at(out[0], cell, wv)
        np.add.at(out[1], cell, wv * dv)
        np.add.at(out[2], cell, wv * dv * dv)
        return out

    acc = chunked_map_reduce(work, chunks, workers=workers)
    return acc[0], acc[1], acc[2]


def _tail_moments_curve(surf, weight, delta, edges, order, custom):
    """Tail cell moments for closed curves by per-node adapted inner quadrature.

    For each outer node the inner arc {y : d(x, y) >= delta} is an interval
    whose endpoints are root-found, so the inner integral avoids the sharp
    cut entirely and the accumulated cell measure is smooth to quadrature
    accuracy. This matters at strongly negative z where the seam at delta is
    amplified by t^z.
    """
    patch = surf.patches[0]
    a0, b0 = patch.box[0]
    period = b0 - a0
    from .manifold.quadrature import patch_grid, volume_element
    u0s, wp = patch_grid(patch, order)
    sg = volume_element(patch, u0s)
    wq = wp * sg
    ncell = len(edges) - 1
    out = np.zeros((3, ncell))
    gx, gw = gauss_rule(8)
    gx = 0.5 * (gx + 1.0)
    gw = 0.5 * gw
    n_inner = 220
    for u0, wx in zip(u0s, wq):
        x0 = patch.chart(u0[None, :])[0]
        nu0 = (patch.normal(u0[None, :])[0]
               if (_needs_normals(weight) and patch.normal is not None) else None)
        # bracket the two crossings of d = delta around the node
        s_lo = _curve_cross(patch, u0, x0, delta, period, +1.0)
        s_hi = _curve_cross(patch, u0, x0, delta, period, -1.0)
        # inner domain: u0 + [s_lo, period - s_hi] (wrapping forward)
        length = (period - s_hi) - s_lo
        if length <= 0:
            continue
        seg_edges = u0[0] + s_lo + length * np.arange(n_inner + 1) / n_inner
        mids = seg_edges[:-1, None] + np.diff(seg_edges)[:, None] * gx[None, :]
        flat = mids.reshape(-1, 1)
        y = patch.chart(flat)
        sgv = volume_element(patch, flat)
        d = np.linalg.norm(y - x0[None, :], axis=1)
        lam = np.ones_like(d)
        if weight is not WeightKind.ONE:
            nuy = patch.normal(flat) if patch.normal is not None else None
            lam = _pair_weight(weight, x0[None, :],
                               None if nu0 is None else nu0[None, :],
                               y, nuy, custom=custom)[0]
        wseg = (np.diff(seg_edges)[:, None] * gw[None, :]).reshape(-1)
        wtot = wx * wseg * sgv * lam
        cell = np.clip(np.searchsorted(edges, d, side="right") - 1, 0, ncell - 1)
        np.add.at(out[0], cell, wtot)
        np.add.at(out[1], cell, wtot * d)
        np.add.at(out[2], cell, wtot * d * d)
    return out[0], out[1], out[2]


def _curve_cross(patch, u0, x0, delta, period, direction):
    """Arc offset s > 0 with |chart(u0 + direction * s) - x0| = delta."""
    lo, hi = 0.0, period / 64.0
    for _ in range(80):
        d = float(np.linalg.norm(patch.chart(
            np.array([[u0[0] + direction * hi]])) - x0[None, :]))
        if d >= delta:
            break
        hi *= 1.5
        if hi > 0.5 * period:
            hi = 0.5 * period
            break
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        d = float(np.linalg.norm(patch.chart(
            np.array([[u0[0] + direction * mid]])) - x0[None, :]))
        if d < delta:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _direction_set(m: int, n_ang: int):
    """Directions on the parameter-space unit sphere with quadrature weights.

    Counting measure for m=1, trapezoid on the circle for m=2, tensor
    (Gauss x trapezoid) for m=3, 4.
    """
    if m == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if m == 2:
        ang = 2.0 * math.pi * np.arange(n_ang) / n_ang
        dirs = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        return dirs, np.full(n_ang, 2.0 * math.pi / n_ang)
    # m >= 3: spherical product grid
    n_pol = max(4, n_ang // 4)
    ts, ws = gauss_on(0.0, math.pi, n_pol)
    ang = 2.0 * math.pi * np.arange(n_ang) / n_ang
    wa = np.full(n_ang, 2.0 * math.pi / n_ang)
    dirs, wts = [], []
    if m == 3:
        for t, wt in zip(ts, ws):
            for a, w2 in zip(ang, wa):
                dirs.append([math.sin(t) * math.cos(a), math.sin(t) * math.sin(a),
                             math.cos(t)])
                wts.append(wt * w2 * math.sin(t))
    else:
        t2s, w2s = gauss_on(0.0, math.pi, n_pol)
        for t, wt in zip(ts, ws):
            for t2, wt2 in zip(t2s, w2s):
                for a, w2 in zip(ang, wa):
                    dirs.append([math.sin(t) * math.sin(t2) * math.cos(a),
                                 math.sin(t) * math.sin(t2) * math.sin(a),
                                 math.sin(t) * math.cos(t2), math.cos(t)])
                    wts.append(wt * wt2 * w2 * math.sin(t) ** 2 * math.sin(t2))
    return np.asarray(dirs), np.asarray(wts)


def _near_masses(spec, weight, delta, t_grid, order_sub, n_ang, custom=None):
    """Bin masses of psi on (0, delta] by local polar quadrature around
    each outer node: for every direction in parameter space, root-find the
    radius where the chord distance crosses each t, then integrate the
    volume element radially."""
    surf = spec.surface()
    m = surf.m
    dirs, dirw = _direction_set(m, n_ang)
    gx, gw = gauss_rule(12)
    gx = 0.5 * (gx + 1.0)
    gw = 0.5 * gw
    nbin = len(t_grid)
    masses = np.zeros(nbin)
    tmax = float(t_grid[-1])
    nd = len(dirs)
    use_implicit = surf.implicit is not None and surf.implicit.value is not None         and surf.codim == 1
    for pi, patch in enumerate(surf.patches):
        from .manifold.quadrature import patch_grid, volume_element
        u0s, wp = patch_grid(patch, order_sub)
        sg = volume_element(patch, u0s)
        wq = wp * sg
        for u0, wx in zip(u0s, wq):
            x0 = patch.chart(u0[None, :])[0]
            if use_implicit:
                masses += wx * _cap_masses_implicit(surf, x0, weight, t_grid,
                                                    dirw, gx, gw, custom, n_ang)
                continue
            nu0 = (patch.normal(u0[None, :])[0]
                   if (_needs_normals(weight) and patch.normal is not None) else None)
            J = patch_jacobian(patch, u0[None, :])[0]
            sig = np.linalg.norm(J @ dirs.T, axis=0)  # metric stretch per direction
            rho0 = tmax / np.maximum(sig, 1e-12)
            try:
                rho_star = _cross_radii(patch, u0, x0, dirs, rho0, t_grid)
            except _RayWrapError:
                raise ReachError(
                    "a parameter ray wraps a short chart fiber before reaching "
                    "delta; reduce delta or supply an implicit description")
            # radial integrals of sqrt(g) * lambda * rho^(m-1) on [0, rho*],
            # all (direction, t) pairs in one batch
            rr = rho_star[:, :, None] * gx[None, None, :]        # (nd, nt, ng)
            flat = (u0[None, :] + rr.reshape(-1, 1) * np.repeat(
                dirs, nbin * len(gx), axis=0))
            sgv = volume_element(patch, flat).reshape(rr.shape)
            lam = 1.0
            if weight is not WeightKind.ONE:
                y = patch.chart(flat)
                nuy = patch.normal(flat) if patch.normal is not None else None
                lam = _pair_weight(weight, x0[None, :],
                                   None if nu0 is None else nu0[None, :],
                                   y, nuy, custom=custom).reshape(rr.shape)
            integ = (sgv * lam * rr ** (m - 1)) @ gw             # (nd, nt)
            masses += wx * (dirw @ (integ * rho_star))
    # cumulative caps -> per-bin masses
    return np.diff(np.concatenate([[0.0], masses]))


class _RayWrapError(NumericError):
    pass


def _cross_radii(patch, u0, x0, dirs, rho0, t_grid):
    """rho*(direction, t): radius where |chart(u0 + rho dir) - x0| = t.

    Monotone in rho inside the reach; bracket by doubling, then bisect.
    """
    nd = len(dirs)
    nt = len(t_grid)
    tmax = float(t_grid[-1])
    hi = rho0.copy()
    for _ in range(60):
        d = _chord(patch, u0, x0, dirs, hi)
        need = d < tmax
        if not np.any(need):
            break
        hi[need] *= 1.6
    else:
        # a parameter ray that wraps a short fiber (polar charts) never
        # reaches tmax; the caller falls back to the tangent-space probe
        raise _RayWrapError()
    # all (direction, t) roots in one vector bisection
    lo = np.zeros((nd, nt))
    h = np.repeat(hi[:, None], nt, axis=1)
    tt = np.broadcast_to(np.asarray(t_grid)[None, :], (nd, nt))
    dd = np.repeat(dirs, nt, axis=0)
    for _ in range(46):
        mid = 0.5 * (lo + h)
        d = _chord(patch, u0, x0, dd, mid.reshape(-1)).reshape(nd, nt)
        less = d < tt
        lo = np.where(less, mid, lo)
        h = np.where(less, h, mid)
    return 0.5 * (lo + h)


def _cap_masses_implicit(surf, x0, weight, t_grid, dirw, gx, gw, custom, n_ang):
    """Cap masses around x0 through the ambient tangent graph chart.

    Valid for hypersurfaces with a polynomial implicit F: the graph offset
    f(s) solves F(x0 + E^T s + f nu) = 0 by a scalar vector Newton from 0,
    the area density is sqrt(1 + |grad_s f|^2) with grad_s f = -(E grad F)/
    (nu . grad F), and chords satisfy d >= |s| so cap radii live in [0, t].
    """
    imp = surf.implicit
    m = surf.m
    g0 = imp.gradient(x0[None, :])[0]
    nu = g0 / np.linalg.norm(g0)
    P = np.eye(surf.n) - np.outer(nu, nu)
    wvals, V = np.linalg.eigh(P)
    E = V[:, wvals > 0.5].T                     # (m, n)
    dirs, dirw = _direction_set(m, n_ang)
    nd, nt = len(dirs), len(t_grid)
    tt = np.broadcast_to(np.asarray(t_grid)[None, :], (nd, nt))

    def graph_f(S):
        base = x0[None, :] + S @ E
        f = np.zeros(S.shape[0])
        for _ in range(60):
            y = base + f[:, None] * nu[None, :]
            val = imp.value(y)
            slope = imp.gradient(y) @ nu
            step = val / np.where(np.abs(slope) < 1e-300, 1e-300, slope)
            f = f - step
            if np.max(np.abs(step)) < 1e-14:
                break
        return f, base + f[:, None] * nu[None, :]

    rho = tt.copy()
    dd = np.repeat(dirs, nt, axis=0)
    for _ in range(60):
        S = rho.reshape(-1, 1) * dd
        f, y = graph_f(S)
        d = np.sqrt((rho.reshape(-1) ** 2 + f ** 2)).reshape(nd, nt)
        ratio = tt / np.maximum(d, 1e-300)
        rho = rho * ratio
        if np.max(np.abs(ratio - 1.0)) < 5e-14:
            break
    rr = rho[:, :, None] * gx[None, None, :]
    S = rr.reshape(-1, 1) * np.repeat(dirs, nt * len(gx), axis=0)
    f, y = graph_f(S)
    grad = imp.gradient(y)
    denom = grad @ nu
    gs = -(grad @ E.T) / denom[:, None]
    dens = np.sqrt(1.0 + np.sum(gs ** 2, axis=1)).reshape(rr.shape)
    lam = 1.0
    if weight is not WeightKind.ONE:
        nuy = grad / np.linalg.norm(grad, axis=1, keepdims=True)
        lam = _pair_weight(weight, x0[None, :], nu[None, :], y, nuy,
                           custom=custom).reshape(rr.shape)
    integ = (dens * lam * rr ** (m - 1)) @ gw
    return dirw @ (integ * rho)


def _chord(patch, u0, x0, dirs, rho):
    pts = u0[None, :] + rho[:, None] * dirs
    y = patch.chart(pts)
    return np.linalg.norm(y - x0[None, :], axis=1)


# ---------------------------------------------------------------------------
# profile construction
# ---------------------------------------------------------------------------

def distance_profile(spec: ManifoldSpec, weight: WeightKind = WeightKind.ONE,
                     delta: float | None = None, fit_degree: int | None = None,
                     order: int | None = None, workers: int | None = None,
                     geodesic: bool = False, custom_weight=None) -> DistanceProfile:
    """Weighted interpoint-distance distribution of a closed spec.

    delta defaults to 0.2 x estimated reach; the number of even coefficients
    defaults to m//2 + 3 (empirical data) or m//2 + 5 (closed-form data).
    """
    surf = spec.surface()
    if surf.kind == "polygon_knot":
        raise NumericError("polygonal knots use the exact edge-pair handler (polygon_beta)")
    if not surf.closed:
        raise NumericError("distance_profile needs a closed manifold")
    m = surf.m
    if weight is WeightKind.NU and surf.codim != 1:
        raise NumericError(
            "Grassmann-weighted profiles are implemented for hypersurfaces, where "
            "the weight reduces to <nu_x, nu_y>; for higher codimension use the "
            "pointwise manifold.nu_weight or a custom weight callback")
    round_params = _round_sphere_params(spec)
    if geodesic:
        if round_params is None or weight is not WeightKind.ONE:
            raise NumericError("geodesic mode is implemented for round spheres, weight one")
        return _geodesic_profile(spec, delta, fit_degree)
    if round_params is not None and weight is not WeightKind.CUSTOM:
        return _exact_profile(spec, weight, delta, fit_degree)
    return _empirical_profile(spec, weight, delta, fit_degree, order, workers,
                              custom=custom_weight)


def _exact_profile(spec, weight, delta, fit_degree) -> DistanceProfile:
    surf = spec.surface()
    m, r = _round_sphere_params(spec)
    vol = _round_chord_sphere_volume(m, r)
    lam = _round_weight_factor(weight, r)
    base = _round_chord_density(m, r)
    if delta is None:
        delta = 0.2 * r  # reach of the round sphere is r
    if delta >= 1.6 * r:
        raise ReachError(f"delta={delta} exceeds the sphere reach {r}")
    ncoef = fit_degree if fit_degree is not None else m // 2 + 5
    nbin = max(3 * ncoef, 18)
    edges = delta * np.arange(nbin + 1) / nbin
    masses = np.empty(nbin)
    for k in range(nbin):
        ts, ws = gauss_on(edges[k], edges[k + 1], 24)
        masses[k] = float(np.dot(ws, lam(ts) * base(ts)))
    coeffs, expo, resid, cond, errs = _fit_even_model(m, edges, masses, ncoef, delta)
    tail_edges, tw, twd, twd2 = _exact_tail_cells(m, r, vol, lam, base, delta)

    def exact_tail(t):
        return vol * lam(t) * base(t)

    from .oracles import sphere_volume
    o = sphere_volume(m - 1)

    def tail_quad(z, _phi0=math.asin(min(1.0, delta / (2.0 * r)))):
        # t = 2 r sin(phi): psi' dt = vol o Lambda (2r sin)^{m-1} cos^{m-1} 2r dphi
        ph, wp = gauss_on(_phi0, 0.5 * math.pi, 160)
        t = 2.0 * r * np.sin(ph)
        dens = vol * o * lam(t) * t ** (m - 1) * np.cos(ph) ** (m - 1) * 2.0 * r
        return complex(np.sum(wp * t ** complex(z) * dens))

    return DistanceProfile(m=m, vol=vol, delta=float(delta), diam=2.0 * r,
                           weight=str(weight.value), mode="exact", coeffs=coeffs,
                           fit_residual=resid, fit_condition=cond, coeff_errors=errs,
                           tail_edges=tail_edges, tail_w=tw, tail_wd=twd,
                           tail_wd2=twd2, kind=surf.kind, exact_tail=exact_tail,
                           tail_quad=tail_quad, metadata={"r": r})


def _round_chord_sphere_volume(m, r) -> float:
    from .oracles import sphere_volume
    return sphere_volume(m) * r ** m


def _exact_tail_cells(m, r, vol, lam, base, delta, ncell: int = 2048):
    """Cell moments of the chord density, integrated in phi where t = 2r sin(phi)
    so the (1 - t^2/4r^2) endpoint factor stays smooth."""
    from .oracles import sphere_volume
    o = sphere_volume(m - 1)
    edges = delta + (2.0 * r - delta) * np.arange(ncell + 1) / ncell
    w = np.empty(ncell)
    wd = np.empty(ncell)
    wd2 = np.empty(ncell)
    phis = np.arcsin(np.clip(edges / (2.0 * r), 0.0, 1.0))
    for k in range(ncell):
        ph, wp = gauss_on(phis[k], phis[k + 1], 6)
        t = 2.0 * r * np.sin(ph)
        dens_dphi = vol * o * lam(t) * t ** (m - 1) * np.cos(ph) ** (m - 1) * 2.0 * r
        w[k] = float(np.dot(wp, dens_dphi))
        wd[k] = float(np.dot(wp, dens_dphi * t))
        wd2[k] = float(np.dot(wp, dens_dphi * t * t))
    return edges, w, wd, wd2


def _geodesic_profile(spec, delta, fit_degree) -> DistanceProfile:
    """Geodesic-distance profile on the round sphere: d = r * arccos(<x,y>/r^2)."""
    surf = spec.surface()
    m, r = _round_sphere_params(spec)
    from .oracles import sphere_volume
    vol = sphere_volume(m) * r ** m
    o = sphere_volume(m - 1)

    def density(t):
        t = np.asarray(t, dtype=float)
        return vol * o * r ** (m - 1) * np.sin(t / r) ** (m - 1)

    if delta is None:
        delta = 0.2 * math.pi * r
    ncoef = fit_degree if fit_degree is not None else m // 2 + 5
    nbin = max(3 * ncoef, 18)
    edges = delta * np.arange(nbin + 1) / nbin
    masses = np.empty(nbin)
    for k in range(nbin):
        ts, ws = gauss_on(edges[k], edges[k + 1], 24)
        masses[k] = float(np.dot(ws, density(ts))) / vol
    coeffs, expo, resid, cond, errs = _fit_even_model(m, edges, masses, ncoef, delta)
    diam = math.pi * r
    ncell = 2048
    tedges = delta + (diam - delta) * np.arange(ncell + 1) / ncell
    tw = np.empty(ncell)
    twd = np.empty(ncell)
    twd2 = np.empty(ncell)
    for k in range(ncell):
        ts, ws = gauss_on(tedges[k], tedges[k + 1], 6)
        dens = density(ts)
        tw[k] = float(np.dot(ws, dens))
        twd[k] = float(np.dot(ws, dens * ts))
        twd2[k] = float(np.dot(ws, dens * ts * ts))
    def tail_quad(z, _d0=float(delta), _d1=diam):
        ph, wp = gauss_on(_d0, _d1, 200)
        return complex(np.sum(wp * ph ** complex(z) * density(ph)))

    return DistanceProfile(m=m, vol=vol, delta=float(delta), diam=diam,
                           weight="one-geodesic", mode="exact", coeffs=coeffs,
                           fit_residual=resid, fit_condition=cond, coeff_errors=errs,
                           tail_edges=tedges, tail_w=tw, tail_wd=twd, tail_wd2=twd2,
                           kind=surf.kind + "-geodesic",
                           exact_tail=lambda t: density(t), tail_quad=tail_quad,
                           metadata={"r": r})


def _empirical_profile(spec, weight, delta, fit_degree, order, workers,
                       custom=None) -> DistanceProfile:
    surf = spec.surface()
    m = surf.m
    if order is None:
        order = {1: 512, 2: 64, 3: 24, 4: 12}.get(m, 12)
    reach = reach_estimate(spec)
    if delta is None:
        delta = 0.2 * reach
    if delta > 0.8 * reach:
        raise ReachError(f"delta={delta:.4g} above 0.8 x estimated reach {reach:.4g}")
    nodes = sample_quadrature(spec, order, with_normals=_needs_normals(weight) or None)
    vol = nodes.total_weight
    diam_ub = _bbox_diameter(nodes.x)
    ncell = 4096
    edges = delta + (diam_ub - delta) * np.arange(ncell + 1) / ncell
    if m == 1:
        tw, twd, twd2 = _tail_moments_curve(surf, weight, delta, edges, order, custom)
    else:
        tw, twd, twd2 = _tail_moments(nodes.x, nodes.w, nodes.nu, weight, delta, edges,
                                      workers=workers, custom=custom)
    ncoef = fit_degree if fit_degree is not None else m // 2 + 3
    nbin = max(3 * ncoef + 4, 16)
    t_grid = delta * np.arange(1, nbin + 1) / nbin
    order_sub = max(6, order // 2)
    n_ang = 32
    masses = _near_masses(spec, weight, delta, t_grid, order_sub, n_ang, custom=custom) / vol
    bin_edges = np.concatenate([[0.0], t_grid])
    coeffs, expo, resid, cond, errs = _fit_even_model(m, bin_edges, masses, ncoef, delta)
    scale = max(abs(coeffs[0]), np.max(np.abs(coeffs)) * 1e-6, 1e-300)
    rel_resid = resid / scale
    prof = DistanceProfile(m=m, vol=vol, delta=float(delta), diam=diam_ub,
                           weight=str(weight.value), mode="empirical", coeffs=coeffs,
                           fit_residual=resid, fit_condition=cond, coeff_errors=errs,
                           tail_edges=edges, tail_w=tw, tail_wd=twd, tail_wd2=twd2,
                           kind=surf.kind, metadata={"order": order, "reach": reach})
    if weight is WeightKind.ONE and rel_resid > 0.05:
        raise ReachError(
            f"small-t fit residual {rel_resid:.3g} too large; delta={delta:.4g} "
            f"likely exceeds the usable reach (estimate {reach:.4g})")
    return prof


def evenness_diagnostic(spec: ManifoldSpec, profile: DistanceProfile,
                        weight: WeightKind = WeightKind.ONE) -> float:
    """Refit the small-t model allowing odd powers; return max |odd| / abar_0.

    Exact-mode profiles refit their closed-form bins; empirical profiles are
    rebuilt at the stored order.
    """
    m = profile.m
    ncoef = len(profile.coeffs)
    if profile.mode == "exact":
        r = profile.metadata["r"]
        lam = _round_weight_factor(WeightKind(profile.weight), r) \
            if profile.weight in [w.value for w in WeightKind] else (lambda t: 1.0)
        base = _round_chord_density(m, r)
        nbin = max(3 * ncoef, 18)
        edges = profile.delta * np.arange(nbin + 1) / nbin
        masses = np.empty(nbin)
        for k in range(nbin):
            ts, ws = gauss_on(edges[k], edges[k + 1], 24)
            masses[k] = profile.vol * float(np.dot(ws, lam(ts) * base(ts)))
    else:
        nbin = max(3 * (2 * ncoef) + 4, 24)
        t_grid = profile.delta * np.arange(1, nbin + 1) / nbin
        masses = _near_masses(spec, weight, profile.delta, t_grid,
                              max(6, profile.metadata.get("order", 24) // 2), 32)
        edges = np.concatenate([[0.0], t_grid])
    coeffs, expo, *_ = _fit_even_model(m, edges, masses, 2 * ncoef - 1,
                                       profile.delta, allow_odd=True)
    odd = np.abs(coeffs[expo % 2 == 1]) * profile.delta ** expo[expo % 2 == 1].astype(float)
    return float(np.max(odd) / abs(coeffs[0]))


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _near_part(profile: DistanceProfile, z: complex) -> complex:
    total = 0.0 + 0.0j
    d = profile.delta
    for j, a in enumerate(profile.coeffs):
        p = z + profile.m + 2 * j
        total += a * d ** p / p
    return profile.vol * total


def _near_part_finite(profile: DistanceProfile, z0: float, skip_j: int) -> complex:
    """Near part at a pole with the singular term replaced by its finite part."""
    total = 0.0 + 0.0j
    d = profile.delta
    for j, a in enumerate(profile.coeffs):
        if j == skip_j:
            total += a * math.log(d)
            continue
        p = z0 + profile.m + 2 * j
        total += a * d ** p / p
    return profile.vol * total


def _tail_part(profile: DistanceProfile, z: complex) -> complex:
    if profile.tail_quad is not None:
        return complex(profile.tail_quad(z))
    if profile.exact_tail is not None:
        total = 0.0 + 0.0j
        edges = np.linspace(profile.delta, profile.diam, 17)
        for k in range(16):
            ts, ws = gauss_on(edges[k], edges[k + 1], 40)
            total += np.sum(ws * ts ** z * profile.exact_tail(ts))
        return complex(total)
    w, wd, wd2 = profile.tail_w, profile.tail_wd, profile.tail_wd2
    mid = 0.5 * (profile.tail_edges[:-1] + profile.tail_edges[1:])
    mask = w != 0.0
    mid = np.where(mask, np.divide(wd, w, out=mid.copy(), where=mask), mid)
    f = mid ** z
    f1 = z * mid ** (z - 1)
    f2 = z * (z - 1) * mid ** (z - 2)
    # second-order expansion around the cell's weighted mean distance
    m2 = wd2 - 2.0 * mid * wd + mid ** 2 * w
    return complex(np.sum(f * w + f1 * (wd - mid * w) + 0.5 * f2 * m2))


def beta_eval(profile: DistanceProfile, z, method: str = "profile") -> BetaEvaluation:
    """Evaluate the continued energy function at z.

    Inside the pole guard the returned value is the Hadamard finite part and
    the evaluation is flagged ``at_pole`` with the residue attached.
    """
    zc = complex(z)
    pole, dist = profile.nearest_pole(zc)
    if dist < POLE_GUARD:
        j = int(round((-pole - profile.m) / 2))
        res = profile.vol * float(profile.coeffs[j])
        fp = _near_part_finite(profile, pole, j) + _tail_part(profile, pole)
        return BetaEvaluation(z=zc, value=fp, nearest_pole=pole, pole_distance=dist,
                              residue=res, method=method, at_pole=True, finite_part=fp)
    val = _near_part(profile, zc) + _tail_part(profile, zc)
    j = int(round((-pole - profile.m) / 2))
    res = profile.vol * float(profile.coeffs[j]) if 0 <= j < len(profile.coeffs) else 0.0
    return BetaEvaluation(z=zc, value=val, nearest_pole=pole, pole_distance=dist,
                          residue=res, method=method)


def residue_from_profile(profile: DistanceProfile, pole: float) -> tuple[float, float]:
    """Residue at pole z0 = -m-2j from the fitted model: vol * abar_{2j}.

    Returns (value, error estimate from the fit covariance).
    """
    j = (-float(pole) - profile.m) / 2.0
    if abs(j - round(j)) > 1e-9 or round(j) < 0:
        return 0.0, 0.0
    j = int(round(j))
    if j >= len(profile.coeffs):
        raise NumericError(f"pole {pole} beyond fitted degree (J={len(profile.coeffs) - 1})")
    err = profile.vol * float(profile.coeff_errors[j]) if j < len(profile.coeff_errors) else math.nan
    return profile.vol * float(profile.coeffs[j]), err


def hadamard_finite_part(profile: DistanceProfile, z0) -> complex:
    """lim_{w->z0} (B(w) - Res/(w - z0)); equals B(z0) away from the poles."""
    zc = complex(z0)
    pole, dist = profile.nearest_pole(zc)
    if dist >= POLE_GUARD:
        return beta_eval(profile, zc).value
    j = int(round((-pole - profile.m) / 2))
    return _near_part_finite(profile, pole, j) + _tail_part(profile, pole)


# ---------------------------------------------------------------------------
# compact bodies: boundary reduction and relative energy
# ---------------------------------------------------------------------------

def body_profile(body: ManifoldSpec, **kw) -> DistanceProfile:
    """nu-weighted profile of the boundary, the ingredient of the body energy."""
    if not body.is_body:
        raise NumericError("body_profile needs a body spec")
    return distance_profile(body.boundary, weight=WeightKind.NORMAL_PRODUCT, **kw)


def body_beta(body: ManifoldSpec, z, profile: DistanceProfile | None = None,
              **kw) -> BetaEvaluation:
    """Energy function of a compact body via the boundary reduction

        B_Omega(z) = -1/((z+2)(z+n)) B_{boundary, nu}(z+2).

    Near z = -2 the removable singularity is evaluated as a difference
    quotient (the nu-weighted boundary energy vanishes at 0); at z = -n the
    simple pole is returned as residue plus finite part.
    """
    zc = complex(z)
    n = body.n
    prof = profile if profile is not None else body_profile(body, **kw)

    def bnu(w):
        return beta_eval(prof, w).value

    if abs(zc + n) < POLE_GUARD:
        # c(z) = -1/((z+2)(z+n)) has the simple pole; Laurent-expand c * Bnu
        w0 = complex(-n + 2)
        h = 1e-4
        b0 = bnu(w0)
        b1 = (bnu(w0 + h) - bnu(w0 - h)) / (2 * h)
        if n == 2:
            # the two factors coincide; Bnu(0) = 0 makes the pole simple anyway
            b2 = (bnu(w0 + h) - 2.0 * b0 + bnu(w0 - h)) / h ** 2
            res, fp = -b1, -0.5 * b2
        else:
            res = -b0 / w0.real
            fp = -b1 / w0.real + b0 / w0.real ** 2
        return BetaEvaluation(z=zc, value=fp, nearest_pole=float(-n),
                              pole_distance=abs(zc + n), residue=float(res.real),
                              method="boundary-reduction", at_pole=True, finite_part=fp)
    inner = beta_eval(prof, zc + 2)
    if inner.at_pole:
        c = -1.0 / ((zc + 2) * (zc + n))
        dc = (2 * zc + 2 + n) / ((zc + 2) ** 2 * (zc + n) ** 2)
        res = c * inner.residue
        fp = c * inner.finite_part + dc * inner.residue
        return BetaEvaluation(z=zc, value=fp, nearest_pole=inner.nearest_pole - 2,
                              pole_distance=inner.pole_distance, residue=float(res.real),
                              method="boundary-reduction", at_pole=True, finite_part=fp)
    if abs(zc + 2) < POLE_GUARD:
        b0 = bnu(0.0)
        if abs(zc + 2) < 1e-9:
            h = 1e-4
            slope = (bnu(2 * h) - bnu(-2 * h)) / (4 * h)
            val = -slope / (zc + n)
        else:
            val = -(bnu(zc + 2) - b0) / ((zc + 2) * (zc + n))
        pole, dist = _body_pole_distance(prof, n, zc)
        return BetaEvaluation(z=zc, value=val, nearest_pole=pole, pole_distance=dist,
                              residue=0.0, method="boundary-reduction")
    val = -inner.value / ((zc + 2) * (zc + n))
    pole, dist = _body_pole_distance(prof, n, zc)
    j = int(round((-pole - n - 1) / 2))
    res = 0.0
    if abs(pole + n) < 1e-9:
        if n == 2:
            h = 1e-4
            res = float((-(bnu(h) - bnu(-h)) / (2 * h)).real)
        else:
            res = float((-bnu(-n + 2) / (-n + 2)).real)
    elif 0 <= j < len(prof.coeffs):
        res = float((-prof.vol * prof.coeffs[j] / ((pole + 2) * (pole + n))))
    return BetaEvaluation(z=zc, value=val, nearest_pole=pole, pole_distance=dist,
                          residue=res, method="boundary-reduction")


def _body_pole_distance(prof: DistanceProfile, n: int, zc: complex):
    poles = [-float(n)] + [-(n + 1.0 + 2 * j) for j in range(len(prof.coeffs))]
    d = [abs(zc - p) for p in poles]
    i = int(np.argmin(d))
    return poles[i], d[i]


def body_residue_from_profile(body: ManifoldSpec, pole: float,
                              profile: DistanceProfile | None = None, **kw) -> float:
    """Residue of the body energy function at -n or -n-1-2j via the boundary profile."""
    n = body.n
    prof = profile if profile is not None else body_profile(body, **kw)
    if abs(pole + n) < 1e-9:
        if n == 2:
            h = 1e-4
            return float((-(beta_eval(prof, h).value
                            - beta_eval(prof, -h).value) / (2 * h)).real)
        return float((-beta_eval(prof, -n + 2).value / (-n + 2)).real)
    j = (-float(pole) - n - 1) / 2.0
    if abs(j - round(j)) > 1e-9 or round(j) < 0:
        return 0.0
    j = int(round(j))
    rin, _ = residue_from_profile(prof, -(n - 1) - 2 * j)
    return float(-rin / ((pole + 2) * (pole + n)))


def relative_profile(body: ManifoldSpec, **kw) -> DistanceProfile:
    return distance_profile(body.boundary, weight=WeightKind.REL_BOUNDARY, **kw)


def relative_beta(body: ManifoldSpec, z, profile: DistanceProfile | None = None,
                  **kw) -> BetaEvaluation:
    """Relative energy function B(z) = (1/(z+n)) int int |x-y|^z <y-x, nu_y>."""
    zc = complex(z)
    n = body.n
    prof = profile if profile is not None else relative_profile(body, **kw)
    if abs(zc + n) < POLE_GUARD:
        iv = beta_eval(prof, complex(-n))
        h = 1e-4
        di = (beta_eval(prof, complex(-n + h)).value
              - beta_eval(prof, complex(-n - h)).value) / (2 * h)
        return BetaEvaluation(z=zc, value=di, nearest_pole=float(-n),
                              pole_distance=abs(zc + n), residue=float(iv.value.real),
                              method="boundary-reduction", at_pole=True, finite_part=di)
    inner = beta_eval(prof, zc)
    if inner.at_pole:
        res = inner.residue / (inner.nearest_pole + n)
        fp = inner.finite_part / (inner.nearest_pole + n) - inner.residue / (
            inner.nearest_pole + n) ** 2
        return BetaEvaluation(z=zc, value=fp, nearest_pole=inner.nearest_pole,
                              pole_distance=inner.pole_distance, residue=float(res),
                              method="boundary-reduction", at_pole=True, finite_part=fp)
    val = inner.value / (zc + n)
    return BetaEvaluation(z=zc, value=val, nearest_pole=inner.nearest_pole,
                          pole_distance=inner.pole_distance,
                          residue=float(inner.residue / (inner.nearest_pole + n)),
                          method="boundary-reduction")


def relative_residue_from_profile(body: ManifoldSpec, pole: float,
                                  profile: DistanceProfile | None = None, **kw) -> float:
    n = body.n
    prof = profile if profile is not None else relative_profile(body, **kw)
    if abs(pole + n) < 1e-9:
        return float(beta_eval(prof, complex(-n)).value.real)
    rin, _ = residue_from_profile(prof, pole)
    return float(rin / (pole + n))


# ---------------------------------------------------------------------------
# direct double quadrature
# ---------------------------------------------------------------------------

def direct_double_quadrature(spec: ManifoldSpec, z, order: int = 64) -> complex:
    """The defining double integral evaluated without the profile split.

    Round circles and spheres use the chord substitution t = 2 r sin(phi/2),
    with the diagonal singularity absorbed into a Gauss-Jacobi weight, so the
    value is spectrally accurate for Re z > -m. Generic shapes fall back to
    the plain all-pairs quadrature sum, whose diagonal error is O(order^-1);
    bodies reduce to the nu-weighted boundary integral first.
    """
    zc = complex(z)
    surf = spec.surface()
    if spec.is_body:
        inner = direct_double_quadrature_weighted(spec.boundary, zc + 2,
                                                  WeightKind.NORMAL_PRODUCT, order)
        return -inner / ((zc + 2) * (zc + spec.n))
    return direct_double_quadrature_weighted(surf, zc, WeightKind.ONE, order)


def direct_double_quadrature_weighted(spec: ManifoldSpec, z, weight: WeightKind,
                                      order: int = 64) -> complex:
    zc = complex(z)
    surf = spec.surface()
    params = _round_sphere_params(surf)
    if params is not None and weight is not WeightKind.CUSTOM:
        m, r = params
        if zc.real <= -m:
            raise NumericError("direct quadrature converges only for Re z > -m")
        lam = _round_weight_factor(weight, r)
        vol = _round_chord_sphere_volume(m, r)
        # I(z) = int_0^1 (2 r s)^(z+m-1) Lambda(2 r s) o_{m-1} (1-s^2)^((m-2)/2) 2 r ds
        alpha = zc.real + m - 1
        beta = (m - 2) / 2.0
        nodes, wts = roots_jacobi(max(order, 48), beta, alpha)
        s = 0.5 * (nodes + 1.0)
        w = wts * 0.5 ** (alpha + beta + 1)
        t = 2.0 * r * s
        from .oracles import sphere_volume
        o = sphere_volume(m - 1)
        extra = s ** complex(0, zc.imag) if zc.imag else 1.0
        vals = lam(t) * (1.0 + s) ** beta * extra
        integ = np.sum(w * vals) * (2.0 * r) ** (zc + m) * o
        return complex(vol * integ)
    nodes = sample_quadrature(surf, order, with_normals=_needs_normals(weight) or None)
    x, wq, nus = nodes.x, nodes.w, nodes.nu
    d = np.sqrt(np.maximum(((x[:, None, :] - x[None, :, :]) ** 2).sum(axis=2), 0.0))
    lamm = _pair_weight(weight, x, nus, x, nus)
    np.fill_diagonal(d, 1.0)
    vals = d ** zc * lamm
    np.fill_diagonal(vals, 0.0)
    return complex(np.einsum("i,ij,j->", wq, vals, wq))


# ---------------------------------------------------------------------------
# polygonal knots: exact per-edge-pair continuation
# ---------------------------------------------------------------------------

def _polygon_edges(vertices):
    v = np.asarray(vertices, dtype=float)
    k = v.shape[0]
    starts = v
    vecs = np.roll(v, -1, axis=0) - v
    lens = np.linalg.norm(vecs, axis=1)
    return starts, vecs, lens, k


def _corner_phi_integrals(L1, L2, costh, z, nphi=200):
    """Continuation of int over [0,L1]x[0,L2] of (s^2+t^2-2 s t cos)^{z/2}.

    Polar split at the shared vertex: two triangles, each entire in z apart
    from the explicit 1/(z+2).
    """
    phi_star = math.atan2(L2, L1)
    total = 0.0 + 0.0j
    for (a, b, Lref, trig) in ((0.0, phi_star, L1, np.cos),
                               (phi_star, 0.5 * math.pi, L2, np.sin)):
        ph, wp = gauss_on(a, b, nphi)
        q = 1.0 - np.sin(2.0 * ph) * costh
        rmax = Lref / trig(ph)
        total += np.sum(wp * q ** (complex(z) / 2.0) * rmax ** (complex(z) + 2.0))
    return total / (complex(z) + 2.0)


def polygon_beta(vertices, z, order: int = 32) -> BetaEvaluation:
    """Energy function of a closed polygonal knot; poles only at -1 and -2.

    Self pairs and vertex-adjacent pairs are continued in closed form (polar
    split), distant pairs are entire and integrated by tensor Gauss rules.
    """
    zc = complex(z)
    starts, vecs, lens, k = _polygon_edges(vertices)
    res1, res2 = _polygon_residues_numeric(vertices)
    for pole, res in ((-1.0, res1), (-2.0, res2)):
        if abs(zc - pole) < POLE_GUARD:
            fp = _polygon_finite_part(vertices, pole, order)
            return BetaEvaluation(z=zc, value=fp, nearest_pole=pole,
                                  pole_distance=abs(zc - pole), residue=res,
                                  method="profile", at_pole=True, finite_part=fp)
    total = 0.0 + 0.0j
    # self pairs
    for L in lens:
        total += 2.0 * L ** (zc + 2.0) / ((zc + 1.0) * (zc + 2.0))
    gx, gw = gauss_rule(order)
    s01 = 0.5 * (gx + 1.0)
    w01 = 0.5 * gw
    for i in range(k):
        for j in range(i + 1, k):
            if j == i + 1 or (i == 0 and j == k - 1):
                # adjacent: shared vertex is the end of edge i / start of j (cyclic)
                if j == i + 1:
                    shared = starts[j]
                    d1, d2 = -vecs[i], vecs[j]
                else:
                    shared = starts[0]
                    d1, d2 = vecs[0], -vecs[j]
                L1, L2 = np.linalg.norm(d1), np.linalg.norm(d2)
                costh = float(np.dot(d1, d2) / (L1 * L2))
                total += 2.0 * _corner_phi_integrals(L1, L2, costh, zc)
            else:
                p = starts[i][None, :] + s01[:, None] * vecs[i][None, :]
                q = starts[j][None, :] + s01[:, None] * vecs[j][None, :]
                d = np.linalg.norm(p[:, None, :] - q[None, :, :], axis=2)
                total += 2.0 * lens[i] * lens[j] * np.einsum(
                    "i,ij,j->", w01, d ** zc, w01)
    pole = -1.0 if abs(zc + 1) <= abs(zc + 2) else -2.0
    res = res1 if pole == -1.0 else res2
    return BetaEvaluation(z=zc, value=total, nearest_pole=pole,
                          pole_distance=abs(zc - pole), residue=res, method="profile")


def _polygon_residues_numeric(vertices) -> tuple[float, float]:
    """Residues at -1 and -2 from the exact edge-pair continuation."""
    starts, vecs, lens, k = _polygon_edges(vertices)
    r1 = float(2.0 * lens.sum())
    r2 = -2.0 * k
    for j in range(k):
        d1 = -vecs[j - 1]
        d2 = vecs[j]
        L1, L2 = np.linalg.norm(d1), np.linalg.norm(d2)
        costh = float(np.dot(d1, d2) / (L1 * L2))
        ph, wp = gauss_on(0.0, 0.5 * math.pi, 400)
        r2 += 2.0 * float(np.sum(wp / (1.0 - np.sin(2.0 * ph) * costh)))
    return r1, r2


def _polygon_finite_part(vertices, pole: float, order: int) -> complex:
    h = 2.5e-3
    res = _polygon_residues_numeric(vertices)[0 if pole == -1.0 else 1]
    vp = polygon_beta(vertices, pole + h, order).value - res / h
    vm = polygon_beta(vertices, pole - h, order).value + res / h
    return 0.5 * (vp + vm)


# ---------------------------------------------------------------------------
# pointwise relative residues at z = -n
# ---------------------------------------------------------------------------

def relative_local_residue_at_point(body: ManifoldSpec, u, which: str = "boundary",
                                    order: int = 48, delta: float | None = None,
                                    n_ang: int = 64) -> float:
    """Residue at z = -n of the pointwise relative energy.

    For 'boundary' the weight is <y - x0, nu_y> with x0 the fixed point and y
    integrated over the boundary; this is the constant o_{n-1}/2 on every
    smooth body. For 'local' the normal is frozen at the fixed point,
    <x0 - x, nu_{x0}>, which is not constant in general (an ellipse already
    shows the spread). The residue equals the convergent integral itself
    since the 1/(z + n) prefactor carries the pole.
    """
    bnd = body.boundary if body.is_body else body
    if bnd.codim != 1:
        raise NumericError("relative residues need a hypersurface boundary")
    patch = bnd.patches[0]
    m, n = bnd.m, bnd.m + 1
    u = np.asarray(u, dtype=float).reshape(-1)
    x0 = patch.chart(u[None, :])[0]
    nu0 = patch.normal(u[None, :])[0]
    if delta is None:
        # no small-t model is fitted here, so the cutoff only needs to stay
        # below the reach; a wide cutoff keeps the far-sum ramp resolved
        delta = 0.5 * reach_estimate(body)

    def lam(y, nuy):
        if which == "boundary":
            return np.einsum("nk,nk->n", y - x0[None, :], nuy)
        if which == "local":
            return (x0[None, :] - y) @ nu0
        raise NumericError(f"unknown localization {which!r}")

    # smooth partition of unity between the far pair sum and the local chart
    far_cut = _smooth_ramp(0.6 * delta, delta)
    nodes = sample_quadrature(bnd, order, with_normals=True)
    d = np.linalg.norm(nodes.x - x0[None, :], axis=1)
    sel = d >= 0.6 * delta
    far = float(np.sum(nodes.w[sel] * d[sel] ** (-n)
                       * lam(nodes.x[sel], nodes.nu[sel]) * far_cut(d[sel])))
    # near part: local polar quadrature; the weight kills the singularity
    dirs, dirw = _direction_set(m, n_ang)
    J = patch_jacobian(patch, u[None, :])[0]
    sig = np.linalg.norm(J @ dirs.T, axis=0)
    rho0 = delta / np.maximum(sig, 1e-12)
    rho_star = _cross_radii(patch, u, x0, dirs, rho0, np.array([delta]))[:, 0]
    gx, gw = gauss_rule(48)
    gx = 0.5 * (gx + 1.0)
    gw = 0.5 * gw
    rr = rho_star[:, None] * gx[None, :]
    flat = u[None, :] + rr.reshape(-1, 1) * np.repeat(dirs, len(gx), axis=0)
    from .manifold.quadrature import volume_element
    sgv = volume_element(patch, flat).reshape(rr.shape)
    y = patch.chart(flat)
    nuy = patch.normal(flat)
    dloc = np.linalg.norm(y - x0[None, :], axis=1).reshape(rr.shape)
    lamv = lam(y, nuy).reshape(rr.shape)
    integ = (sgv * lamv * np.where(dloc > 0, dloc, 1.0) ** (-n)
             * (1.0 - far_cut(dloc)) * rr ** (m - 1)) @ gw
    near = float(dirw @ (integ * rho_star))
    return far + near


def _smooth_ramp(a: float, b: float):
    """C-infinity ramp: 0 below a, 1 above b."""

    def f(s):
        out = np.zeros_like(s)
        pos = s > 0
        out[pos] = np.exp(-1.0 / np.maximum(s[pos], 1e-300))
        return out

    def ramp(d):
        s = (np.asarray(d, dtype=float) - a) / (b - a)
        s = np.clip(s, 0.0, 1.0)
        fa = f(s)
        fb = f(1.0 - s)
        return fa / (fa + fb + 1e-300)

    return ramp
