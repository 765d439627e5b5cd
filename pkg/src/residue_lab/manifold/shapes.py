"""Manifold and body descriptions plus the builtin shape catalogue.

A ``ManifoldSpec`` carries parametric patches (vectorized chart maps), an
optional polynomial implicit description used for exact curvature data, and
body/boundary structure. All other modules consume only this type.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .._util import ConfigError


@dataclass(frozen=True)
class Patch:
    """One parametric chart: ``chart`` maps (N, m) parameter rows to (N, n) points."""
    box: tuple[tuple[float, float], ...]
    chart: Callable[[np.ndarray], np.ndarray]
    periodic: tuple[bool, ...]
    label: str = "patch0"
    normal: Optional[Callable[[np.ndarray], np.ndarray]] = None  # hypersurfaces
    jacobian: Optional[Callable[[np.ndarray], np.ndarray]] = None  # (N, n, m)


@dataclass(frozen=True)
class ImplicitPoly:
    """Polynomial implicit description F(x) = 0 of a hypersurface, F < 0 inside.

    ``graph`` produces the exact Taylor series of the graph function over a
    tangent frame; ``gradient`` is the outward (un-normalized) normal field;
    ``value`` evaluates F itself (used for pointwise graph solves).
    """
    gradient: Callable[[np.ndarray], np.ndarray]
    graph: Callable[[np.ndarray, np.ndarray, np.ndarray, int], np.ndarray]
    value: Optional[Callable[[np.ndarray], np.ndarray]] = None


@dataclass(frozen=True)
class ManifoldSpec:
    kind: str
    m: int
    n: int
    patches: tuple[Patch, ...]
    params: dict = field(default_factory=dict)
    oriented: bool = True
    closed: bool = True
    is_body: bool = False
    implicit: Optional[ImplicitPoly] = None
    boundary: Optional["ManifoldSpec"] = None
    interior_point: Optional[tuple] = None

    def __post_init__(self):
        if self.m < 1 or self.n < self.m:
            raise ConfigError(f"bad dimensions m={self.m}, n={self.n}")
        if self.is_body and self.boundary is None and self.kind != "polygon_knot":
            raise ConfigError("a body spec needs a boundary spec")

    @property
    def codim(self) -> int:
        return self.n - self.m

    def surface(self) -> "ManifoldSpec":
        """The spec integration happens on: the boundary for bodies, self otherwise."""
        return self.boundary if self.is_body else self


# ---------------------------------------------------------------------------
# chart helpers
# ---------------------------------------------------------------------------

def _spherical_coords(angles: np.ndarray) -> np.ndarray:
    """Unit sphere S^m in R^(m+1); angles (N, m), first m-1 in [0, pi], last in [0, 2 pi).

    Coordinate layout matches the usual hyper-spherical chart with the last
    ambient coordinate equal to cos(theta_1).
    """
    ang = np.atleast_2d(angles)
    N, m = ang.shape
    out = np.empty((N, m + 1))
    sin_prod = np.ones(N)
    # build from the last ambient coordinate down
    for j in range(m):
        out[:, m - j] = sin_prod * np.cos(ang[:, j])
        sin_prod = sin_prod * np.sin(ang[:, j])
    out[:, 0] = sin_prod
    return out


def _spherical_jacobian(angles: np.ndarray) -> np.ndarray:
    """d(_spherical_coords)/d(angles): (N, m+1, m), product-rule exact."""
    ang = np.atleast_2d(angles)
    N, m = ang.shape
    sin, cos = np.sin(ang), np.cos(ang)
    J = np.zeros((N, m + 1, m))
    for k in range(m):
        for j in range(k, m):
            # coordinate m - j is prod_{l<j} sin(theta_l) * cos(theta_j)
            prod = np.ones(N)
            for l in range(j):
                prod = prod * (cos[:, l] if l == k else sin[:, l])
            if k < j:
                J[:, m - j, k] = prod * cos[:, j]
            else:
                J[:, m - j, k] = -prod * sin[:, j]
        prod = np.ones(N)
        for l in range(m):
            prod = prod * (cos[:, l] if l == k else sin[:, l])
        J[:, 0, k] = prod
    return J


def _sphere_box(m: int) -> tuple:
    return tuple([(0.0, math.pi)] * (m - 1) + [(0.0, 2.0 * math.pi)])


def _sphere_periodic(m: int) -> tuple:
    return tuple([False] * (m - 1) + [True])


def _diag_quadric_implicit(inv_sq: np.ndarray) -> ImplicitPoly:
    from . import series as _series
    Q = np.diag(inv_sq)

    def gradient(x):
        return 2.0 * np.atleast_2d(x) * inv_sq[None, :]

    def graph(p, U, nu, deg):
        return _series.quadric_graph(Q, p, U, nu, deg)

    def value(x):
        x = np.atleast_2d(x)
        return np.einsum("ni,i,ni->n", x, inv_sq, x) - 1.0

    return ImplicitPoly(gradient=gradient, graph=graph, value=value)


def _ellipsoid_like(kind: str, semiaxes, **extra) -> ManifoldSpec:
    semiaxes = tuple(float(a) for a in semiaxes)
    n = len(semiaxes)
    m = n - 1
    ax = np.asarray(semiaxes)

    def chart(u, _ax=ax):
        return _spherical_coords(u) * _ax[None, :]

    inv_sq = 1.0 / ax ** 2

    def normal(u, _inv=inv_sq, _chart=chart):
        g = _chart(u) * _inv[None, :]
        return g / np.linalg.norm(g, axis=1, keepdims=True)

    def jacobian(u, _ax=ax):
        return _spherical_jacobian(u) * _ax[None, :, None]

    patch = Patch(box=_sphere_box(m), chart=chart, periodic=_sphere_periodic(m),
                  label=f"{kind}-chart", normal=normal, jacobian=jacobian)
    return ManifoldSpec(kind=kind, m=m, n=n, patches=(patch,),
                        params={"semiaxes": semiaxes, **extra},
                        implicit=_diag_quadric_implicit(inv_sq))


# ---------------------------------------------------------------------------
# builtin shapes
# ---------------------------------------------------------------------------

def circle(r: float = 1.0) -> ManifoldSpec:
    r = float(r)

    def chart(u, _r=r):
        u = np.atleast_2d(u)
        return np.stack([_r * np.cos(u[:, 0]), _r * np.sin(u[:, 0])], axis=1)

    def normal(u, _r=r, _chart=chart):
        return _chart(u) / _r

    def jacobian(u, _r=r):
        u = np.atleast_2d(u)
        return np.stack([-_r * np.sin(u[:, 0]), _r * np.cos(u[:, 0])], axis=1)[:, :, None]

    patch = Patch(box=((0.0, 2.0 * math.pi),), chart=chart, periodic=(True,),
                  label="circle-chart", normal=normal, jacobian=jacobian)
    return ManifoldSpec(kind="circle", m=1, n=2, patches=(patch,), params={"r": r},
                        implicit=_diag_quadric_implicit(np.array([1 / r ** 2, 1 / r ** 2])))


def ellipse(a: float, b: float) -> ManifoldSpec:
    spec = _ellipsoid_like("ellipse", (float(a), float(b)))
    return replace(spec, params={"a": float(a), "b": float(b)})


def sphere(m: int, r: float = 1.0) -> ManifoldSpec:
    if m == 1:
        return circle(r)
    spec = _ellipsoid_like("sphere", (float(r),) * (m + 1))
    return replace(spec, params={"m": int(m), "r": float(r)})


def spheroid(a: float) -> ManifoldSpec:
    """The 4-dimensional a-hyper-spheroid x1^2+..+x4^2 + x5^2/a^2 = 1 in R^5."""
    spec = _ellipsoid_like("spheroid", (1.0, 1.0, 1.0, 1.0, float(a)))
    return replace(spec, params={"a": float(a)})


def ellipsoid(semiaxes) -> ManifoldSpec:
    return _ellipsoid_like("ellipsoid", semiaxes)


def torus(R: float = 2.0, r: float = 1.0) -> ManifoldSpec:
    if not R > r > 0:
        raise ConfigError("torus needs R > r > 0")
    R, r = float(R), float(r)

    def chart(u, _R=R, _r=r):
        u = np.atleast_2d(u)
        th, ph = u[:, 0], u[:, 1]
        w = _R + _r * np.cos(th)
        return np.stack([w * np.cos(ph), w * np.sin(ph), _r * np.sin(th)], axis=1)

    def normal(u, _R=R, _r=r):
        u = np.atleast_2d(u)
        th, ph = u[:, 0], u[:, 1]
        return np.stack([np.cos(th) * np.cos(ph), np.cos(th) * np.sin(ph),
                         np.sin(th)], axis=1)

    from . import series as _series

    def gradient(x, _R=R, _r=r):
        x = np.atleast_2d(x)
        s = (x ** 2).sum(axis=1) + _R ** 2 - _r ** 2
        g = 4.0 * s[:, None] * x
        g[:, 0] -= 8.0 * _R ** 2 * x[:, 0]
        g[:, 1] -= 8.0 * _R ** 2 * x[:, 1]
        return g

    def graph(p, U, nu, deg, _R=R, _r=r):
        return _series.torus_graph(_R, _r, p, U, nu, deg)

    def fvalue(x, _R=R, _r=r):
        x = np.atleast_2d(x)
        sq = (x ** 2).sum(axis=1) + _R ** 2 - _r ** 2
        return sq ** 2 - 4.0 * _R ** 2 * (x[:, 0] ** 2 + x[:, 1] ** 2)

    def jacobian(u, _R=R, _r=r):
        u = np.atleast_2d(u)
        th, ph = u[:, 0], u[:, 1]
        w = _R + _r * np.cos(th)
        J = np.zeros((len(u), 3, 2))
        J[:, 0, 0] = -_r * np.sin(th) * np.cos(ph)
        J[:, 1, 0] = -_r * np.sin(th) * np.sin(ph)
        J[:, 2, 0] = _r * np.cos(th)
        J[:, 0, 1] = -w * np.sin(ph)
        J[:, 1, 1] = w * np.cos(ph)
        return J

    patch = Patch(box=((0.0, 2.0 * math.pi), (0.0, 2.0 * math.pi)), chart=chart,
                  periodic=(True, True), label="torus-chart", normal=normal,
                  jacobian=jacobian)
    return ManifoldSpec(kind="torus", m=2, n=3, patches=(patch,),
                        params={"R": R, "r": r},
                        implicit=ImplicitPoly(gradient=gradient, graph=graph,
                                              value=fvalue))


def clifford_torus(r1: float = 1.0, r2: float = 1.0) -> ManifoldSpec:
    """Flat product torus S^1(r1) x S^1(r2) in R^4; codimension 2."""
    r1, r2 = float(r1), float(r2)

    def chart(u, _r1=r1, _r2=r2):
        u = np.atleast_2d(u)
        return np.stack([_r1 * np.cos(u[:, 0]), _r1 * np.sin(u[:, 0]),
                         _r2 * np.cos(u[:, 1]), _r2 * np.sin(u[:, 1])], axis=1)

    patch = Patch(box=((0.0, 2.0 * math.pi), (0.0, 2.0 * math.pi)), chart=chart,
                  periodic=(True, True), label="clifford-chart")
    return ManifoldSpec(kind="clifford_torus", m=2, n=4, patches=(patch,),
                        params={"r1": r1, "r2": r2})


def ball(n: int, r: float = 1.0) -> ManifoldSpec:
    bnd = sphere(n - 1, r)
    return ManifoldSpec(kind="ball", m=n, n=n, patches=bnd.patches,
                        params={"n": int(n), "r": float(r)}, is_body=True,
                        boundary=bnd, interior_point=(0.0,) * n)


def ellipsoid_body(semiaxes) -> ManifoldSpec:
    bnd = ellipsoid(semiaxes)
    n = len(tuple(semiaxes))
    return ManifoldSpec(kind="ellipsoid_body", m=n, n=n, patches=bnd.patches,
                        params={"semiaxes": tuple(float(a) for a in semiaxes)},
                        is_body=True, boundary=bnd, interior_point=(0.0,) * n)


def polygon_knot(vertices) -> ManifoldSpec:
    """Closed polygonal knot in R^3, represented exactly by its vertex list.

    No curvature frames exist for it; only the continuation and oracle paths
    accept this kind.
    """
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[1] != 3 or v.shape[0] < 3:
        raise ConfigError("polygon_knot needs >= 3 vertices in R^3")
    verts = tuple(map(tuple, v))

    def chart(u, _v=v):
        # arc-length chart over [0, L); piecewise linear
        u = np.atleast_2d(u)[:, 0]
        edges = np.roll(_v, -1, axis=0) - _v
        lens = np.linalg.norm(edges, axis=1)
        cum = np.concatenate([[0.0], np.cumsum(lens)])
        s = np.mod(u, cum[-1])
        idx = np.searchsorted(cum, s, side="right") - 1
        idx = np.clip(idx, 0, len(lens) - 1)
        t = (s - cum[idx]) / lens[idx]
        return _v[idx] + t[:, None] * edges[idx]

    total = float(np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1).sum())
    patch = Patch(box=((0.0, total),), chart=chart, periodic=(True,), label="polygon-chart")
    return ManifoldSpec(kind="polygon_knot", m=1, n=3, patches=(patch,),
                        params={"vertices": verts})


def scaled(spec: ManifoldSpec, c: float) -> ManifoldSpec:
    """The image c * M of a builtin shape under a homothety, as a fresh spec."""
    c = float(c)
    kind = spec.kind
    if kind == "circle":
        return circle(c * spec.params["r"])
    if kind == "sphere":
        return sphere(spec.params["m"], c * spec.params["r"])
    if kind in ("ellipse",):
        return ellipse(c * spec.params["a"], c * spec.params["b"])
    if kind in ("ellipsoid", "spheroid"):
        return ellipsoid(tuple(c * a for a in spec.params["semiaxes"]))
    if kind == "torus":
        return torus(c * spec.params["R"], c * spec.params["r"])
    if kind == "ball":
        return ball(spec.params["n"], c * spec.params["r"])
    if kind == "ellipsoid_body":
        return ellipsoid_body(tuple(c * a for a in spec.params["semiaxes"]))
    if kind == "polygon_knot":
        return polygon_knot([tuple(c * x for x in p) for p in spec.params["vertices"]])
    raise ConfigError(f"no scaling rule for kind {kind!r}")


def parallel_body(body: ManifoldSpec, eps: float) -> ManifoldSpec:
    """Outward eps-parallel body; boundary chart offset along the unit normal.

    Valid for |eps| below the reach of the boundary.
    """
    if not body.is_body:
        raise ConfigError("parallel_body needs a body spec")
    if body.kind == "ball":
        return ball(body.params["n"], body.params["r"] + eps)
    bnd = body.boundary
    eps = float(eps)

    def make_chart(p: Patch):
        def chart(u, _p=p, _eps=eps):
            from .frames import patch_normals
            x = _p.chart(u)
            nu = _p.normal(u) if _p.normal is not None else patch_normals(body, _p, u)
            return x + _eps * nu
        return chart

    patches = tuple(Patch(box=p.box, chart=make_chart(p), periodic=p.periodic,
                          label=p.label + f"+par{eps}") for p in bnd.patches)
    new_bnd = ManifoldSpec(kind="offset", m=bnd.m, n=bnd.n, patches=patches,
                           params={"base": bnd.kind, "eps": eps})
    return ManifoldSpec(kind="offset_body", m=body.m, n=body.n, patches=patches,
                        params={"base": body.kind, "eps": eps}, is_body=True,
                        boundary=new_bnd, interior_point=body.interior_point)


# ---------------------------------------------------------------------------
# text configuration
# ---------------------------------------------------------------------------

_BUILTINS = {
    "circle": (circle, ("r",)),
    "ellipse": (ellipse, ("a", "b")),
    "sphere": (sphere, ("m", "r")),
    "spheroid": (spheroid, ("a",)),
    "ellipsoid": (ellipsoid, ("semiaxes",)),
    "torus": (torus, ("R", "r")),
    "clifford_torus": (clifford_torus, ("r1", "r2")),
    "ball": (ball, ("n", "r")),
    "ellipsoid_body": (ellipsoid_body, ("semiaxes",)),
    "polygon_knot": (polygon_knot, ("vertices",)),
}


def from_config(doc) -> ManifoldSpec:
    """Build a spec from a JSON-compatible mapping: {kind, params, orientation?}."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    if not isinstance(doc, dict):
        raise ConfigError("shape config must be a mapping")
    unknown = set(doc) - {"kind", "params", "orientation", "patches"}
    if unknown:
        raise ConfigError(f"unknown shape config keys: {sorted(unknown)}")
    kind = doc.get("kind")
    if kind not in _BUILTINS:
        raise ConfigError(f"unknown shape kind {kind!r}; valid: {sorted(_BUILTINS)}")
    fn, argnames = _BUILTINS[kind]
    params = dict(doc.get("params", {}))
    bad = set(params) - set(argnames)
    if bad:
        raise ConfigError(f"unknown params for {kind}: {sorted(bad)}")
    if doc.get("orientation", "outward") != "outward":
        raise ConfigError("only outward orientation is supported")
    args = [params[a] for a in argnames if a in params]
    return fn(*args)


def load_config(path: str) -> ManifoldSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return from_config(json.load(fh))
