"""Truncated multivariate Taylor series and exact graph expansions.

A series in m variables truncated at total degree ``deg`` is stored as a
dense coefficient array of shape (deg+1,)*m indexed by multi-degree; entries
with total degree above ``deg`` are kept at zero. This is enough to extract
second, third and fourth order graph data of implicitly-defined polynomial
hypersurfaces (quadrics, tori) without any finite differencing.
"""

from __future__ import annotations

import math

import numpy as np


def zero(m: int, deg: int) -> np.ndarray:
    return np.zeros((deg + 1,) * m)


def const(m: int, deg: int, value: float) -> np.ndarray:
    out = zero(m, deg)
    out[(0,) * m] = value
    return out


def linear(m: int, deg: int, coeffs) -> np.ndarray:
    out = zero(m, deg)
    for i, c in enumerate(coeffs):
        idx = [0] * m
        idx[i] = 1
        out[tuple(idx)] = c
    return out


def _total_degree_mask(m: int, deg: int) -> np.ndarray:
    grids = np.indices((deg + 1,) * m)
    return grids.sum(axis=0) <= deg


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Truncated product; quadratic in the number of nonzero entries of ``a``."""
    deg = a.shape[0] - 1
    m = a.ndim
    out = np.zeros_like(a)
    nz = np.argwhere(a != 0.0)
    for idx in nz:
        val = a[tuple(idx)]
        if sum(idx) > deg:
            continue
        src = tuple(slice(0, deg + 1 - k) for k in idx)
        dst = tuple(slice(k, deg + 1) for k in idx)
        out[dst] += val * b[src]
    mask = _total_degree_mask(m, deg)
    out[~mask] = 0.0
    return out


def powers(a: np.ndarray, max_pow: int) -> list[np.ndarray]:
    """[a^0, a^1, ..., a^max_pow] truncated."""
    m = a.ndim
    deg = a.shape[0] - 1
    out = [const(m, deg, 1.0)]
    for _ in range(max_pow):
        out.append(mul(out[-1], a))
    return out


def inverse(a: np.ndarray) -> np.ndarray:
    """1/a for a series with nonzero constant term."""
    m = a.ndim
    deg = a.shape[0] - 1
    a0 = a[(0,) * m]
    if a0 == 0.0:
        raise ZeroDivisionError("series has no constant term")
    ahat = a / a0
    ahat[(0,) * m] = 0.0
    acc = const(m, deg, 1.0)
    term = const(m, deg, 1.0)
    for _ in range(deg):
        term = mul(term, -ahat)
        acc += term
    return acc / a0


def derivative_tensor(f: np.ndarray, order: int) -> np.ndarray:
    """Symmetric tensor of order-``order`` partial derivatives of f at 0."""
    m = f.ndim
    shape = (m,) * order
    out = np.zeros(shape)
    for idx in np.ndindex(shape):
        alpha = [0] * m
        for i in idx:
            alpha[i] += 1
        fact = 1.0
        for a in alpha:
            fact *= math.factorial(a)
        out[idx] = f[tuple(alpha)] * fact
    return out


def quadric_graph(Q: np.ndarray, p: np.ndarray, U: np.ndarray, nu: np.ndarray,
                  deg: int = 4) -> np.ndarray:
    """Graph series of the quadric {x^T Q x = 1} over its tangent plane at p.

    x(u) = p + U^T u + f(u) nu with f(0) = 0, grad f(0) = 0. Solves
    alpha f^2 + 2 beta(u) f + gamma(u) = 0 by fixed-point iteration in the
    truncated series ring; exact to the stated degree.
    """
    m = U.shape[0]
    alpha = float(nu @ Q @ nu)
    beta0 = float(p @ Q @ nu)
    if abs(beta0) < 1e-14:
        raise ValueError("normal direction tangent to the quadric pencil")
    beta = const(m, deg, beta0) + linear(m, deg, U @ Q @ nu)
    gamma = linear(m, deg, 2.0 * (U @ Q @ p))
    G2 = U @ Q @ U.T
    for i in range(m):
        for j in range(m):
            idx = [0] * m
            idx[i] += 1
            idx[j] += 1
            gamma[tuple(idx)] += G2[i, j]
    inv2b = inverse(2.0 * beta)
    f = zero(m, deg)
    for _ in range(deg):
        f = mul(-(gamma + alpha * mul(f, f)), inv2b)
    return f


def torus_graph(R: float, r: float, p: np.ndarray, U: np.ndarray, nu: np.ndarray,
                deg: int = 4) -> np.ndarray:
    """Graph series of the torus {(|x|^2 + R^2 - r^2)^2 = 4 R^2 (x1^2 + x2^2)}.

    Series Newton on the quartic; the axis of revolution is x3.
    """
    m = U.shape[0]

    def F_and_dF(f):
        # coordinate series x_i(u) = p_i + (U^T u)_i + f nu_i
        X = [const(m, deg, p[i]) + linear(m, deg, U[:, i]) + nu[i] * f
             for i in range(3)]
        n2 = sum(mul(x, x) for x in X)
        s = n2 + const(m, deg, R * R - r * r)
        F = mul(s, s) - 4.0 * R * R * (mul(X[0], X[0]) + mul(X[1], X[1]))
        # dF/df = <grad F, nu> = 4 s <x, nu> - 8 R^2 (x1 nu1 + x2 nu2)
        xdotnu = sum(nu[i] * X[i] for i in range(3))
        dF = 4.0 * mul(s, xdotnu) - 8.0 * R * R * (nu[0] * X[0] + nu[1] * X[1])
        return F, dF

    f = zero(m, deg)
    for _ in range(5):
        F, dF = F_and_dF(f)
        f = f - mul(F, inverse(dF))
    return f
