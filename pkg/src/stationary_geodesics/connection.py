"""Closed-form Levi-Civita connection and Hessian of a stationary metric.

Vectors ``V, W`` passed to the ``conn_*`` functions are extended to M0 as
fields with constant chart components, so ``nabla^R_V W = Gamma(V, W)`` and the
results are the Christoffel contractions of the full metric.
"""
from __future__ import annotations

import numpy as np

from .errors import DomainError
from .metric import (
    LocalGeometry,
    ScalarField,
    SpacetimeVector,
    StationaryMetric,
    christoffel_from_derivatives,
    local_geometry,
    assemble_metric,
)


def _vec(v, dim):
    v = np.asarray(v, dtype=float)
    if v.shape != (dim,):
        raise ValueError(f"vector has shape {v.shape}, expected ({dim},)")
    return v


def delta_derivative_parts(metric: StationaryMetric, x, V, W):
    """Return ``(Sym nabla^R delta(V, W), rot delta(V, W))``.

    ``rot delta = 2 Sk nabla^R delta`` so ``rot(V, W) = nabla delta(V, W) - nabla delta(W, V)``.
    """
    geo = local_geometry(metric, x)
    V, W = _vec(V, metric.dim), _vec(W, metric.dim)
    return float(V @ geo.sym @ W), float(V @ geo.rot @ W)


def _dt_dt(geo: LocalGeometry) -> SpacetimeVector:
    c = 0.5 * geo.Lam * float(geo.delta_flat @ geo.grad_beta)
    return SpacetimeVector(-c, c * geo.delta + 0.5 * geo.grad_beta)


def _spatial(geo: LocalGeometry, V, W) -> SpacetimeVector:
    sym = float(V @ geo.sym @ W)
    return SpacetimeVector(geo.Lam * sym, geo.christoffel_contract(V, W) - geo.Lam * sym * geo.delta)


def _mixed(geo: LocalGeometry, V) -> SpacetimeVector:
    # 2 nabla_V d_t, grouped exactly as the closed form:
    # -Lam c d_t + Lam c delta + nabla_V delta - <nabla_(.) delta, V>^sharp,
    # c = V(beta) + <delta, nabla_V delta> - <nabla_delta delta, V>
    N = geo.nabla_delta
    c = float(geo.dbeta @ V) + float(V @ N @ geo.delta) - float(geo.delta @ N @ V)
    twice = geo.Lam * c * geo.delta + geo.cov_delta @ V - geo.sharp(N @ V)
    return SpacetimeVector(-0.5 * geo.Lam * c, 0.5 * twice)


def conn_dt_dt(metric: StationaryMetric, x) -> SpacetimeVector:
    """``nabla_{d_t} d_t``."""
    return _dt_dt(local_geometry(metric, x))


def conn_spatial(metric: StationaryMetric, x, V, W) -> SpacetimeVector:
    """``nabla_V W`` for lifts of the spatial fields ``V, W``."""
    geo = local_geometry(metric, x)
    return _spatial(geo, _vec(V, metric.dim), _vec(W, metric.dim))


def conn_mixed(metric: StationaryMetric, x, V) -> SpacetimeVector:
    """``nabla_V d_t = nabla_{d_t} V`` for the lift of a spatial field ``V``."""
    geo = local_geometry(metric, x)
    return _mixed(geo, _vec(V, metric.dim))


def conn_mixed_regrouped(metric: StationaryMetric, x, V) -> SpacetimeVector:
    """Same quantity written through ``rot delta``.

    ``2 nabla_V d_t = -Lam (V(beta) + rot(V, delta)) (d_t - delta) + rot(V, .)^sharp``.
    Kept separate from :func:`conn_mixed` so the two groupings can be compared.
    """
    geo = local_geometry(metric, x)
    V = _vec(V, metric.dim)
    c = float(geo.dbeta @ V) + float(V @ geo.rot @ geo.delta)
    twice_v = geo.Lam * c * geo.delta + geo.sharp(V @ geo.rot)
    return SpacetimeVector(-0.5 * geo.Lam * c, 0.5 * twice_v)


def _hessian(geo: LocalGeometry, field: ScalarField, vtilde: SpacetimeVector) -> float:
    x = geo.x
    dphi = np.asarray(field.dphi(x), dtype=float)
    d2phi = np.asarray(field.d2phi(x), dtype=float)
    tp, v = vtilde.t_part, vtilde.v_part
    hess_r = float(v @ d2phi @ v) - float(dphi @ geo.christoffel_contract(v, v))
    delta_phi = float(dphi @ geo.delta)
    grad_phi = geo.ginv @ dphi
    bracket = (
        tp * float(geo.dbeta @ v)
        + 0.5 * tp**2 * float(geo.dbeta @ geo.delta)
        - float(v @ geo.sym @ v)
        + tp * float(v @ geo.rot @ geo.delta)
    )
    return (
        hess_r
        - geo.Lam * bracket * delta_phi
        + tp * float(grad_phi @ geo.rot @ v)
        - 0.5 * tp**2 * float(dphi @ geo.grad_beta)
    )


def hessian_phi(metric: StationaryMetric, field: ScalarField, x, vtilde: SpacetimeVector) -> float:
    """``Hess phi [vtilde, vtilde]`` for a t-independent function ``phi``."""
    geo = local_geometry(metric, x)
    _vec(vtilde.v_part, metric.dim)
    return _hessian(geo, field, vtilde)


def christoffel_closed_form(metric: StationaryMetric, x) -> np.ndarray:
    """Full-metric symbols ``Gamma[k, i, j]`` (index 0 = t) assembled from the conn_* formulas."""
    geo = local_geometry(metric, x)
    n = metric.dim
    out = np.zeros((n + 1, n + 1, n + 1))
    out[:, 0, 0] = _dt_dt(geo).as_array()
    eye = np.eye(n)
    for i in range(n):
        mixed = _mixed(geo, eye[i]).as_array()
        out[:, i + 1, 0] = mixed
        out[:, 0, i + 1] = mixed
        for j in range(i, n):
            s = _spatial(geo, eye[i], eye[j]).as_array()
            out[:, i + 1, j + 1] = s
            out[:, j + 1, i + 1] = s
    return out


def fd_christoffel(metric: StationaryMetric, x, step: float = 1e-4) -> np.ndarray:
    """Christoffel symbols of the full metric from central differences of :func:`assemble_metric`.

    Independent of the closed-form connection: only the assembled matrix is
    differentiated and the inverse comes from a generic dense solve.  Truncation
    error is O(step**2).
    """
    x = np.asarray(x, dtype=float)
    n = metric.dim
    G = assemble_metric(metric, x)[0]
    dG = np.zeros((n + 1, n + 1, n + 1))
    for k in range(n):
        e = np.zeros(n)
        e[k] = step
        try:
            Gp = assemble_metric(metric, x + e)[0]
            Gm = assemble_metric(metric, x - e)[0]
        except DomainError as exc:
            raise DomainError(f"finite-difference stencil leaves the domain at x = {x.tolist()}") from exc
        dG[k + 1] = (Gp - Gm) / (2 * step)
    return christoffel_from_derivatives(np.linalg.solve(G, np.eye(n + 1)), dG)


def relative_error(a, b) -> float:
    """Max-abs difference scaled by the largest entry of ``b`` (floored at 1e-300)."""
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))
