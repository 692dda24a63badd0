"""Kerr and Schwarzschild metrics in Boyer-Lindquist coordinates.

Spatial coordinates are ``x = (r, theta, phi)``.  The metric is written as
``-beta dt^2 + g_R + 2 <delta, .> dt`` with

* ``g_R = diag(lambda / Delta, lambda, (r^2 + a^2 + 2 m r a^2 sin^2 / lambda) sin^2)``
* ``beta = 1 - 2 m r / lambda``
* ``delta = (g_34 / g_33) d_phi`` where ``g_34 = -2 m r a sin^2 / lambda``

and ``lambda = r^2 + a^2 cos^2``, ``Delta = r^2 - 2 m r + a^2``.

Energy conventions: the engine works with ``<gamma', d_t>``; the Kerr first
integrals use ``E = -<gamma', d_t>`` so that future-pointing geodesics far from
the hole have ``E > 0``.  :func:`fit_kerr_integrals` returns the latter.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .connection import hessian_phi
from .errors import AxisError, DomainError, HorizonError, TangencyError
from .metric import ScalarField, SpacetimeVector, StationaryMetric

AXIS_GUARD = 1e-8
TANGENCY_TOL = 1e-10


@dataclass(frozen=True)
class KerrParams:
    """Mass ``m > 0`` and rotation ``a`` (angular momentum per unit mass)."""

    m: float
    a: float

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError(f"mass must be positive, got {self.m!r}")

    @property
    def is_fast(self) -> bool:
        return self.a * self.a > self.m * self.m

    def _root(self) -> float:
        if self.is_fast:
            raise DomainError(f"no horizons for a^2 > m^2 (m={self.m}, a={self.a})")
        return float(np.sqrt(self.m**2 - self.a**2))

    @property
    def r_plus(self) -> float:
        return self.m + self._root()

    @property
    def r_minus(self) -> float:
        return self.m - self._root()

    @property
    def delta_floor(self) -> float:
        """Positive lower bound ``a^2 - m^2`` of ``Delta(r)`` in the fast case."""
        if not self.is_fast:
            raise DomainError("Delta has real zeros when a^2 <= m^2")
        return self.a**2 - self.m**2

    def Delta(self, r):
        return r * r - 2 * self.m * r + self.a**2

    def lam(self, r, theta):
        return r * r + self.a**2 * np.cos(theta) ** 2

    def beta(self, r, theta):
        return 1.0 - 2 * self.m * r / self.lam(r, theta)


@dataclass(frozen=True)
class BLPoint:
    t: float
    r: float
    theta: float
    phi: float

    @property
    def spatial(self) -> np.ndarray:
        return np.array([self.r, self.theta, self.phi])

    @classmethod
    def parse(cls, text: str) -> "BLPoint":
        parts = [float(v) for v in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected 't,r,theta,phi', got {text!r}")
        return cls(*parts)


REGION_KINDS = ("Ma", "MaEps", "RadialCut")


@dataclass(frozen=True)
class RegionSpec:
    """``Ma``: ``beta > 0``; ``MaEps``: ``phi_a > eps/2``; ``RadialCut``: ``r > r_+ + nu``.

    In the fast case the radial cut is ``r > nu``.
    """

    kind: str = "Ma"
    eps: float = 0.0
    nu: float = 0.0

    def __post_init__(self):
        if self.kind not in REGION_KINDS:
            raise ValueError(f"region kind must be one of {REGION_KINDS}, got {self.kind!r}")
        if self.eps < 0:
            raise ValueError("eps must be nonnegative")


@dataclass(frozen=True)
class KerrIntegrals:
    """First integrals ``(E, L, q, K)`` with ``E = -<gamma', d_t>``."""

    E: float
    L: float
    q: float
    K: float


def phi_a(params: KerrParams, r, theta):
    return 0.5 * (r * r - 2 * params.m * r + params.a**2 * np.cos(theta) ** 2)


def phi_a_field(params: KerrParams) -> ScalarField:
    """``phi_a`` as a field on ``(r, theta, phi)`` with exact derivatives."""
    m, a = params.m, params.a

    def phi(x):
        return phi_a(params, x[0], x[1])

    def dphi(x):
        return np.array([x[0] - m, -0.5 * a * a * np.sin(2 * x[1]), 0.0])

    def d2phi(x):
        return np.diag([1.0, -a * a * np.cos(2 * x[1]), 0.0])

    return ScalarField(phi, dphi, d2phi)


def _outer_threshold(params: KerrParams, eps, theta):
    rad = params.m**2 + eps - params.a**2 * np.cos(theta) ** 2
    return params.m + np.sqrt(rad) if rad >= 0 else 0.0


def region_membership(params: KerrParams, spec: RegionSpec, p: BLPoint) -> bool:
    if spec.kind == "RadialCut":
        floor = spec.nu if params.is_fast else params.r_plus + spec.nu
        return bool(p.r > floor)
    eps = spec.eps if spec.kind == "MaEps" else 0.0
    return bool(p.r > _outer_threshold(params, eps, p.theta))


def _components(params: KerrParams, r, theta):
    """Metric entries and their ``(d_r, d_theta)`` derivatives."""
    m, a = params.m, params.a
    s, c = np.sin(theta), np.cos(theta)
    s2, sc = s * s, s * c
    lam = r * r + a * a * c * c
    lam_r, lam_t = 2 * r, -2 * a * a * sc
    D = r * r - 2 * m * r + a * a
    D_r = 2 * r - 2 * m
    # d(r/lambda)
    rl = r / lam
    rl_r = (lam - r * lam_r) / lam**2
    rl_t = -r * lam_t / lam**2

    g11 = lam / D
    g11_r = (lam_r * D - lam * D_r) / D**2
    g11_t = lam_t / D
    g22, g22_r, g22_t = lam, lam_r, lam_t
    A = r * r + a * a + 2 * m * a * a * s2 * rl
    A_r = 2 * r + 2 * m * a * a * s2 * rl_r
    A_t = 2 * m * a * a * (2 * sc * rl + s2 * rl_t)
    g33, g33_r, g33_t = A * s2, A_r * s2, A_t * s2 + 2 * A * sc
    g34 = -2 * m * a * s2 * rl
    g34_r = -2 * m * a * s2 * rl_r
    g34_t = -2 * m * a * (2 * sc * rl + s2 * rl_t)
    beta = 1 - 2 * m * rl
    beta_r, beta_t = -2 * m * rl_r, -2 * m * rl_t
    return dict(
        lam=lam, D=D, g11=g11, g11_r=g11_r, g11_t=g11_t, g22=g22, g22_r=g22_r, g22_t=g22_t,
        g33=g33, g33_r=g33_r, g33_t=g33_t, g34=g34, g34_r=g34_r, g34_t=g34_t,
        beta=beta, beta_r=beta_r, beta_t=beta_t,
    )


def kerr_metric(params: KerrParams) -> StationaryMetric:
    """Stationary Kerr metric on ``M^a``; ``a = 0`` gives Schwarzschild."""
    m, a = params.m, params.a

    def validate(x):
        r, theta = x[0], x[1]
        if abs(np.sin(theta)) <= AXIS_GUARD or not 0 < theta < np.pi:
            raise AxisError(f"theta = {theta!r} is on or within {AXIS_GUARD} of the axis")
        if abs(params.Delta(r)) <= 1e-12 * max(1.0, r * r):
            raise HorizonError(f"Delta(r) = 0 at r = {r!r}")
        if not r > _outer_threshold(params, 0.0, theta):
            raise DomainError(f"(r, theta) = ({r!r}, {theta!r}) lies outside the stationary region")

    def g(x):
        k = _components(params, x[0], x[1])
        return np.diag([k["g11"], k["g22"], k["g33"]])

    def dg(x):
        k = _components(params, x[0], x[1])
        out = np.zeros((3, 3, 3))
        out[0] = np.diag([k["g11_r"], k["g22_r"], k["g33_r"]])
        out[1] = np.diag([k["g11_t"], k["g22_t"], k["g33_t"]])
        return out

    def beta(x):
        return float(params.beta(x[0], x[1]))

    def dbeta(x):
        k = _components(params, x[0], x[1])
        return np.array([k["beta_r"], k["beta_t"], 0.0])

    def delta(x):
        k = _components(params, x[0], x[1])
        return np.array([0.0, 0.0, k["g34"] / k["g33"]])

    def ddelta(x):
        k = _components(params, x[0], x[1])
        out = np.zeros((3, 3))
        out[2, 0] = (k["g34_r"] * k["g33"] - k["g34"] * k["g33_r"]) / k["g33"] ** 2
        out[2, 1] = (k["g34_t"] * k["g33"] - k["g34"] * k["g33_t"]) / k["g33"] ** 2
        return out

    return StationaryMetric.from_functions(
        3, g, beta, delta, dg=dg, dbeta=dbeta, ddelta=ddelta, validate=validate,
        names=("r", "theta", "phi"),
    )


def schwarzschild_metric(m: float) -> StationaryMetric:
    return kerr_metric(KerrParams(m, 0.0))


def kerr_christoffel(params: KerrParams, r: float, theta: float) -> dict:
    """Closed-form Christoffel symbols used by the boundary Hessian.

    Keys ``"k_ij"`` are symbols of ``g_R`` (1 = r, 2 = theta, 3 = phi); keys
    ``"bar_k_ij"`` (4 = t) belong to the full spacetime metric.
    """
    k = _components(params, r, theta)
    g11, g22 = k["g11"], k["g22"]
    return {
        "1_11": k["g11_r"] / (2 * g11),
        "1_12": k["g11_t"] / (2 * g11),
        "1_22": -k["g22_r"] / (2 * g11),
        "1_33": -k["g33_r"] / (2 * g11),
        "2_11": -k["g11_t"] / (2 * g22),
        "2_12": k["g22_r"] / (2 * g22),
        "2_22": k["g22_t"] / (2 * g22),
        "2_33": -k["g33_t"] / (2 * g22),
        "bar_1_44": 0.5 * k["beta_r"] / g11,
        "bar_2_44": 0.5 * k["beta_t"] / g22,
        "bar_1_34": -0.5 * k["g34_r"] / g11,
        "bar_2_34": -0.5 * k["g34_t"] / g22,
    }


def boundary_radius(params: KerrParams, eps: float, theta: float) -> float:
    rad = params.m**2 + eps - params.a**2 * np.cos(theta) ** 2
    if rad < 0:
        raise DomainError(f"phi_a = eps/2 has no outer solution at theta = {theta!r}")
    return params.m + float(np.sqrt(rad))


def boundary_point(params: KerrParams, eps: float, theta: float, t: float = 0.0, phi: float = 0.0) -> BLPoint:
    return BLPoint(t, boundary_radius(params, eps, theta), theta, phi)


def tangent_rprime(params: KerrParams, r: float, theta: float, thetaprime: float) -> float:
    """``r'`` making ``(r', theta')`` tangent to a level set of ``phi_a``."""
    return params.a**2 * np.sin(2 * theta) * thetaprime / (2 * (r - params.m))


def boundary_tangent(params: KerrParams, p: BLPoint, tprime: float, thetaprime: float,
                     phiprime: float) -> SpacetimeVector:
    rp = tangent_rprime(params, p.r, p.theta, thetaprime)
    return SpacetimeVector(tprime, np.array([rp, thetaprime, phiprime]))


def boundary_hessian(params: KerrParams, eps: float, p: BLPoint, vtilde: SpacetimeVector) -> float:
    """``Hess phi_a [vtilde, vtilde]`` at a point of ``phi_a = eps/2``.

    Evaluated from the diagonal Christoffel symbols of ``g_R`` (with ``r'``
    eliminated through tangency) plus the ``t'`` terms expressed through the
    symbols of the full metric.  Independent of the generic formula in
    :func:`stationary_geodesics.connection.hessian_phi`.
    """
    m, a = params.m, params.a
    r, th = p.r, p.theta
    if abs(phi_a(params, r, th) - 0.5 * eps) > 1e-9 * max(1.0, r * r):
        raise DomainError(f"point (r={r!r}, theta={th!r}) is not on the level set phi_a = {eps / 2!r}")
    tp = float(vtilde.t_part)
    rp, thp, php = (float(v) for v in vtilde.v_part)
    if abs(rp - tangent_rprime(params, r, th, thp)) > TANGENCY_TOL:
        raise TangencyError("vector is not tangent to the boundary level set")
    G = kerr_christoffel(params, r, th)
    w = r - m
    s2t = np.sin(2 * th)
    A2, A4, A6 = a**2, a**4, a**6
    hess_r = thp**2 * (
        A4 * s2t**2 / (4 * w**2)
        - G["1_11"] * A4 * s2t**2 / (4 * w)
        - G["1_12"] * A2 * s2t
        - G["1_22"] * w
        - A2 * np.cos(2 * th)
        + G["2_11"] * A6 * s2t**3 / (8 * w**2)
        + G["2_12"] * A4 * s2t**2 / (2 * w)
        + G["2_22"] * A2 * s2t / 2
    ) + php**2 * (-G["1_33"] * w + G["2_33"] * A2 * s2t / 2)
    half_grad_beta = G["bar_1_44"] * w - G["bar_2_44"] * A2 * s2t / 2
    rot_term = (G["bar_2_34"] * A2 * s2t - G["bar_1_34"] * 2 * w) * php
    return float(hess_r + tp * rot_term - tp**2 * half_grad_beta)


def boundary_hessian_generic(params: KerrParams, eps: float, p: BLPoint, vtilde: SpacetimeVector) -> float:
    """Same quantity through the general stationary Hessian formula."""
    return hessian_phi(kerr_metric(params), phi_a_field(params), p.spatial, vtilde)


def witness_closed_form(params: KerrParams, eps: float) -> float:
    """``r (r - m) Delta(r) / lambda + a^2`` at the equatorial boundary point."""
    r = params.m + np.sqrt(params.m**2 + eps)
    return float(r * (r - params.m) * params.Delta(r) / (r * r) + params.a**2)


def space_convexity_witness(params: KerrParams, eps: float):
    """Equatorial boundary point and ``d_theta`` with positive boundary Hessian.

    Returns ``(point, vector, hessian)``; a positive value shows ``M^a_eps`` is
    not space convex.
    """
    if not eps > 0:
        raise DomainError("eps must be positive")
    if params.is_fast:
        raise DomainError("witness requires a^2 <= m^2")
    p = boundary_point(params, eps, np.pi / 2)
    v = SpacetimeVector(0.0, np.array([0.0, 1.0, 0.0]))
    return p, v, boundary_hessian(params, eps, p, v)


def _axis_guard(theta, L):
    s = np.sin(theta)
    if abs(s) <= AXIS_GUARD and L != 0:
        raise AxisError(f"theta = {theta!r} within {AXIS_GUARD} of the axis and L != 0")
    return s


def fit_kerr_integrals(params: KerrParams, state) -> KerrIntegrals:
    """``(E, L, q, K)`` of the geodesic through ``state`` (a ``GeodesicState`` in BL coordinates).

    ``K`` comes from the theta relation; the r relation is left as a check.
    """
    r, th = float(state.x[0]), float(state.x[1])
    rp, thp, php = (float(v) for v in state.xprime)
    tp = float(state.tprime)
    k = _components(params, r, th)
    E = k["beta"] * tp - k["g34"] * php
    L = k["g34"] * tp + k["g33"] * php
    q = -k["beta"] * tp**2 + 2 * k["g34"] * tp * php + k["g11"] * rp**2 + k["g22"] * thp**2 + k["g33"] * php**2
    s = np.sin(th)
    c2 = np.cos(th) ** 2
    D = L - E * params.a * s * s
    K = k["lam"] ** 2 * thp**2 - q * params.a**2 * c2 + D * D / (s * s)
    return KerrIntegrals(float(E), float(L), float(q), float(K))


def kerr_first_integral_residuals(params: KerrParams, ints: KerrIntegrals, state) -> np.ndarray:
    """Residuals of the ``phi``, ``t``, ``r`` and ``theta`` first-integral relations.

    Each residual is divided by ``max(1, largest |term|)`` of its relation so the
    values are comparable across radii.
    """
    m, a = params.m, params.a
    r, th = float(state.x[0]), float(state.x[1])
    rp, thp, php = (float(v) for v in state.xprime)
    tp = float(state.tprime)
    E, L, q, K = ints.E, ints.L, ints.q, ints.K
    s = _axis_guard(th, L)
    c2 = np.cos(th) ** 2
    lam = r * r + a * a * c2
    Dr = params.Delta(r)
    P = (r * r + a * a) * E - L * a
    if L == 0:
        # D = -E a sin^2, so the 1/sin^2 terms are regular
        D = -E * a * s * s
        D_over_s2 = -E * a
        D2_over_s2 = E * E * a * a * s * s
    else:
        D = L - E * a * s * s
        D_over_s2 = D / (s * s)
        D2_over_s2 = D * D / (s * s)

    def rel(lhs, *terms):
        return (lhs - sum(terms)) / max(1.0, abs(lhs), *(abs(t) for t in terms))

    return np.array([
        rel(lam * php, D_over_s2, a * P / Dr),
        rel(lam * tp, a * D, (r * r + a * a) * P / Dr),
        rel(lam**2 * rp**2, Dr * q * r * r, -Dr * K, P * P),
        rel(lam**2 * thp**2, K, q * a * a * c2, -D2_over_s2),
    ])


def engine_energy(E_bl: float) -> float:
    """Convert ``E = -<gamma', d_t>`` to the engine's ``<gamma', d_t>``."""
    return -E_bl
