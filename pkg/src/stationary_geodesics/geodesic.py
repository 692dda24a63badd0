"""Reduced spatial geodesic equation of a stationary metric.

A curve ``(t(s), x(s))`` is a geodesic iff ``E = <gamma', d_t>`` is constant and
``x`` solves ``nabla^R_{x'} x' = R0bar + R1bar + R2bar``; ``t`` then follows
from ``t' = (<delta, x'>_R - E) / beta``.  The engine integrates only ``x`` and
recovers ``t`` by Simpson quadrature over accepted steps.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from .connection import fd_christoffel
from .errors import DomainError, DomainExit
from .metric import LocalGeometry, StationaryMetric, assemble_metric, local_geometry
from .ode import IntegratorConfig, dopri5

__all__ = [
    "ConservedPair",
    "GeodesicState",
    "IntegratorConfig",
    "Trajectory",
    "coefficient_fields",
    "reduced_rhs",
    "t_rate_from_energy",
    "normalization_q",
    "state_from_velocity",
    "integrate_geodesic",
    "oracle_geodesic_4d",
]


@dataclass(frozen=True)
class ConservedPair:
    E: float
    q: float


@dataclass(frozen=True)
class GeodesicState:
    s: float
    x: np.ndarray
    xprime: np.ndarray
    t: float
    tprime: float

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "xprime", np.asarray(self.xprime, dtype=float))


def _coefficients(geo: LocalGeometry, xprime):
    g_db = float(geo.delta_flat @ geo.grad_beta)
    R0 = -0.5 * (geo.Lam * g_db * geo.delta + geo.grad_beta)
    R1 = (
        -geo.Lam * (float(geo.dbeta @ xprime) + float(xprime @ geo.rot @ geo.delta)) * geo.delta
        + geo.sharp(geo.rot @ xprime)
    )
    R2 = geo.Lam * float(xprime @ geo.sym @ xprime) * geo.delta
    return R0, R1, R2


def coefficient_fields(metric: StationaryMetric, x, xprime):
    """``(R0(x), R1(x, x'), R2(x, x' x'))`` such that ``nabla^R_{x'} x' = t'^2 R0 + t' R1 + R2``."""
    return _coefficients(local_geometry(metric, x), np.asarray(xprime, dtype=float))


def _reduced(geo: LocalGeometry, E, xprime):
    R0, R1, R2 = _coefficients(geo, xprime)
    b = geo.beta
    dx = float(geo.delta_flat @ xprime)
    R0bar = (E / b) ** 2 * R0
    R1bar = -(E / b) * (2 * dx / b * R0 + R1)
    R2bar = (dx / b) ** 2 * R0 + dx / b * R1 + R2
    return R0bar + R1bar + R2bar


def reduced_rhs(metric: StationaryMetric, E: float, x, xprime) -> np.ndarray:
    """Covariant acceleration ``nabla^R_{x'} x'`` of the spatial part of a geodesic with energy ``E``."""
    return _reduced(local_geometry(metric, x), E, np.asarray(xprime, dtype=float))


def t_rate_from_energy(metric: StationaryMetric, E: float, x, xprime) -> float:
    geo = local_geometry(metric, x)
    return (float(geo.delta_flat @ np.asarray(xprime, dtype=float)) - E) / geo.beta


def _q(geo, tprime, xprime):
    return -geo.beta * tprime**2 + 2 * float(geo.delta_flat @ xprime) * tprime + float(xprime @ geo.g @ xprime)


def normalization_q(metric: StationaryMetric, E: float, x, xprime) -> float:
    """``q = <gamma', gamma'>`` with ``t'`` eliminated through the energy relation."""
    geo = local_geometry(metric, x)
    xprime = np.asarray(xprime, dtype=float)
    tprime = (float(geo.delta_flat @ xprime) - E) / geo.beta
    return _q(geo, tprime, xprime)


def state_from_velocity(metric: StationaryMetric, x, xprime, tprime: float, s: float = 0.0, t: float = 0.0):
    """Initial state from a full tangent vector; returns ``(state, E)``."""
    geo = local_geometry(metric, x)
    xprime = np.asarray(xprime, dtype=float)
    E = -geo.beta * tprime + float(geo.delta_flat @ xprime)
    return GeodesicState(s, np.asarray(x, dtype=float), xprime, t, tprime), E


@dataclass
class Trajectory:
    """Sampled geodesic.

    ``status`` is ``"completed"`` or ``"domain_exit"``; leaving the stationary
    region is a normal outcome and the last row is then the exit point.
    """

    s: np.ndarray
    t: np.ndarray
    x: np.ndarray
    xprime: np.ndarray
    tprime: np.ndarray
    E: float
    q: np.ndarray
    E_measured: np.ndarray
    names: tuple = ()
    status: str = "completed"
    message: str = ""

    def __len__(self):
        return len(self.s)

    @property
    def q0(self) -> float:
        return float(self.q[0]) if len(self.q) else float("nan")

    @property
    def q_drift(self) -> float:
        return float(np.max(np.abs(self.q - self.q[0]))) if len(self.q) else 0.0

    @property
    def E_drift(self) -> float:
        return float(np.max(np.abs(self.E_measured - self.E))) if len(self.E_measured) else 0.0

    def state(self, i: int = -1) -> GeodesicState:
        return GeodesicState(float(self.s[i]), self.x[i], self.xprime[i], float(self.t[i]), float(self.tprime[i]))

    @property
    def columns(self) -> list:
        names = self.names or tuple(f"x{i + 1}" for i in range(self.x.shape[1] if self.x.ndim == 2 else 0))
        return ["s", "t", *names, *[f"d{n}" for n in names], "dt", "E_residual", "q_residual"]

    def rows(self) -> list:
        out = []
        for i in range(len(self.s)):
            out.append([
                float(self.s[i]), float(self.t[i]), *map(float, self.x[i]), *map(float, self.xprime[i]),
                float(self.tprime[i]), float(self.E_measured[i] - self.E), float(self.q[i] - self.q[0]),
            ])
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows():
            writer.writerow([repr(v) for v in row])
        return buf.getvalue()


def _geodesic_system(metric, E, n):
    def fun(s, y):
        x, v = y[:n], y[n:]
        geo = local_geometry(metric, x)
        acc = _reduced(geo, E, v) - geo.christoffel_contract(v, v)
        return np.concatenate((v, acc))

    return fun


def _hermite_mid(p0, v0, a0, p1, v1, a1, h):
    """Position and velocity at the midpoint of the quintic Hermite interpolant."""
    pm = 0.5 * (p0 + p1) + 5 * h * (v0 - v1) / 32 + h * h * (a0 + a1) / 64
    vm = 15 * (p1 - p0) / (8 * h) - 7 * (v0 + v1) / 16 + h * (a1 - a0) / 32
    return pm, vm


def integrate_geodesic(
    metric: StationaryMetric,
    state0: GeodesicState,
    E: float,
    cfg: Optional[IntegratorConfig] = None,
    s_end: float = 1.0,
) -> Trajectory:
    """Integrate the reduced equation from ``state0`` up to affine parameter ``s_end``.

    ``state0.tprime`` must satisfy the energy relation for ``E``.
    Raises :class:`StepUnderflow` or :class:`MaxStepsExceeded`; leaving the
    region ``beta > 0`` returns a trajectory with ``status == "domain_exit"``.
    """
    cfg = cfg or IntegratorConfig()
    n = metric.dim
    x0 = np.asarray(state0.x, dtype=float)
    v0 = np.asarray(state0.xprime, dtype=float)
    tp0 = t_rate_from_energy(metric, E, x0, v0)
    if abs(tp0 - state0.tprime) > 1e-9 * max(1.0, abs(tp0)):
        raise ValueError(
            f"state0.tprime = {state0.tprime!r} inconsistent with E = {E!r} (expected {tp0!r})"
        )
    fun = _geodesic_system(metric, E, n)
    status, message = "completed", ""
    try:
        rec = dopri5(fun, state0.s, np.concatenate((x0, v0)), s_end, cfg)
    except DomainExit as exc:
        rec = exc.state
        status, message = "domain_exit", str(exc)

    s, Y, F = rec.s, rec.y, rec.f
    X, V = Y[:, :n], Y[:, n:]
    m = len(s)
    tprime = np.empty(m)
    q = np.empty(m)
    E_meas = np.empty(m)
    for i in range(m):
        geo = local_geometry(metric, X[i])
        tprime[i] = (float(geo.delta_flat @ V[i]) - E) / geo.beta
        q[i] = _q(geo, tprime[i], V[i])
        E_meas[i] = -geo.beta * tprime[i] + float(geo.delta_flat @ V[i])
    t = np.empty(m)
    t[0] = state0.t
    for i in range(m - 1):
        h = s[i + 1] - s[i]
        xm, vm = _hermite_mid(X[i], V[i], F[i, n:], X[i + 1], V[i + 1], F[i + 1, n:], h)
        try:
            geo = local_geometry(metric, xm)
            tpm = (float(geo.delta_flat @ vm) - E) / geo.beta
        except DomainError:
            tpm = 0.5 * (tprime[i] + tprime[i + 1])
        t[i + 1] = t[i] + h / 6 * (tprime[i] + 4 * tpm + tprime[i + 1])
    return Trajectory(s, t, X, V, tprime, float(E), q, E_meas, metric.coordinate_names, status, message)


def oracle_geodesic_4d(
    metric: StationaryMetric,
    state0: GeodesicState,
    cfg: Optional[IntegratorConfig] = None,
    s_end: float = 1.0,
    s_eval=None,
    step: float = 1e-4,
) -> Trajectory:
    """Test oracle: ``X'' = -Gamma(X', X')`` on all ``n+1`` coordinates.

    Christoffel symbols come from :func:`fd_christoffel` and the ODE is solved
    with SciPy's DOP853, so neither the closed-form connection nor the reduced
    equation nor the package's own stepper is involved.
    """
    cfg = cfg or IntegratorConfig()
    n = metric.dim
    X0 = np.concatenate(([state0.t], state0.x))
    V0 = np.concatenate(([state0.tprime], state0.xprime))

    def fun(s, y):
        X, V = y[: n + 1], y[n + 1:]
        gamma = fd_christoffel(metric, X[1:], step)
        return np.concatenate((V, -np.einsum("kij,i,j->k", gamma, V, V)))

    sol = solve_ivp(
        fun, (state0.s, s_end), np.concatenate((X0, V0)), method="DOP853",
        rtol=cfg.rel_tol, atol=cfg.abs_tol, max_step=cfg.max_step, dense_output=True,
    )
    if not sol.success:
        raise DomainExit(f"oracle integration failed: {sol.message}")
    if s_eval is None:
        s_eval = sol.t
    s_eval = np.asarray(s_eval, dtype=float)
    Y = sol.sol(s_eval).T
    q = np.empty(len(s_eval))
    E_meas = np.empty(len(s_eval))
    for i, y in enumerate(Y):
        G = assemble_metric(metric, y[1: n + 1])[0]
        V = y[n + 1:]
        q[i] = V @ G @ V
        E_meas[i] = G[0] @ V
    return Trajectory(
        s_eval, Y[:, 0], Y[:, 1: n + 1], Y[:, n + 2:], Y[:, n + 1], float(E_meas[0]), q, E_meas,
        metric.coordinate_names,
    )
