"""Standard stationary metrics on R x M0.

The line element is ``-beta dt^2 + g_R + 2 <delta, .>_R dt`` where ``g_R`` is a
Riemannian metric on the chart ``M0``, ``beta > 0`` a function and ``delta`` a
vector field, all independent of ``t``.  Coordinates on the full spacetime are
ordered ``(t, x^1, ..., x^n)`` throughout the package.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import partial
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError, SingularChartError

ArrayFn = Callable[[np.ndarray], np.ndarray]


def fd_step(x: np.ndarray) -> float:
    """Default central-difference step used when a field has no analytic derivative."""
    return 1e-5 * max(1.0, float(np.max(np.abs(x))))


def _central_derivative(fun, x):
    """Stack of partials: ``out[k] = d fun / d x^k`` by central differences."""
    x = np.asarray(x, dtype=float)
    h = fd_step(x)
    parts = []
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = h
        parts.append((np.asarray(fun(x + e), dtype=float) - np.asarray(fun(x - e), dtype=float)) / (2 * h))
    return np.array(parts)


def _fd_jacobian(fun, x):
    # J[i, j] = d fun^i / d x^j
    return _central_derivative(fun, x).T


@dataclass(frozen=True)
class RiemannianChart:
    """Riemannian metric ``g_R`` on a coordinate chart.

    ``dg(x)[k, i, j]`` is the partial derivative of ``g_ij`` along ``x^k``.
    """

    dim: int
    g: ArrayFn
    dg: ArrayFn
    derivative_source: str = "analytic"

    @classmethod
    def from_functions(cls, dim: int, g: ArrayFn, dg: Optional[ArrayFn] = None) -> "RiemannianChart":
        if dg is None:
            return cls(dim, g, partial(_central_derivative, g), "finite-difference")
        return cls(dim, g, dg, "analytic")

    def christoffel(self, x, g=None, ginv=None) -> np.ndarray:
        """Levi-Civita symbols ``Gamma[k, i, j]`` of ``g_R`` at ``x``."""
        if g is None:
            g = np.asarray(self.g(x), dtype=float)
        if ginv is None:
            ginv = np.linalg.inv(g)
        return christoffel_from_derivatives(ginv, np.asarray(self.dg(x), dtype=float))


def christoffel_from_derivatives(ginv: np.ndarray, dg: np.ndarray) -> np.ndarray:
    """``Gamma^k_ij = 1/2 g^kl (d_i g_lj + d_j g_li - d_l g_ij)`` with ``dg[k] = d_k g``."""
    lower = 0.5 * (dg.transpose(1, 0, 2) + dg.transpose(1, 2, 0) - dg)
    return np.einsum("kl,lij->kij", ginv, lower)


@dataclass(frozen=True)
class StationaryMetric:
    """Fields ``(g_R, beta, delta)`` with their first partial derivatives.

    Parameters
    ----------
    chart : RiemannianChart
    beta, dbeta : callables
        ``beta(x) > 0`` and its gradient covector ``(d_1 beta, ..., d_n beta)``.
    delta, ddelta : callables
        Contravariant components of ``delta`` and the Jacobian
        ``ddelta(x)[i, j] = d_j delta^i``.
    validate : callable, optional
        Raises a :class:`DomainError` subclass for points the chart cannot
        evaluate (horizons, coordinate axes).  ``beta > 0`` is always checked.
    names : tuple of str
        Spatial coordinate names, used for report columns.
    """

    chart: RiemannianChart
    beta: Callable[[np.ndarray], float]
    dbeta: ArrayFn
    delta: ArrayFn
    ddelta: ArrayFn
    validate: Optional[Callable[[np.ndarray], None]] = None
    names: Sequence[str] = ()
    derivative_source: str = "analytic"

    @property
    def dim(self) -> int:
        return self.chart.dim

    @property
    def coordinate_names(self) -> tuple:
        if self.names:
            return tuple(self.names)
        return tuple(f"x{i + 1}" for i in range(self.dim))

    @classmethod
    def from_functions(
        cls,
        dim: int,
        g: ArrayFn,
        beta: Callable[[np.ndarray], float],
        delta: ArrayFn,
        *,
        dg: Optional[ArrayFn] = None,
        dbeta: Optional[ArrayFn] = None,
        ddelta: Optional[ArrayFn] = None,
        validate=None,
        names: Sequence[str] = (),
    ) -> "StationaryMetric":
        """Build a metric, installing central-difference derivatives where none are given."""
        chart = RiemannianChart.from_functions(dim, g, dg)
        analytic = dg is not None and dbeta is not None and ddelta is not None
        if dbeta is None:
            dbeta = partial(_central_derivative, beta)
        if ddelta is None:
            ddelta = partial(_fd_jacobian, delta)
        return cls(
            chart, beta, dbeta, delta, ddelta, validate, tuple(names),
            "analytic" if analytic else "finite-difference",
        )

    def in_domain(self, x) -> bool:
        try:
            local_geometry(self, x)
        except DomainError:
            return False
        except SingularChartError:
            return False
        return True


@dataclass(frozen=True)
class SpacetimeVector:
    """Tangent vector ``t_part * d_t + v_part`` at a point of R x M0."""

    t_part: float
    v_part: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "t_part", float(self.t_part))
        object.__setattr__(self, "v_part", np.asarray(self.v_part, dtype=float))

    def as_array(self) -> np.ndarray:
        return np.concatenate(([self.t_part], self.v_part))

    @classmethod
    def from_array(cls, arr) -> "SpacetimeVector":
        arr = np.asarray(arr, dtype=float)
        return cls(arr[0], arr[1:])

    def __add__(self, other):
        return SpacetimeVector(self.t_part + other.t_part, self.v_part + other.v_part)

    def __sub__(self, other):
        return SpacetimeVector(self.t_part - other.t_part, self.v_part - other.v_part)

    def __mul__(self, c):
        return SpacetimeVector(c * self.t_part, c * self.v_part)

    __rmul__ = __mul__


@dataclass(frozen=True)
class ScalarField:
    """A function on M0 (hence t-independent on R x M0) with first and second partials."""

    phi: Callable[[np.ndarray], float]
    dphi: ArrayFn
    d2phi: ArrayFn


@dataclass(frozen=True)
class LocalGeometry:
    """Everything the closed-form connection formulas need at one point.

    ``nabla_delta[i, j]`` is ``<nabla^R_{e_i} delta, e_j>_R`` for coordinate
    vectors ``e_i``; ``sym`` and ``rot`` are its symmetric part and twice its
    skew part.  ``cov_delta[:, j]`` is the vector ``nabla^R_{e_j} delta``.
    """

    x: np.ndarray
    g: np.ndarray
    ginv: np.ndarray
    gamma: np.ndarray
    beta: float
    dbeta: np.ndarray
    grad_beta: np.ndarray
    delta: np.ndarray
    delta_flat: np.ndarray
    Lam: float
    cov_delta: np.ndarray
    nabla_delta: np.ndarray
    sym: np.ndarray
    rot: np.ndarray

    def sharp(self, covector) -> np.ndarray:
        """Vector metrically associated to a covector (dense solve of ``g y = w``)."""
        return np.linalg.solve(self.g, covector)

    def christoffel_contract(self, V, W) -> np.ndarray:
        return np.einsum("kij,i,j->k", self.gamma, V, W)


def local_geometry(metric: StationaryMetric, x) -> LocalGeometry:
    """Evaluate fields, Christoffel symbols of ``g_R`` and ``nabla^R delta`` at ``x``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (metric.dim,):
        raise ValueError(f"point has shape {x.shape}, expected ({metric.dim},)")
    if metric.validate is not None:
        metric.validate(x)
    beta = float(metric.beta(x))
    if not beta > 0:
        raise DomainError(f"beta = {beta:.6g} <= 0 at x = {x.tolist()}")
    g = np.asarray(metric.chart.g(x), dtype=float)
    try:
        np.linalg.cholesky(g)
    except np.linalg.LinAlgError as exc:
        raise SingularChartError(f"g_R not positive definite at x = {x.tolist()}") from exc
    ginv = np.linalg.inv(g)
    gamma = christoffel_from_derivatives(ginv, np.asarray(metric.chart.dg(x), dtype=float))
    dbeta = np.asarray(metric.dbeta(x), dtype=float)
    delta = np.asarray(metric.delta(x), dtype=float)
    jac = np.asarray(metric.ddelta(x), dtype=float)
    delta_flat = g @ delta
    Lam = -1.0 / (beta + float(delta @ delta_flat))
    cov = jac + np.einsum("kjl,l->kj", gamma, delta)
    nabla = (g @ cov).T
    return LocalGeometry(
        x=x, g=g, ginv=ginv, gamma=gamma, beta=beta, dbeta=dbeta,
        grad_beta=ginv @ dbeta, delta=delta, delta_flat=delta_flat, Lam=Lam,
        cov_delta=cov, nabla_delta=nabla, sym=0.5 * (nabla + nabla.T), rot=nabla - nabla.T,
    )


def assemble_metric(metric: StationaryMetric, x):
    """Full ``(n+1) x (n+1)`` coordinate matrix, its inverse and ``Lambda``.

    The inverse uses the block formula
    ``[[Lam, -Lam delta^T], [-Lam delta, g_R^{-1} + Lam delta delta^T]]``
    with ``Lam = -1 / (beta + |delta|_R^2)``.
    """
    geo = local_geometry(metric, x)
    return _assemble(geo)


def _assemble(geo: LocalGeometry):
    n = geo.g.shape[0]
    G = np.empty((n + 1, n + 1))
    G[0, 0] = -geo.beta
    G[0, 1:] = geo.delta_flat
    G[1:, 0] = geo.delta_flat
    G[1:, 1:] = geo.g
    Ginv = np.empty_like(G)
    Ginv[0, 0] = geo.Lam
    Ginv[0, 1:] = -geo.Lam * geo.delta
    Ginv[1:, 0] = -geo.Lam * geo.delta
    Ginv[1:, 1:] = geo.ginv + geo.Lam * np.outer(geo.delta, geo.delta)
    return G, Ginv, geo.Lam
