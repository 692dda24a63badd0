"""Built-in test metrics with analytic derivatives.

``random_analytic_metric`` draws a smooth stationary metric on R^n from a
seed: ``g_R = I + sum S_p sin(k_p . x + c_p)`` with small symmetric ``S_p``,
``beta = 2 + sum b_p sin(...)`` and a trigonometric ``delta``.  They are used as
generic (non-Kerr) inputs for the oracle checks.
"""
from __future__ import annotations

import numpy as np

from .errors import UsageError
from .metric import StationaryMetric


def flat_static(dim: int = 3, beta: float = 1.0) -> StationaryMetric:
    """Minkowski-like product metric ``-beta dt^2 + dx^2`` (``delta = 0``)."""
    eye = np.eye(dim)
    return StationaryMetric.from_functions(
        dim,
        lambda x: eye,
        lambda x: beta,
        lambda x: np.zeros(dim),
        dg=lambda x: np.zeros((dim, dim, dim)),
        dbeta=lambda x: np.zeros(dim),
        ddelta=lambda x: np.zeros((dim, dim)),
    )


def static_metric(beta, dbeta, dim: int = 3) -> StationaryMetric:
    """Flat ``g_R``, ``delta = 0`` and a user-supplied lapse ``beta``."""
    eye = np.eye(dim)
    return StationaryMetric.from_functions(
        dim,
        lambda x: eye,
        beta,
        lambda x: np.zeros(dim),
        dg=lambda x: np.zeros((dim, dim, dim)),
        dbeta=dbeta,
        ddelta=lambda x: np.zeros((dim, dim)),
    )


def random_analytic_metric(seed: int, dim: int = 3, terms: int = 2) -> StationaryMetric:
    rng = np.random.default_rng(seed)
    k_g = rng.uniform(-1, 1, (terms, dim))
    c_g = rng.uniform(0, 2 * np.pi, terms)
    S = rng.uniform(-0.1, 0.1, (terms, dim, dim))
    S = 0.5 * (S + S.transpose(0, 2, 1))
    k_b = rng.uniform(-1, 1, (terms, dim))
    c_b = rng.uniform(0, 2 * np.pi, terms)
    b = rng.uniform(-0.5, 0.5, terms)
    k_d = rng.uniform(-1, 1, (terms, dim))
    c_d = rng.uniform(0, 2 * np.pi, (terms, dim))
    amp_d = rng.uniform(-0.5, 0.5, (terms, dim))
    eye = np.eye(dim)

    def g(x):
        return eye + np.einsum("p,pij->ij", np.sin(k_g @ x + c_g), S)

    def dg(x):
        return np.einsum("p,pk,pij->kij", np.cos(k_g @ x + c_g), k_g, S)

    def beta(x):
        return 2.0 + float(b @ np.sin(k_b @ x + c_b))

    def dbeta(x):
        return (b * np.cos(k_b @ x + c_b)) @ k_b

    def delta(x):
        return np.sum(amp_d * np.sin((k_d @ x)[:, None] + c_d), axis=0)

    def ddelta(x):
        return np.einsum("pi,pj->ij", amp_d * np.cos((k_d @ x)[:, None] + c_d), k_d)

    return StationaryMetric.from_functions(dim, g, beta, delta, dg=dg, dbeta=dbeta, ddelta=ddelta)


def builtin_metric(name: str) -> StationaryMetric:
    """Resolve a CLI metric id: ``flat`` or ``random-<seed>``."""
    if name == "flat":
        return flat_static()
    if name.startswith("random-"):
        try:
            seed = int(name.split("-", 1)[1])
        except ValueError:
            raise UsageError(f"metric: bad seed in {name!r}") from None
        return random_analytic_metric(seed)
    raise UsageError(f"metric: unknown builtin metric {name!r}")
