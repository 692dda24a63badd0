"""Vectorised adaptive Gauss-Kronrod (7, 15) quadrature.

Also handles integrals of the form ``int_a^b f(x) / sqrt(p(x)) dx`` where ``p``
has a simple zero at ``a``; these appear for every turning point of a radial
geodesic equation.
"""
from __future__ import annotations

import numpy as np

from .errors import ConvergenceError, SingularityError

# QUADPACK qk15 abscissae and weights
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate((-_XK[:-1], _XK[::-1]))
KRONROD_WEIGHTS = np.concatenate((_WK[:-1], _WK[::-1]))
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[[13, 11, 9]] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]


def gauss_kronrod(f, a: float, b: float, abs_tol: float = 1e-12, rel_tol: float = 1e-12,
                  max_intervals: int = 4000):
    """Integrate a vectorised ``f`` over ``[a, b]``.

    Intervals whose ``|K15 - G7|`` exceeds their share of the tolerance are
    bisected; all active intervals are evaluated in one call to ``f``.

    Returns
    -------
    value, error_estimate : float
    """
    if a == b:
        return 0.0, 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    length = b - a
    lo = np.array([a])
    hi = np.array([b])
    total = 0.0
    total_err = 0.0
    n_intervals = 1
    estimate = None
    while lo.size:
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        x = mid[:, None] + half[:, None] * NODES[None, :]
        fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
        if not np.all(np.isfinite(fx)):
            raise ConvergenceError("integrand is not finite on the integration interval")
        K = half * (fx @ KRONROD_WEIGHTS)
        err = np.abs(K - half * (fx @ GAUSS_WEIGHTS))
        if estimate is None:
            estimate = float(np.sum(K))
        else:
            estimate = total + float(np.sum(K))
        tol = max(abs_tol, rel_tol * abs(estimate))
        ok = err <= tol * (hi - lo) / length
        total += float(np.sum(K[ok]))
        total_err += float(np.sum(err[ok]))
        lo, hi, mid = lo[~ok], hi[~ok], mid[~ok]
        if lo.size:
            if np.any(hi - lo < 64 * np.finfo(float).eps * max(abs(a), abs(b), 1.0)):
                raise ConvergenceError("quadrature refinement stalled at machine resolution")
            n_intervals += lo.size
            if n_intervals > max_intervals:
                raise ConvergenceError(f"quadrature exceeded {max_intervals} subintervals")
            lo, hi = np.concatenate((lo, mid)), np.concatenate((mid, hi))
    return sign * total, total_err


def integrate_inverse_sqrt(f, a: float, b: float, taylor, abs_tol: float = 1e-12,
                           rel_tol: float = 1e-12):
    """``int_a^b f(x) / sqrt(p(x)) dx`` with ``p(a + y) = sum_k taylor[k-1] y^k``.

    ``taylor[0] = p'(a) > 0`` makes the endpoint singularity an integrable
    ``1/sqrt(y)``.  With ``y = u^2`` the integrand becomes smooth; when
    ``taylor[1] > 0`` the further change ``y = (c1/c2) sinh(w)^2`` also keeps the
    quadrature uniform when ``c1`` is tiny next to ``c2`` (nearly double roots).
    """
    c = np.asarray(taylor, dtype=float)
    if b < a:
        raise ValueError("need b >= a")
    if b == a:
        return 0.0
    if not c[0] > 0:
        raise SingularityError(f"p'(a) = {c[0]:.6g} must be positive")
    c1 = c[0]
    c2 = c[1] if c.size > 1 else 0.0
    higher = c[2:]
    span = b - a

    def tail(y):
        # sum_{k>=3} c_k y^(k-1)
        out = np.zeros_like(y)
        for coef in higher[::-1]:
            out = (out + coef) * y
        return out * y if higher.size else out

    if c2 > 0:
        ratio = c1 / c2
        upper = np.arcsinh(np.sqrt(span / ratio))

        def integrand(w):
            y = ratio * np.sinh(w) ** 2
            rho = tail(y) / (c1 + c2 * y)
            if np.any(1 + rho <= 0):
                raise SingularityError("p vanishes inside the integration span")
            return 2.0 * f(a + y) / (np.sqrt(c2) * np.sqrt(1.0 + rho))

        return gauss_kronrod(integrand, 0.0, upper, abs_tol, rel_tol)[0]

    def integrand_u(u):
        y = u * u
        inner = c1 + c2 * y + tail(y)
        if np.any(inner <= 0):
            raise SingularityError("p vanishes inside the integration span")
        return 2.0 * f(a + y) / np.sqrt(inner)

    return gauss_kronrod(integrand_u, 0.0, np.sqrt(span), abs_tol, rel_tol)[0]
