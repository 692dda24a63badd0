"""Dormand-Prince 5(4) with a PI step-size controller."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, DomainExit, MaxStepsExceeded, SingularChartError, StepUnderflow

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [np.array(row) for row in [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]]
# 5th-order minus embedded 4th-order weights
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and step limits for the adaptive integrator."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = 0.1
    min_step: float = 1e-14
    max_steps: int = 200_000

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if not 0 < self.min_step <= self.max_step:
            raise ValueError("need 0 < min_step <= max_step")
        if self.max_steps < 1:
            raise ValueError("max_steps must be positive")


@dataclass
class StepRecord:
    s: np.ndarray
    y: np.ndarray
    f: np.ndarray


def _initial_step(fun, s0, y0, f0, cfg, direction):
    scale = cfg.abs_tol + cfg.rel_tol * np.abs(y0)
    d0 = np.sqrt(np.mean((y0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, cfg.max_step)
    try:
        f1 = fun(s0 + direction * h0, y0 + direction * h0 * f0)
        d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    except (DomainError, SingularChartError):
        return max(h0 * 1e-2, cfg.min_step)
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return float(np.clip(min(100 * h0, h1), cfg.min_step, cfg.max_step))


def dopri5(fun, s0: float, y0, s_end: float, cfg: IntegratorConfig) -> StepRecord:
    """Integrate ``y' = fun(s, y)`` from ``s0`` to ``s_end``.

    Stage evaluations that raise :class:`DomainError` count as rejected steps.
    If the step has to shrink below ``cfg.min_step`` because of them, a
    :class:`DomainExit` carrying the accepted steps so far is raised; otherwise
    :class:`StepUnderflow`.
    """
    y = np.asarray(y0, dtype=float).copy()
    s = float(s0)
    direction = 1.0 if s_end >= s0 else -1.0
    f = fun(s, y)
    ss, ys, fs = [s], [y.copy()], [f.copy()]
    if s_end == s0:
        return StepRecord(np.array(ss), np.array(ys), np.array(fs))
    h = _initial_step(fun, s, y, f, cfg, direction)
    err_prev = 1e-4
    rejected = False
    k = np.empty((7, y.size))
    for _ in range(cfg.max_steps):
        remaining = abs(s_end - s)
        if remaining <= 1e-15 * max(1.0, abs(s_end)):
            break
        h = min(h, remaining, cfg.max_step)
        domain_fail = False
        try:
            # overflow shows up as a non-finite error norm and is handled below
            with np.errstate(over="ignore", invalid="ignore"):
                k[0] = f
                for i in range(1, 7):
                    yi = y + direction * h * (_A[i] @ k[:i])
                    k[i] = fun(s + direction * _C[i] * h, yi)
                y_new = yi
                err_vec = direction * h * (_E @ k)
                scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
                err = float(np.sqrt(np.mean((err_vec / scale) ** 2)))
            if not np.isfinite(err):
                raise DomainError("non-finite step")
        except (DomainError, SingularChartError):
            domain_fail = True
            err = np.inf
        if err <= 1.0:
            s = s_end if h >= remaining else s + direction * h
            y = y_new
            f = k[6].copy()
            ss.append(s)
            ys.append(y.copy())
            fs.append(f)
            fac = 0.9 * max(err, 1e-10) ** (-0.7 / 5) * err_prev ** (0.4 / 5)
            fac = min(fac, 1.0) if rejected else min(fac, 5.0)
            h = h * max(fac, 0.2)
            err_prev = max(err, 1e-4)
            rejected = False
        else:
            fac = 0.25 if domain_fail else max(0.9 * err ** (-1 / 5), 0.2)
            h = h * fac
            rejected = True
            if h < cfg.min_step:
                record = StepRecord(np.array(ss), np.array(ys), np.array(fs))
                if domain_fail:
                    raise DomainExit(f"trajectory left the domain near s = {s:.10g}", record)
                raise StepUnderflow(f"step size underflow at s = {s:.10g}")
    else:
        raise MaxStepsExceeded(f"more than {cfg.max_steps} steps before s = {s_end}")
    return StepRecord(np.array(ss), np.array(ys), np.array(fs))
