import numpy as np
import pytest

from stationary_geodesics.builtin import random_analytic_metric
from stationary_geodesics.geodesic import state_from_velocity
from stationary_geodesics.kerr import KerrParams, kerr_metric

ACCEPTANCE_LINES = []


def record_acceptance(number, passed, detail):
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'} | {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def random_kerr_state(rng, params, r_range=(6.0, 12.0), speed=0.06):
    """A start point well inside the stationary region with a moderate velocity."""
    metric = kerr_metric(params)
    x = np.array([rng.uniform(*r_range) * params.m, rng.uniform(0.5, np.pi - 0.5), rng.uniform(0, 2 * np.pi)])
    v = rng.normal(size=3) * speed
    v[1] /= x[0]
    v[2] /= x[0] * np.sin(x[1])
    tprime = rng.uniform(0.8, 1.5)
    state, E = state_from_velocity(metric, x, v, tprime, t=rng.uniform(-1, 1))
    return metric, state, E


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(params=[0.0, 0.5, 1.0], ids=["a0", "a05", "a1"])
def kerr_params(request):
    return KerrParams(1.0, request.param)


@pytest.fixture(params=[1, 2, 3], ids=["seed1", "seed2", "seed3"])
def random_metric(request):
    return random_analytic_metric(request.param)
