import numpy as np
import pytest

from stationary_geodesics.errors import DomainError, DomainExit, StepUnderflow
from stationary_geodesics.ode import _A, _C, _E, IntegratorConfig, dopri5


def test_tableau_consistency():
    for i in range(1, 7):
        assert _A[i].sum() == pytest.approx(_C[i], abs=1e-15)
    assert _E.sum() == pytest.approx(0.0, abs=1e-16)


def test_harmonic_oscillator_accuracy():
    rec = dopri5(lambda s, y: np.array([y[1], -y[0]]), 0.0, np.array([1.0, 0.0]), 10.0,
                 IntegratorConfig(rel_tol=1e-11, abs_tol=1e-13))
    assert rec.s[-1] == 10.0
    assert np.allclose(rec.y[-1], [np.cos(10.0), -np.sin(10.0)], atol=1e-9)


def test_fifth_order_convergence():
    loose = dict(rel_tol=1.0, abs_tol=1.0, min_step=1e-14)
    errs = []
    for h in (0.1, 0.05):
        rec = dopri5(lambda s, y: y, 0.0, np.array([1.0]), 1.0, IntegratorConfig(max_step=h, **loose))
        errs.append(abs(rec.y[-1, 0] - np.e))
    assert 20 < errs[0] / errs[1] < 45


def test_backward_integration():
    rec = dopri5(lambda s, y: -y, 1.0, np.array([np.exp(-1.0)]), 0.0, IntegratorConfig())
    assert rec.y[-1, 0] == pytest.approx(1.0, rel=1e-9)
    assert np.all(np.diff(rec.s) < 0)


def test_domain_exit_carries_accepted_steps():
    def fun(s, y):
        if y[0] > 1.0:
            raise DomainError("outside")
        return np.array([1.0])

    with pytest.raises(DomainExit) as info:
        dopri5(fun, 0.0, np.array([0.0]), 5.0, IntegratorConfig())
    rec = info.value.state
    assert rec.y[-1, 0] <= 1.0 and rec.y[-1, 0] > 1.0 - 1e-6


def test_step_underflow_before_singularity():
    with pytest.raises(StepUnderflow):
        dopri5(lambda s, y: np.array([1.0 / (1.0 - s) ** 2]), 0.0, np.array([1.0]), 2.0,
               IntegratorConfig(min_step=1e-6))


def test_overflow_is_treated_as_domain_exit():
    with pytest.raises(DomainExit):
        dopri5(lambda s, y: y * y, 0.0, np.array([1.0]), 2.0, IntegratorConfig(min_step=1e-10))


@pytest.mark.parametrize("kwargs", [dict(rel_tol=0.0), dict(abs_tol=-1.0), dict(min_step=1.0, max_step=0.1),
                                    dict(max_steps=0)])
def test_config_invariants(kwargs):
    with pytest.raises(ValueError):
        IntegratorConfig(**kwargs)
