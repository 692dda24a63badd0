import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stationary_geodesics.builtin import flat_static, random_analytic_metric, static_metric
from stationary_geodesics.connection import (
    christoffel_closed_form,
    conn_dt_dt,
    conn_mixed,
    conn_mixed_regrouped,
    conn_spatial,
    delta_derivative_parts,
    fd_christoffel,
    hessian_phi,
    relative_error,
)
from stationary_geodesics.errors import DomainError, SingularChartError
from stationary_geodesics.kerr import KerrParams, kerr_metric
from stationary_geodesics.metric import (
    ScalarField,
    SpacetimeVector,
    StationaryMetric,
    assemble_metric,
    local_geometry,
)


def rotation_metric(beta0=2.0, omega=0.3):
    """Flat space, constant lapse and the rotational Killing field omega (-y, x, 0)."""
    eye = np.eye(3)
    J = omega * np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    return StationaryMetric.from_functions(
        3, lambda x: eye, lambda x: beta0, lambda x: J @ x,
        dg=lambda x: np.zeros((3, 3, 3)), dbeta=lambda x: np.zeros(3), ddelta=lambda x: J,
    )


def kerr_point(rng, m=1.0):
    return np.array([rng.uniform(3.0, 10.0) * m, rng.uniform(0.3, np.pi - 0.3), rng.uniform(0, 2 * np.pi)])


@given(seed=st.integers(0, 10_000), x=st.lists(st.floats(-3, 3), min_size=3, max_size=3))
@settings(max_examples=40, deadline=None)
def test_block_inverse_is_inverse(seed, x):
    G, Ginv, lam = assemble_metric(random_analytic_metric(seed), np.array(x))
    assert np.max(np.abs(G @ Ginv - np.eye(4))) <= 1e-12


def test_lambda_definition(rng):
    metric = random_analytic_metric(5)
    x = rng.normal(size=3)
    geo = local_geometry(metric, x)
    assert geo.Lam == pytest.approx(-1 / (geo.beta + geo.delta @ geo.g @ geo.delta), rel=1e-14)


def test_closed_form_matches_fd_on_kerr(kerr_params, rng):
    metric = kerr_metric(kerr_params)
    for _ in range(10):
        x = kerr_point(rng)
        assert relative_error(christoffel_closed_form(metric, x), fd_christoffel(metric, x)) <= 1e-6


def test_closed_form_matches_fd_on_random_metrics(random_metric, rng):
    for _ in range(10):
        x = rng.uniform(-2, 2, 3)
        assert relative_error(christoffel_closed_form(random_metric, x), fd_christoffel(random_metric, x)) <= 1e-6


def test_fd_oracle_is_second_order():
    metric = random_analytic_metric(7)
    x = np.array([0.3, -0.2, 0.5])
    exact = christoffel_closed_form(metric, x)
    e1 = np.max(np.abs(fd_christoffel(metric, x, 0.04) - exact))
    e2 = np.max(np.abs(fd_christoffel(metric, x, 0.02) - exact))
    assert 3.5 < e1 / e2 < 4.5


def test_christoffel_symmetry(rng):
    metric = random_analytic_metric(11)
    gamma = christoffel_closed_form(metric, rng.normal(size=3))
    assert np.allclose(gamma, gamma.transpose(0, 2, 1), atol=1e-15)


@given(seed=st.integers(0, 10_000), x=st.lists(st.floats(-3, 3), min_size=3, max_size=3),
       v=st.lists(st.floats(-2, 2), min_size=3, max_size=3))
@settings(max_examples=40, deadline=None)
def test_mixed_term_groupings_agree(seed, x, v):
    metric = random_analytic_metric(seed)
    a = conn_mixed(metric, x, v).as_array()
    b = conn_mixed_regrouped(metric, x, v).as_array()
    assert np.max(np.abs(a - b)) <= 1e-12 * max(1.0, np.max(np.abs(a)))


def test_static_case_reduces_to_warped_product(rng):
    beta = lambda x: 2.0 + np.sin(x[0]) * 0.5
    dbeta = lambda x: np.array([0.5 * np.cos(x[0]), 0.0, 0.0])
    metric = static_metric(beta, dbeta)
    x, V, W = rng.normal(size=(3, 3))
    geo = local_geometry(metric, x)
    dtdt = conn_dt_dt(metric, x)
    assert dtdt.t_part == 0
    assert np.allclose(dtdt.v_part, 0.5 * geo.grad_beta, atol=1e-15)
    sp = conn_spatial(metric, x, V, W)
    assert sp.t_part == 0
    assert np.allclose(sp.v_part, geo.christoffel_contract(V, W), atol=1e-15)
    mx = conn_mixed(metric, x, V)
    assert mx.t_part == pytest.approx(geo.dbeta @ V / (2 * geo.beta), rel=1e-14)
    assert np.allclose(mx.v_part, 0.0, atol=1e-15)


def test_schwarzschild_has_no_shift(rng):
    metric = kerr_metric(KerrParams(1.0, 0.0))
    x = kerr_point(rng)
    geo = local_geometry(metric, x)
    assert np.all(geo.delta == 0)
    assert conn_dt_dt(metric, x).t_part == 0
    assert conn_mixed(metric, x, rng.normal(size=3)).v_part == pytest.approx(np.zeros(3), abs=1e-15)


def test_killing_shift_has_vanishing_symmetric_part(rng):
    metric = rotation_metric()
    x, V, W = rng.normal(size=(3, 3))
    sym, rot = delta_derivative_parts(metric, x, V, W)
    assert sym == pytest.approx(0.0, abs=1e-15)
    assert rot == pytest.approx(2 * 0.3 * (V[0] * W[1] - V[1] * W[0]), rel=1e-12)


def test_flat_static_connection_vanishes():
    gamma = christoffel_closed_form(flat_static(), np.array([1.0, 2.0, 3.0]))
    assert np.all(gamma == 0)


def _hessian_oracle(metric, field, x, vtilde):
    gamma = fd_christoffel(metric, x)
    V = vtilde.as_array()
    d1 = np.concatenate(([0.0], field.dphi(x)))
    d2 = np.zeros((4, 4))
    d2[1:, 1:] = field.d2phi(x)
    return V @ d2 @ V - np.einsum("kij,i,j,k->", gamma, V, V, d1)


def test_hessian_matches_coordinate_formula(rng):
    metric = random_analytic_metric(3)
    field = ScalarField(
        lambda x: np.sin(x[0]) * x[1] + x[2] ** 2,
        lambda x: np.array([np.cos(x[0]) * x[1], np.sin(x[0]), 2 * x[2]]),
        lambda x: np.array([[-np.sin(x[0]) * x[1], np.cos(x[0]), 0.0],
                            [np.cos(x[0]), 0.0, 0.0], [0.0, 0.0, 2.0]]),
    )
    for _ in range(10):
        x = rng.uniform(-1, 1, 3)
        v = SpacetimeVector(rng.normal(), rng.normal(size=3))
        h = hessian_phi(metric, field, x, v)
        assert h == pytest.approx(_hessian_oracle(metric, field, x, v), rel=1e-6, abs=1e-8)


def test_hessian_is_quadratic_form(rng):
    """Polarisation: H(u+w) + H(u-w) = 2 H(u) + 2 H(w)."""
    metric = kerr_metric(KerrParams(1.0, 0.7))
    field = ScalarField(lambda x: x[0] ** 2, lambda x: np.array([2 * x[0], 0, 0]),
                        lambda x: np.diag([2.0, 0, 0]))
    x = kerr_point(rng)
    u = SpacetimeVector(rng.normal(), rng.normal(size=3))
    w = SpacetimeVector(rng.normal(), rng.normal(size=3))
    H = lambda v: hessian_phi(metric, field, x, v)
    assert H(u + w) + H(u - w) == pytest.approx(2 * H(u) + 2 * H(w), rel=1e-12)
    assert H(u * 3.0) == pytest.approx(9 * H(u), rel=1e-12)


def test_domain_errors():
    beta = lambda x: x[0]
    metric = static_metric(beta, lambda x: np.array([1.0, 0, 0]))
    with pytest.raises(DomainError):
        conn_dt_dt(metric, np.array([-1.0, 0, 0]))
    bad = StationaryMetric.from_functions(2, lambda x: np.diag([1.0, -1.0]), lambda x: 1.0,
                                          lambda x: np.zeros(2))
    with pytest.raises(SingularChartError):
        local_geometry(bad, np.zeros(2))
    with pytest.raises(ValueError):
        local_geometry(flat_static(), np.zeros(2))
    assert not metric.in_domain(np.array([-1.0, 0, 0]))


def test_fd_derivatives_installed_when_missing(rng):
    exact = random_analytic_metric(4)
    approx = StationaryMetric.from_functions(3, exact.chart.g, exact.beta, exact.delta)
    assert approx.derivative_source == "finite-difference"
    x = rng.uniform(-1, 1, 3)
    assert relative_error(christoffel_closed_form(approx, x), christoffel_closed_form(exact, x)) <= 1e-7
