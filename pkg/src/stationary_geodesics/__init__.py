"""Connection, geodesics and connectedness for standard stationary spacetimes.

A standard stationary metric on ``R x M0`` is ``-beta dt^2 + g_R + 2 <delta, .> dt``
with ``beta > 0``.  The package provides its Levi-Civita connection in closed
form, a reduced spatial geodesic integrator, Kerr/Schwarzschild specialisations
and numeric (non-)connectedness tools.
"""
__version__ = "0.1.0"

from .errors import (  # noqa: E402
    AxisError,
    ContinuationStall,
    ConvergenceError,
    DomainError,
    DomainExit,
    GeodesicsError,
    HorizonError,
    IntegrationFailure,
    MaxStepsExceeded,
    NoBracket,
    NonpositiveQ,
    SingularChartError,
    SingularityError,
    StepUnderflow,
    TangencyError,
    UsageError,
)
from .metric import (  # noqa: E402
    RiemannianChart,
    ScalarField,
    SpacetimeVector,
    StationaryMetric,
    assemble_metric,
    local_geometry,
)
from .connection import (  # noqa: E402
    christoffel_closed_form,
    conn_dt_dt,
    conn_mixed,
    conn_spatial,
    delta_derivative_parts,
    fd_christoffel,
    hessian_phi,
)
from .geodesic import (  # noqa: E402
    ConservedPair,
    GeodesicState,
    IntegratorConfig,
    Trajectory,
    coefficient_fields,
    integrate_geodesic,
    normalization_q,
    oracle_geodesic_4d,
    reduced_rhs,
    state_from_velocity,
    t_rate_from_energy,
)
from .kerr import (  # noqa: E402
    BLPoint,
    KerrIntegrals,
    KerrParams,
    RegionSpec,
    boundary_hessian,
    fit_kerr_integrals,
    kerr_first_integral_residuals,
    kerr_metric,
    phi_a,
    region_membership,
    space_convexity_witness,
)
from .connect import (  # noqa: E402
    ConnectionSolution,
    Endpoints,
    RadialProblem,
    constants_from_turning_point,
    h_poly,
    lemma1_limits,
    nonconnect_certificate,
    solve_connection,
    transfer_integrals,
    verify_connection,
)
