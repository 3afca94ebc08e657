"""Generating curves of cylindrical critical hypersurfaces and checks of the maps between their energies."""

from ._accel import backend_name
from .curve import GraphCurve, PlanarCurve, cylinder_view, resample_uniform, validate_curve
from .energies import (
    EnergyValue,
    closed_flux_identity,
    cylinder_willmore_energy,
    elastic_energy,
    graph_potential_energy,
    tangential_closure_check,
    weighted_area_energy,
)
from .errors import CylcritError, NumericalError, ParameterError
from .families import (
    ElasticParams,
    Exp,
    Log,
    Power,
    SingularParams,
    StationaryParams,
    WillmoreParams,
    lagrangian_eval,
    lagrangian_ode_residual,
    singular_to_elastic,
    singular_to_stationary,
    stationary_to_elastic,
    willmore_to_elastic,
)
from .residuals import (
    ResidualReport,
    elastic_el_residual,
    fit_eta,
    fit_sigma,
    singular_el_residual,
    stationary_el_residual,
    willmore_cyl_residual,
)
from .solvers import (
    InitialData,
    StepControl,
    first_integral_report,
    solve_elastic,
    solve_singular,
    solve_stationary,
    solve_stationary_graph_bvp,
)
from .stability import (
    jacobi_identity_check,
    jacobi_potential,
    min_eigenvalue,
    minimizer_compare,
    second_variation,
    second_variation_substituted,
)

__version__ = "0.1.0"
