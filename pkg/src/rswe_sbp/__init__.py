"""Energy-stable SBP-SAT solver for the linear and nonlinear rotating shallow water equations."""

from rswe_sbp._accel import backend_name
from rswe_sbp.boundary import BcFamily, BcKind, BoundarySpec, PenaltyOverrides, PenaltySet
from rswe_sbp.config import SimConfig, load_config
from rswe_sbp.diagnostics import MmsSolution, convergence_rates, error_l2, gaussian_ic, total_energy
from rswe_sbp.errors import (
    BlowupError,
    ConfigError,
    DomainError,
    MeshValidityError,
    NumericalError,
    PositivityError,
    RsweError,
)
from rswe_sbp.grid import CartesianMap, Grid2D, PanelMap, SeashellMap, build_grid, make_mesh, map_reference
from rswe_sbp.linear import LinearRSWE, linear_energy_rate, linear_rhs
from rswe_sbp.nonlinear import NonlinearRSWE, nonlinear_energy_rate, nonlinear_rhs
from rswe_sbp.sbp import SbpOperator1D, TensorLayout, apply_dq, apply_dr, build_sbp_d1, inner_product
from rswe_sbp.state import FieldState, PhysParams
from rswe_sbp.timeint import compute_dt, integrate, lsrk45_step

__version__ = "0.1.0"

__all__ = [
    "BcFamily", "BcKind", "BlowupError", "BoundarySpec", "CartesianMap", "ConfigError", "DomainError",
    "FieldState", "Grid2D", "LinearRSWE", "MeshValidityError", "MmsSolution", "NonlinearRSWE",
    "NumericalError", "PanelMap", "PenaltyOverrides", "PenaltySet", "PhysParams", "PositivityError",
    "RsweError", "SbpOperator1D", "SeashellMap", "SimConfig", "TensorLayout", "apply_dq", "apply_dr",
    "backend_name", "build_grid", "build_sbp_d1", "compute_dt", "convergence_rates", "error_l2",
    "gaussian_ic", "inner_product", "integrate", "linear_energy_rate", "linear_rhs", "load_config",
    "lsrk45_step", "make_mesh", "map_reference", "nonlinear_energy_rate", "nonlinear_rhs",
    "total_energy",
]
