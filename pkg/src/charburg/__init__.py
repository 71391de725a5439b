"""Exact characteristic solutions of Burgers equations with source terms."""
from ._backend import BACKEND
from .characteristic_solver import (CharacteristicSolution, RootConfig, SolutionSample,
                                    classical_horizon, residual, sample_grid, solve_point)
from .errors import (BlowUpDetected, BracketNotFound, CflViolation, CharburgError,
                     MultivaluedSolution, NoConvergence, OutOfValidity)
from .fv_assessment import ErrorReport, FvConfig, convergence_study, run_scheme
from .initial_conditions import ICKind, InitialCondition
from .ode_oracle import OracleConfig, integrate_characteristic, integrate_equivalent
from .source_terms import (INFINITE, CustomSource, Finite, Infinite, Kind, SourceFamily,
                           flow, primitive, reciprocal_primitive, source_value, validity_time)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CharacteristicSolution", "RootConfig", "SolutionSample",
    "classical_horizon", "residual", "sample_grid", "solve_point",
    "BlowUpDetected", "BracketNotFound", "CflViolation", "CharburgError",
    "MultivaluedSolution", "NoConvergence", "OutOfValidity",
    "ErrorReport", "FvConfig", "convergence_study", "run_scheme",
    "ICKind", "InitialCondition",
    "OracleConfig", "integrate_characteristic", "integrate_equivalent",
    "INFINITE", "CustomSource", "Finite", "Infinite", "Kind", "SourceFamily",
    "flow", "primitive", "reciprocal_primitive", "source_value", "validity_time",
]
