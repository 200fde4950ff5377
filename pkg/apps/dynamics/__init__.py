"""
LyapEx - Dynamics Module
Systeme und Einschritt-Integratoren für die Tangentialdynamik
"""

from .systems import (
    SystemDef, State, as_state, build_system, available_systems, default_initial_state,
    finite_difference_jacobian, make_linear, make_linear_diagonal, make_lorenz63, make_lorenz96,
)
from .integrators import (
    EXACT_ORDER, CoupledState, SolverMethod, SolverSpec, estimate_order, local_error,
    step, step_nonlinear, tangent_map,
)

__all__ = [
    'SystemDef',
    'State',
    'as_state',
    'build_system',
    'available_systems',
    'default_initial_state',
    'finite_difference_jacobian',
    'make_linear',
    'make_linear_diagonal',
    'make_lorenz63',
    'make_lorenz96',
    'EXACT_ORDER',
    'CoupledState',
    'SolverMethod',
    'SolverSpec',
    'estimate_order',
    'local_error',
    'step',
    'step_nonlinear',
    'tangent_map',
]
