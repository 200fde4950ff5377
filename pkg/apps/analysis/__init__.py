"""
LyapEx - Analysis Module
Analytische Orakel, Schrankenprüfungen und Compound-Matrizen
"""

from .linear_oracle import (
    LinearOracleParams, fit_consistency_constant, linear_relative_global_error, mu1_bounds,
    mu1_closed_form, theoretical_limit, uniform_weight_bounds, uniform_weight_closed_form,
)
from .gronwall import gronwall_bound, gronwall_extremal, relative_error_bound, sample_admissible_sequence
from .exterior import (
    CompoundMatrix, ExteriorReport, InequalityCheck, compound, compound_volume_check,
    exterior_inequalities_check, exterior_lemma_check, wedge, wedge_norm,
)
from .diagnostics import collect_step_maps, fast_invertibility_diagnostic
from .rates import RateFit, RateModel, best_rate_model, rate_fit

__all__ = [
    'LinearOracleParams',
    'fit_consistency_constant',
    'linear_relative_global_error',
    'mu1_bounds',
    'mu1_closed_form',
    'theoretical_limit',
    'uniform_weight_bounds',
    'uniform_weight_closed_form',
    'gronwall_bound',
    'gronwall_extremal',
    'relative_error_bound',
    'sample_admissible_sequence',
    'CompoundMatrix',
    'ExteriorReport',
    'InequalityCheck',
    'compound',
    'compound_volume_check',
    'exterior_inequalities_check',
    'exterior_lemma_check',
    'wedge',
    'wedge_norm',
    'collect_step_maps',
    'fast_invertibility_diagnostic',
    'RateFit',
    'RateModel',
    'best_rate_model',
    'rate_fit',
]
