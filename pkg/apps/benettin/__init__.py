"""
LyapEx - Benettin Module
Schrittweitenfolgen, Gewichte und der Benettin-Algorithmus
"""

from .schedules import (
    ConditionReport, ScheduleRule, StepsizeSchedule, check_conditions, cumulative,
    p_series_partial_sum, p_series_zeta_estimate, parse_schedule, stepsize,
)
from .weights import (
    WeightConditionReport, WeightScheme, check_weight_conditions, identity_residual_from_weights,
    parse_weight_list, weight, weight_identity_residual, weighted_average, weights_vector,
)
from .runner import RunConfig, RunResult, TransientSpec, qr_pos, replay_averages, run, run_transient

__all__ = [
    'ConditionReport',
    'ScheduleRule',
    'StepsizeSchedule',
    'check_conditions',
    'cumulative',
    'p_series_partial_sum',
    'p_series_zeta_estimate',
    'parse_schedule',
    'stepsize',
    'WeightConditionReport',
    'WeightScheme',
    'check_weight_conditions',
    'identity_residual_from_weights',
    'parse_weight_list',
    'weight',
    'weight_identity_residual',
    'weighted_average',
    'weights_vector',
    'RunConfig',
    'RunResult',
    'TransientSpec',
    'qr_pos',
    'replay_averages',
    'run',
    'run_transient',
]
