"""
LyapEx - Diagnose schneller Invertierbarkeit
Singulärwert-Quotienten gespeicherter Schrittabbildungen entlang einer Trajektorie
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np
from scipy.linalg import svdvals

from apps.analysis.exterior import MAX_COMPOUND_DIM, MAX_ORACLE_STEPS
from apps.benettin.runner import RunConfig, run_transient
from apps.dynamics.integrators import CoupledState, step
from apps.errors import InvalidArgumentError, UnsupportedOperationError

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 500


def collect_step_maps(config: RunConfig) -> list[np.ndarray]:
    """Tangentiale Schrittabbildungen Φ_1..Φ_N nach dem Transient.

    Raises:
        UnsupportedOperationError: d > 8 oder N > 1000
    """
    d, N = config.system.dim, config.N
    if d > MAX_COMPOUND_DIM or N > MAX_ORACLE_STEPS:
        raise UnsupportedOperationError(
            f"step maps are only stored for d <= {MAX_COMPOUND_DIM}, N <= {MAX_ORACLE_STEPS} (got d={d}, N={N})"
        )
    x = run_transient(config)
    maps = []
    for h in config.schedule.stepsizes(N):
        cs = step(config.system, config.solver, CoupledState(x=x, V=np.eye(d)), float(h))
        maps.append(cs.V)
        x = cs.x
    return maps


def _product(maps: Sequence[np.ndarray], start: int, stop: int, d: int) -> np.ndarray:
    """Φ_{stop} ⋯ Φ_{start+1}"""
    P = np.eye(d)
    for M in maps[start:stop]:
        P = M @ P
    return P


def _log_top_singular(M: np.ndarray, L: int) -> float:
    return float(np.sum(np.log(svdvals(M)[:L])))


def fast_invertibility_diagnostic(
    step_maps: Sequence[np.ndarray],
    L: int,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> float:
    """Minimum über gezogene Zerlegungen (a, b) von
    Π_{i<=L} σ_i(Φ_0^b) / (σ_i(Φ_a^b)·σ_i(Φ_0^a)).

    Ein positiver Wert stützt die Hypothese, ist aber kein Beweis.

    Raises:
        InvalidArgumentError: Leere Liste oder L außerhalb 1..d
        UnsupportedOperationError: d > 8 oder mehr als 1000 Abbildungen
    """
    if not step_maps:
        raise InvalidArgumentError("need at least one stored step map")
    d = step_maps[0].shape[0]
    M = len(step_maps)
    if d > MAX_COMPOUND_DIM or M > MAX_ORACLE_STEPS:
        raise UnsupportedOperationError(
            f"diagnostic is limited to d <= {MAX_COMPOUND_DIM} and {MAX_ORACLE_STEPS} maps (got d={d}, {M})"
        )
    if not (1 <= L <= d):
        raise InvalidArgumentError(f"L must satisfy 1 <= L <= d = {d}, got {L}")
    if samples < 1:
        raise InvalidArgumentError(f"sample budget must be positive, got {samples}")

    heads = [np.eye(d)]
    for Phi in step_maps:
        heads.append(Phi @ heads[-1])

    rng = np.random.default_rng(seed)
    best = np.inf
    best_split = (0, 0)
    for _ in range(samples):
        a = int(rng.integers(0, M + 1))
        b = int(rng.integers(a, M + 1))
        head = heads[a]
        tail = _product(step_maps, a, b, d)
        log_ratio = (
            _log_top_singular(tail @ head, L)
            - _log_top_singular(tail, L)
            - _log_top_singular(head, L)
        )
        if log_ratio < best:
            best, best_split = log_ratio, (a, b)

    value = float(np.exp(best))
    logger.info(f"Invertierbarkeits-Diagnose L={L}: min ratio {value:.6g} bei Zerlegung {best_split}")
    return value
