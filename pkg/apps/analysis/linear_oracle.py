"""
LyapEx - Analytisches Orakel für das lineare Diagonalsystem
Geschlossene Form von μ_1(N) beim Euler-Verfahren, Schranken und Grenzwerte
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from apps.benettin.schedules import StepsizeSchedule
from apps.dynamics.integrators import SolverSpec, local_error
from apps.dynamics.systems import State, SystemDef
from apps.errors import InvalidArgumentError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinearOracleParams:
    """Euler auf ẋ = diag(λ_1, λ_2) x mit V_0 = (α_1, α_2)ᵀ"""
    lambda1: float
    lambda2: float
    alpha1: float
    alpha2: float
    schedule: StepsizeSchedule
    N: int

    def __post_init__(self):
        if not self.lambda1 > self.lambda2:
            raise InvalidArgumentError(f"need lambda1 > lambda2, got {self.lambda1} <= {self.lambda2}")
        if self.alpha1 == 0.0:
            raise InvalidArgumentError("alpha1 must be nonzero for the generic formula")
        if self.N < 1:
            raise InvalidArgumentError(f"N must be >= 1, got {self.N}")

    def stepsizes(self) -> np.ndarray:
        hs = self.schedule.stepsizes(self.N)
        if np.any(1.0 + hs * self.lambda2 <= 0.0) or np.any(1.0 + hs * self.lambda1 <= 0.0):
            raise InvalidArgumentError("1 + h_n*lambda must stay positive (logarithm domain)")
        return hs


def mu1_closed_form(params: LinearOracleParams) -> float:
    """Exakter Wert von μ_1(N) für Euler auf dem Diagonalsystem.

    Σlog(1+h_nλ_1)/h_0^N + log|α_1|/h_0^N
    + log(1 + (α_2/α_1)² Π((1+h_nλ_2)/(1+h_nλ_1))²) / (2h_0^N)

    Raises:
        InvalidArgumentError: Logarithmus-Definitionsbereich verletzt
    """
    hs = params.stepsizes()
    t = float(params.schedule.partial_sums(params.N)[-1])
    l1 = np.log1p(hs * params.lambda1)
    l2 = np.log1p(hs * params.lambda2)
    growth = math.fsum(l1)
    log_ratio_sq = 2.0 * (math.fsum(l2) - growth)
    q = (params.alpha2 / params.alpha1) ** 2
    correction = 0.5 * math.log1p(q * math.exp(log_ratio_sq)) if q > 0.0 else 0.0
    return (growth + math.log(abs(params.alpha1)) + correction) / t


def theoretical_limit(h: float, lambda1: float) -> float:
    """Grenzwert log(1+hλ_1)/h bei konstanter Schrittweite.

    Raises:
        InvalidArgumentError: h <= 0 oder 1 + hλ_1 <= 0
    """
    if not h > 0.0:
        raise InvalidArgumentError(f"h must be positive, got {h}")
    if not 1.0 + h * lambda1 > 0.0:
        raise InvalidArgumentError(f"1 + h*lambda1 must be positive, got {1.0 + h * lambda1}")
    return math.log1p(h * lambda1) / h


def mu1_bounds(params: LinearOracleParams) -> tuple[float, float]:
    """Untere und obere Schranke für μ_1(N).

    Raises:
        InvalidArgumentError: h_nλ_1 < −1/2 für ein n (Gültigkeitsbereich der Abschätzung)
    """
    hs = params.stepsizes()
    lam1, lam2 = params.lambda1, params.lambda2
    if np.any(hs * lam1 < -0.5):
        raise InvalidArgumentError("bounds need h_n*lambda1 >= -1/2 for all n")
    t = float(params.schedule.partial_sums(params.N)[-1])
    sum_h2 = math.fsum(hs * hs)
    offset = math.log(abs(params.alpha1)) / t
    q = (params.alpha2 / params.alpha1) ** 2

    lower = lam1 - lam1 * lam1 * sum_h2 / t + offset
    upper = (
        lam1
        + offset
        + q * math.exp(-2.0 * t * abs(lam1 - lam2) + 2.0 * lam1 * lam1 * sum_h2) / (2.0 * t)
    )
    return lower, upper


def uniform_weight_closed_form(lambda1: float, sched: StepsizeSchedule, N: int) -> float:
    """(1/N) Σ log(1+h_nλ_1)/h_n: uniform gewichtetes μ_1 für V_0 = (1,0)ᵀ"""
    hs = sched.stepsizes(N)
    if np.any(1.0 + hs * lambda1 <= 0.0):
        raise InvalidArgumentError("1 + h_n*lambda1 must stay positive")
    return math.fsum(np.log1p(hs * lambda1) / hs) / N


def uniform_weight_bounds(lambda1: float, sched: StepsizeSchedule, N: int) -> tuple[float, float]:
    """λ_1 − λ_1²·h_0^N/N <= μ_1^ω(N) <= λ_1 für uniforme Gewichte"""
    t = float(sched.partial_sums(N)[-1])
    return lambda1 - lambda1 * lambda1 * t / N, lambda1


def linear_relative_global_error(diag: Sequence[float], sched: StepsizeSchedule, N: int) -> float:
    """‖L_0^N − Φ_0^N‖/‖L_0^N‖ für Euler auf einem Diagonalsystem (geschlossene Form)."""
    lam = np.asarray(diag, dtype=np.float64)
    hs = sched.stepsizes(N)
    t = float(sched.partial_sums(N)[-1])
    factors = 1.0 + np.outer(hs, lam)
    sign = np.prod(np.sign(factors), axis=0)
    with np.errstate(divide="ignore"):
        log_phi = np.sum(np.log(np.abs(factors)), axis=0)
    lam_max = float(lam.max())
    # Skaliert mit e^{−λ_max t}, damit nichts überläuft
    exact = np.exp((lam - lam_max) * t)
    numeric = sign * np.exp(log_phi - lam_max * t)
    return float(np.max(np.abs(exact - numeric)))


def fit_consistency_constant(sys: SystemDef, solver: SolverSpec, x: State, h_list: Sequence[float]) -> float:
    """Empirische Konsistenzkonstante c = max_h local_error(h)/h^{p+1}."""
    p = solver.order_p
    if math.isinf(p):
        return 0.0
    ratios = [local_error(sys, solver, x, h) / h ** (p + 1.0) for h in h_list]
    c = max(ratios)
    logger.debug(f"Konsistenzkonstante geschätzt: c={c:.4g} (p={p:g})")
    return c
