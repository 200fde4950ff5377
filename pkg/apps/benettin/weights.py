"""
LyapEx - Gewichtete Mittel
Gewichte w_{n,N}, gewichtete Mittelwerte und Bedingungen für deren Konvergenz
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from apps.benettin.schedules import ScheduleRule, StepsizeSchedule, check_conditions
from apps.errors import InvalidArgumentError

logger = logging.getLogger(__name__)


class WeightScheme(str, Enum):
    """Gewichtsfamilien: adaptive w = h_n/h_0^N, uniform w = 1/N"""
    ADAPTIVE = "adaptive"
    UNIFORM = "uniform"

    @classmethod
    def parse(cls, name: str) -> "WeightScheme":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise InvalidArgumentError(
                f"unknown weight scheme '{name}', expected one of {[w.value for w in cls]}"
            ) from None


def parse_weight_list(text: str) -> list[WeightScheme]:
    """Liest eine Komma-Liste wie "adaptive,uniform" (Duplikate entfernt)."""
    schemes: list[WeightScheme] = []
    for part in text.split(","):
        if not part.strip():
            continue
        scheme = WeightScheme.parse(part)
        if scheme not in schemes:
            schemes.append(scheme)
    return schemes


def weights_vector(scheme: WeightScheme, sched: StepsizeSchedule, N: int) -> np.ndarray:
    """w_{1,N}..w_{N,N}"""
    if N < 1:
        raise InvalidArgumentError(f"horizon N must be >= 1, got {N}")
    if scheme is WeightScheme.UNIFORM:
        return np.full(N, 1.0 / N)
    hs = sched.stepsizes(N)
    return hs / sched.partial_sums(N)[-1]


def weight(scheme: WeightScheme, n: int, N: int, sched: StepsizeSchedule) -> float:
    """Gewicht w_{n,N} des Schemas.

    Raises:
        InvalidArgumentError: n außerhalb von 1..N
    """
    if not (1 <= n <= N):
        raise InvalidArgumentError(f"weight index must satisfy 1 <= n <= N, got n={n}, N={N}")
    if scheme is WeightScheme.UNIFORM:
        return 1.0 / N
    return float(weights_vector(scheme, sched, N)[n - 1])


def weighted_average(
    logR_over_h: Sequence[float] | np.ndarray,
    scheme: WeightScheme,
    sched: StepsizeSchedule,
    N: int,
    weights: Optional[np.ndarray] = None,
) -> float | np.ndarray:
    """μ^ω(N) = Σ_n w_{n,N} · log(R_n)_ii / h_n.

    Args:
        logR_over_h: Werte pro Schritt (Länge >= N, optional N×k)
        scheme: Gewichtsschema
        sched: Schrittweitenfolge
        N: Horizont
        weights: Eigene Gewichte statt des Schemas (nur numerische Prüfung)

    Returns:
        Gewichtetes Mittel (Skalar oder Vektor pro Spalte)
    """
    values = np.asarray(logR_over_h, dtype=np.float64)
    if values.shape[0] < N:
        raise InvalidArgumentError(f"need at least {N} per-step values, got {values.shape[0]}")
    w = weights_vector(scheme, sched, N) if weights is None else np.asarray(weights, dtype=np.float64)
    if w.shape != (N,):
        raise InvalidArgumentError(f"weights must have length {N}, got shape {w.shape}")
    result = w @ values[:N]
    return float(result) if np.ndim(result) == 0 else result


@dataclass(frozen=True)
class WeightConditionReport:
    """Bedingungen (i)-(iii) an die Gewichte.

    (i) w_{n,N} → 0 für festes n; (ii) (w_{n,N}/h_n)_n monoton für jedes N;
    (iii) sup_N w_{N,N}·h_0^N/h_N endlich, als Maximum bis N_max mit Trend.
    """
    vanishing: bool
    monotone: bool
    bounded: bool
    sup_ratio: float
    sup_at: int
    increasing_at_horizon: bool
    method: str = "analytic"
    inconclusive: bool = False
    fitted_s: Optional[float] = None

    @property
    def all_hold(self) -> bool:
        return self.vanishing and self.monotone and self.bounded


def _ratio_sequence(scheme: WeightScheme, sched: StepsizeSchedule, N_max: int) -> np.ndarray:
    """w_{N,N}·h_0^N/h_N für N = 1..N_max"""
    if scheme is WeightScheme.ADAPTIVE:
        return np.ones(N_max)
    hs = sched.stepsizes(N_max)
    ps = sched.partial_sums(N_max)[1:]
    return ps / (np.arange(1, N_max + 1) * hs)


def _numeric_monotone(w_over_h: np.ndarray) -> bool:
    d = np.diff(w_over_h)
    tol = 1e-12 * np.max(np.abs(w_over_h))
    return bool(np.all(d >= -tol) or np.all(d <= tol))


def check_weight_conditions(scheme: WeightScheme, sched: StepsizeSchedule, N_max: int) -> WeightConditionReport:
    """Prüft die Bedingungen (i)-(iii) für Schema und Schrittweiten bis N_max.

    Raises:
        InvalidArgumentError: N_max < 2
    """
    if N_max < 2:
        raise InvalidArgumentError(f"N_max must be >= 2, got {N_max}")

    ratios = _ratio_sequence(scheme, sched, N_max)
    sup_at = int(np.argmax(ratios)) + 1
    tail = ratios[-max(2, N_max // 10):]
    increasing = bool(tail[-1] > tail[0] * (1.0 + 1e-12))

    if scheme is WeightScheme.ADAPTIVE:
        # w_{n,N}/h_n = 1/h_0^N ist konstant in n; (i) gilt genau bei divergenter Summe
        if sched.rule is not ScheduleRule.EXPLICIT:
            return WeightConditionReport(True, True, True, 1.0, 1, False)
        trend = check_conditions(sched, 1.0)
        return WeightConditionReport(
            vanishing=trend.sum_diverges,
            monotone=True,
            bounded=True,
            sup_ratio=1.0,
            sup_at=1,
            increasing_at_horizon=False,
            method="numeric",
            inconclusive=True,
            fitted_s=trend.fitted_s,
        )

    if sched.rule is ScheduleRule.CONSTANT:
        return WeightConditionReport(True, True, True, float(ratios.max()), sup_at, False)

    if sched.rule is ScheduleRule.POWER:
        # h_0^N/(N h_N) → 1/(1-s) für s < 1, wächst wie log N für s = 1
        bounded = float(sched.s) < 1.0
        return WeightConditionReport(True, True, bounded, float(ratios.max()), sup_at, increasing)

    # Explizite Folgen: nur numerisch, Monotonie für jedes N identisch zu N_max
    hs = sched.stepsizes(N_max)
    monotone = _numeric_monotone(1.0 / hs)
    logger.debug(f"Gewichtsbedingungen numerisch geprüft bis N={N_max}")
    return WeightConditionReport(
        vanishing=True,
        monotone=monotone,
        bounded=not increasing,
        sup_ratio=float(ratios.max()),
        sup_at=sup_at,
        increasing_at_horizon=increasing,
        method="numeric",
        inconclusive=True,
    )


def identity_residual_from_weights(w: Sequence[float] | np.ndarray, h: Sequence[float] | np.ndarray) -> float:
    """|ω_N h_0^N/h_N + Σ_{n<N} (ω_n/h_n − ω_{n+1}/h_{n+1}) h_0^n − 1| für normierte Gewichte."""
    w = np.asarray(w, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    if w.shape != h.shape or w.ndim != 1 or w.size == 0:
        raise InvalidArgumentError(f"weights and stepsizes must be equal-length vectors, got {w.shape} and {h.shape}")
    ps = np.cumsum(h)
    q = w / h
    terms = [q[-1] * ps[-1]]
    terms.extend(((q[:-1] - q[1:]) * ps[:-1]).tolist())
    return abs(math.fsum(terms) - 1.0)


def weight_identity_residual(scheme: WeightScheme, sched: StepsizeSchedule, N: int) -> float:
    """Residuum der Gewichtsidentität für Schema und Schrittweiten."""
    if N < 1:
        raise InvalidArgumentError(f"N must be >= 1, got {N}")
    return identity_residual_from_weights(weights_vector(scheme, sched, N), sched.stepsizes(N))
