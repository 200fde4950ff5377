"""
LyapEx - Konvergenzraten
Vergleich von Fehlerfolgen mit log(N)/√N, 1/√N, 1/log(N) und Konstante
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from apps.errors import InvalidArgumentError

MIN_SAMPLES = 10


class RateModel(str, Enum):
    """Asymptotische Fehlermodelle g(N)"""
    LOGN_OVER_SQRTN = "logN_over_sqrtN"
    ONE_OVER_SQRTN = "one_over_sqrtN"
    ONE_OVER_LOGN = "one_over_logN"
    CONSTANT = "constant"

    def log_g(self, ns: np.ndarray) -> np.ndarray:
        if self is RateModel.LOGN_OVER_SQRTN:
            return np.log(np.log(ns)) - 0.5 * np.log(ns)
        if self is RateModel.ONE_OVER_SQRTN:
            return -0.5 * np.log(ns)
        if self is RateModel.ONE_OVER_LOGN:
            return -np.log(np.log(ns))
        return np.zeros_like(ns)

    @classmethod
    def parse(cls, name: "RateModel | str") -> "RateModel":
        try:
            return cls(name)
        except ValueError:
            raise InvalidArgumentError(
                f"unknown rate model '{name}', expected one of {[m.value for m in cls]}"
            ) from None


@dataclass(frozen=True)
class RateFit:
    model: RateModel
    constant: float
    residual: float


def rate_fit(ns: Sequence[float], errors: Sequence[float], model: RateModel | str) -> RateFit:
    """Kleinste-Quadrate-Fit log(error) ≈ log C + log g(N).

    Returns:
        Angepasste Konstante C und RMS-Residuum in log-Skala

    Raises:
        InvalidArgumentError: Unbekanntes Modell, weniger als 10 Werte, nicht-positive Fehler oder N < 2
    """
    model = RateModel.parse(model)
    n = np.asarray(ns, dtype=np.float64)
    e = np.asarray(errors, dtype=np.float64)
    if n.shape != e.shape or n.ndim != 1:
        raise InvalidArgumentError("ns and errors must be vectors of equal length")
    if n.size < MIN_SAMPLES:
        raise InvalidArgumentError(f"rate_fit needs at least {MIN_SAMPLES} samples, got {n.size}")
    if np.any(e <= 0.0) or not np.all(np.isfinite(e)):
        raise InvalidArgumentError("errors must be finite and positive")
    if np.any(n < 2.0):
        raise InvalidArgumentError("horizons must satisfy N >= 2")

    shifted = np.log(e) - model.log_g(n)
    log_c = float(np.mean(shifted))
    residual = float(np.sqrt(np.mean((shifted - log_c) ** 2)))
    return RateFit(model=model, constant=float(np.exp(log_c)), residual=residual)


def best_rate_model(ns: Sequence[float], errors: Sequence[float]) -> RateFit:
    """Modell mit kleinstem Residuum"""
    fits = [rate_fit(ns, errors, model) for model in RateModel]
    return min(fits, key=lambda fit: fit.residual)
