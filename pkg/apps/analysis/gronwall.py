"""
LyapEx - Diskretes Gronwall-Lemma
Schranke, extremale Folge und relative globale Fehlerschranke
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from apps.benettin.schedules import StepsizeSchedule
from apps.errors import InvalidArgumentError


def _nonnegative(b: Sequence[float] | np.ndarray, N: int) -> np.ndarray:
    arr = np.asarray(b, dtype=np.float64)
    if arr.ndim != 1:
        raise InvalidArgumentError("b must be a one-dimensional sequence")
    if N < 0 or N > arr.size:
        raise InvalidArgumentError(f"N must satisfy 0 <= N <= len(b) = {arr.size}, got {N}")
    arr = arr[:N]
    if np.any(arr < 0.0) or not np.all(np.isfinite(arr)):
        raise InvalidArgumentError("b must contain finite nonnegative entries")
    return arr


def gronwall_bound(b: Sequence[float] | np.ndarray, N: int) -> float:
    """(Σ_{n<=N} b_n)·exp(Σ_{n<=N} b_n)

    Raises:
        InvalidArgumentError: Negative Einträge
    """
    B = math.fsum(_nonnegative(b, N))
    return B * math.exp(B)


def gronwall_extremal(b: Sequence[float] | np.ndarray) -> np.ndarray:
    """Extremale Folge c mit Gleichheit in a_N <= Σ_{n<N} (1+a_n) b_{n+1}.

    c_0 = 0, c_{N+1} = c_N (1 + b_{N+1}) + b_{N+1}; Rückgabe c_0..c_len(b).
    """
    arr = _nonnegative(b, len(b))
    c = np.zeros(arr.size + 1)
    for n, bn in enumerate(arr):
        c[n + 1] = c[n] * (1.0 + bn) + bn
    return c


def sample_admissible_sequence(b: Sequence[float] | np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Zufällige Folge a mit a_0 = 0 und a_N <= Σ_{n<N} (1+a_n) b_{n+1}."""
    arr = _nonnegative(b, len(b))
    a = np.zeros(arr.size + 1)
    running = 0.0
    for n, bn in enumerate(arr):
        running += (1.0 + a[n]) * bn
        a[n + 1] = rng.uniform(0.0, 1.0) * running
    return a


def relative_error_bound(c: float, sched: StepsizeSchedule, p: float, N: int) -> float:
    """(Σ_{n<=N} c·h_n^{p+1})·exp(Σ c·h_n^{p+1})

    Raises:
        InvalidArgumentError: c <= 0 oder p <= 0
    """
    if not c > 0.0:
        raise InvalidArgumentError(f"consistency constant c must be positive, got {c}")
    if not p > 0.0:
        raise InvalidArgumentError(f"order p must be positive, got {p}")
    return gronwall_bound(c * sched.stepsizes(N) ** (p + 1.0), N)
