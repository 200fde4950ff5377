"""
LyapEx - Schrittweitenfolgen
h_n = h·h̃_n, Partialsummen h_m^n und Prüfung der Konvergenzbedingungen
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from scipy.special import zeta

from apps.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

# Mindestanzahl Terme für den Potenzgesetz-Fit expliziter Folgen
MIN_FIT_TERMS = 8


class ScheduleRule(str, Enum):
    """Verfügbare Schrittweitenregeln"""
    CONSTANT = "constant"
    POWER = "power"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class StepsizeSchedule:
    """Schrittweitenfolge h_n = h·h̃_n mit 0 < h̃_n <= 1.

    Indizes starten bei 1, h_0 wird nie als Schritt verwendet.
    """
    h: float
    rule: ScheduleRule = ScheduleRule.CONSTANT
    s: Optional[float] = None
    values: tuple[float, ...] = field(default_factory=tuple)
    source: Optional[str] = None

    def __post_init__(self):
        if not (0.0 < self.h <= 1.0):
            raise InvalidArgumentError(f"schedule scaling h must lie in (0, 1], got {self.h}")
        if self.rule is ScheduleRule.POWER:
            if self.s is None or not (0.0 < self.s <= 1.0):
                raise InvalidArgumentError(f"power exponent s must lie in (0, 1], got {self.s}")
        if self.rule is ScheduleRule.EXPLICIT:
            if not self.values:
                raise InvalidArgumentError("explicit schedule needs at least one value")
            vals = np.asarray(self.values, dtype=np.float64)
            if not np.all((vals > 0.0) & (vals <= 1.0)):
                raise InvalidArgumentError("explicit stepsize rule values must lie in (0, 1]")

    # Konstruktoren ----------------------------------------------------------

    @classmethod
    def constant(cls, h: float) -> "StepsizeSchedule":
        return cls(h=float(h), rule=ScheduleRule.CONSTANT)

    @classmethod
    def power(cls, s: float, h: float) -> "StepsizeSchedule":
        return cls(h=float(h), rule=ScheduleRule.POWER, s=float(s))

    @classmethod
    def explicit(cls, values: Sequence[float], h: float = 1.0, source: Optional[str] = None) -> "StepsizeSchedule":
        return cls(
            h=float(h),
            rule=ScheduleRule.EXPLICIT,
            values=tuple(float(v) for v in values),
            source=source,
        )

    # Darstellung ------------------------------------------------------------

    @property
    def description(self) -> str:
        if self.rule is ScheduleRule.CONSTANT:
            return f"constant h={self.h:g}"
        if self.rule is ScheduleRule.POWER:
            return f"{self.h:g}/n^{self.s:g}"
        return f"explicit({len(self.values)} values) h={self.h:g}"

    def to_rule_text(self) -> str:
        """Rückgabe in Konfigurationssyntax (constant, power:<s>, explicit:<path>)."""
        if self.rule is ScheduleRule.CONSTANT:
            return "constant"
        if self.rule is ScheduleRule.POWER:
            return f"power:{self.s!r}"
        if self.source is None:
            raise InvalidArgumentError("explicit schedule without source file cannot be serialised")
        return f"explicit:{self.source}"

    # Folgen -----------------------------------------------------------------

    def rule_value(self, n: int) -> float:
        """Normierte Regel h̃_n"""
        if n < 1:
            raise InvalidArgumentError(f"step index starts at 1, got {n}")
        if self.rule is ScheduleRule.CONSTANT:
            return 1.0
        if self.rule is ScheduleRule.POWER:
            return 1.0 / float(n) ** self.s
        if n > len(self.values):
            raise InvalidArgumentError(
                f"explicit schedule has {len(self.values)} values, step {n} requested"
            )
        return self.values[n - 1]

    def rule_values(self, N: int) -> np.ndarray:
        """h̃_1..h̃_N als Vektor"""
        if N < 0:
            raise InvalidArgumentError(f"horizon must be non-negative, got {N}")
        if self.rule is ScheduleRule.CONSTANT:
            return np.ones(N)
        if self.rule is ScheduleRule.POWER:
            return 1.0 / np.power(np.arange(1, N + 1, dtype=np.float64), self.s)
        if N > len(self.values):
            raise InvalidArgumentError(
                f"explicit schedule has {len(self.values)} values, {N} steps requested"
            )
        return np.asarray(self.values[:N], dtype=np.float64)

    def stepsizes(self, N: int) -> np.ndarray:
        """h_1..h_N als Vektor"""
        if self.rule is ScheduleRule.POWER:
            return self.h / np.power(np.arange(1, N + 1, dtype=np.float64), self.s)
        return self.h * self.rule_values(N)

    def partial_sums(self, N: int) -> np.ndarray:
        """h_0^0, h_0^1, ..., h_0^N (Länge N+1, beginnt mit 0)"""
        out = np.zeros(N + 1)
        np.cumsum(self.stepsizes(N), out=out[1:])
        return out


def stepsize(sched: StepsizeSchedule, n: int) -> float:
    """Schrittweite h_n = h·h̃_n.

    Raises:
        InvalidArgumentError: n < 1
    """
    if sched.rule is ScheduleRule.POWER:
        if n < 1:
            raise InvalidArgumentError(f"step index starts at 1, got {n}")
        return sched.h / float(n) ** sched.s
    return sched.h * sched.rule_value(n)


def cumulative(sched: StepsizeSchedule, m: int, n: int) -> float:
    """Partialsumme h_m^n = h_{m+1} + ... + h_n.

    Raises:
        InvalidArgumentError: m > n oder negative Indizes
    """
    if m < 0 or m > n:
        raise InvalidArgumentError(f"cumulative needs 0 <= m <= n, got m={m}, n={n}")
    if m == n:
        return 0.0
    ps = sched.partial_sums(n)
    return float(ps[n] - ps[m])


def parse_schedule(rule: str, h: float) -> StepsizeSchedule:
    """Liest die Konfigurationssyntax "constant", "power:<s>", "explicit:<path>".

    Raises:
        InvalidArgumentError: Unbekannte Regel, fehlende Datei oder ungültige Werte
    """
    text = rule.strip()
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower()
    if kind == ScheduleRule.CONSTANT.value and not arg:
        return StepsizeSchedule.constant(h)
    if kind == ScheduleRule.POWER.value:
        try:
            s = float(arg)
        except ValueError:
            raise InvalidArgumentError(f"power rule needs a numeric exponent, got '{arg}'") from None
        return StepsizeSchedule.power(s, h)
    if kind == ScheduleRule.EXPLICIT.value and arg:
        path = Path(arg.strip())
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise InvalidArgumentError(f"cannot read explicit schedule file {path}: {exc}") from exc
        try:
            values = [float(line) for line in (ln.strip() for ln in lines) if line and not line.startswith("#")]
        except ValueError as exc:
            raise InvalidArgumentError(f"explicit schedule file {path} has a non-numeric line: {exc}") from exc
        logger.debug(f"Explizite Schrittweiten geladen: {path} ({len(values)} Werte)")
        return StepsizeSchedule.explicit(values, h, source=str(path))
    raise InvalidArgumentError(
        f"unknown schedule rule '{rule}', expected constant, power:<s> or explicit:<path>"
    )


@dataclass(frozen=True)
class ConditionReport:
    """Ergebnis der Prüfung Σh̃_n = ∞, Σh̃_n^{p+1} < ∞ und Σh̃_n²/h̃_0^N → 0.

    Für explizite Regeln sind die Aussagen numerisch (inconclusive=True).
    """
    sum_diverges: bool
    p_series_converges: bool
    weak_condition_holds: bool
    p: float
    method: str = "analytic"
    inconclusive: bool = False
    fitted_s: Optional[float] = None
    partial_sum: Optional[float] = None
    p_series_partial_sum: Optional[float] = None

    @property
    def theorem_conditions_hold(self) -> bool:
        return self.sum_diverges and self.p_series_converges


def _fit_power_exponent(values: np.ndarray) -> float:
    """Steigung eines Potenzgesetzes h̃_n ≈ C n^{-s} auf der hinteren Hälfte."""
    n = np.arange(1, values.size + 1, dtype=np.float64)
    start = values.size // 2 if values.size >= 2 * MIN_FIT_TERMS else 0
    if values.size - start < 2:
        return 0.0
    slope, _ = np.polyfit(np.log(n[start:]), np.log(values[start:]), 1)
    return float(-slope)


def check_conditions(sched: StepsizeSchedule, p: float) -> ConditionReport:
    """Prüft die Schrittweitenbedingungen des Konvergenzsatzes.

    Args:
        sched: Schrittweitenfolge
        p: Konsistenzordnung des Verfahrens (> 0, math.inf für exakt)

    Returns:
        ConditionReport mit analytischen (constant/power) oder numerischen Aussagen

    Raises:
        InvalidArgumentError: p <= 0
    """
    if not p > 0:
        raise InvalidArgumentError(f"order p must be positive, got {p}")

    if sched.rule is ScheduleRule.CONSTANT:
        return ConditionReport(
            sum_diverges=True,
            p_series_converges=False,
            weak_condition_holds=False,
            p=p,
        )

    if sched.rule is ScheduleRule.POWER:
        s = float(sched.s)
        return ConditionReport(
            sum_diverges=s <= 1.0,
            p_series_converges=s * (p + 1.0) > 1.0,
            weak_condition_holds=0.0 < s <= 1.0,
            p=p,
        )

    values = np.asarray(sched.values, dtype=np.float64)
    s_hat = _fit_power_exponent(values)
    report = ConditionReport(
        sum_diverges=s_hat <= 1.0,
        p_series_converges=s_hat * (p + 1.0) > 1.0,
        weak_condition_holds=0.0 < s_hat <= 1.0,
        p=p,
        method="numeric",
        inconclusive=True,
        fitted_s=s_hat,
        partial_sum=float(values.sum()),
        p_series_partial_sum=float(np.sum(values ** (p + 1.0))),
    )
    logger.info(
        f"Explizite Schrittweiten: Potenzgesetz-Exponent {s_hat:.3f} aus {values.size} Werten, "
        f"Bedingungen nur numerisch geprüft"
    )
    return report


def p_series_partial_sum(sched: StepsizeSchedule, p: float, N: int) -> float:
    """Σ_{n<=N} h̃_n^{p+1}"""
    return float(np.sum(sched.rule_values(N) ** (p + 1.0)))


def p_series_zeta_estimate(s: float, p: float, N: int) -> float:
    """Σ_{n<=N} n^{-s(p+1)} über Riemann- minus Hurwitz-Zeta.

    Raises:
        InvalidArgumentError: s(p+1) <= 1 (Reihe divergiert)
    """
    r = s * (p + 1.0)
    if r <= 1.0:
        raise InvalidArgumentError(f"p-series with exponent {r} diverges, no zeta estimate")
    return float(zeta(r) - zeta(r, N + 1))
