"""
LyapEx - Prometheus Metrics Exporter
Kennzahlen zu Benettin-Läufen, Verifikationen und Reproduktionen
"""

from datetime import datetime
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from prometheus_client import (
    CollectorRegistry,
    Counter,
    Gauge,
    Histogram,
    generate_latest,
    write_to_textfile,
)

logger = logging.getLogger(__name__)

# Eigene Registry, damit parallele Prozesse sich nicht in die Quere kommen
lyapex_registry = CollectorRegistry()

# Lauf-Metriken ---------------------------------------------------------------

lyapex_runs_total = Counter(
    'lyapex_runs_total',
    'Total number of Benettin runs started',
    ['system', 'solver'],
    registry=lyapex_registry
)

lyapex_steps_total = Counter(
    'lyapex_steps_total',
    'Total number of coupled integration steps',
    ['system'],
    registry=lyapex_registry
)

lyapex_qr_events_total = Counter(
    'lyapex_qr_events_total',
    'Total number of QR reorthonormalizations',
    ['system'],
    registry=lyapex_registry
)

lyapex_run_errors_total = Counter(
    'lyapex_run_errors_total',
    'Total number of aborted runs',
    ['kind'],
    registry=lyapex_registry
)

lyapex_run_duration_seconds = Histogram(
    'lyapex_run_duration_seconds',
    'Wall-clock duration of Benettin runs',
    ['system'],
    buckets=[0.1, 0.5, 1, 5, 10, 30, 60, 300, 900, 3600],
    registry=lyapex_registry
)

lyapex_last_run_exponent = Gauge(
    'lyapex_last_run_exponent',
    'Final exponent estimates of the last run per system',
    ['system', 'index'],
    registry=lyapex_registry
)

# Verifikations-Metriken -------------------------------------------------------

lyapex_verify_checks_total = Counter(
    'lyapex_verify_checks_total',
    'Verification checks executed',
    ['suite', 'result'],
    registry=lyapex_registry
)

lyapex_reproduce_curves_total = Counter(
    'lyapex_reproduce_curves_total',
    'Reproduction curves written',
    ['bundle'],
    registry=lyapex_registry
)


class LyapexMetricsExporter:
    """Exportiert LyapEx-Metriken nach Prometheus"""

    def __init__(self):
        self.last_update = datetime.now()

    def _touch(self) -> None:
        self.last_update = datetime.now()

    def record_run_started(self, system: str, solver: str):
        """Zeichnet den Start eines Laufs auf"""
        lyapex_runs_total.labels(system=system, solver=solver).inc()
        self._touch()

    def record_steps(self, system: str, count: int):
        """Zeichnet integrierte Schritte auf"""
        if count > 0:
            lyapex_steps_total.labels(system=system).inc(count)

    def record_qr_events(self, system: str, count: int):
        """Zeichnet QR-Ereignisse auf"""
        if count > 0:
            lyapex_qr_events_total.labels(system=system).inc(count)

    def record_run_error(self, kind: str):
        """Zeichnet einen Laufabbruch auf"""
        lyapex_run_errors_total.labels(kind=kind).inc()
        self._touch()

    def record_run_duration(self, system: str, duration_sec: float):
        """Zeichnet die Laufdauer auf"""
        lyapex_run_duration_seconds.labels(system=system).observe(duration_sec)

    def update_last_exponents(self, system: str, exponents: Sequence[float]):
        """Setzt die finalen Exponenten des letzten Laufs"""
        for i, value in enumerate(exponents, start=1):
            lyapex_last_run_exponent.labels(system=system, index=str(i)).set(float(value))
        self._touch()

    def record_verify_check(self, suite: str, passed: bool):
        """Zeichnet das Ergebnis einer Verifikationsprüfung auf"""
        lyapex_verify_checks_total.labels(suite=suite, result="pass" if passed else "fail").inc()

    def record_reproduce_curve(self, bundle: str):
        """Zeichnet eine geschriebene Reproduktionskurve auf"""
        lyapex_reproduce_curves_total.labels(bundle=bundle).inc()

    def get_metrics(self) -> str:
        """Gibt Prometheus-Metriken als String zurück"""
        return generate_latest(lyapex_registry).decode('utf-8')

    def get_metrics_dict(self) -> Dict[str, Any]:
        """Gibt Metriken als Dictionary zurück (Name inkl. Labels -> Wert)"""
        metrics_dict = {}
        for line in self.get_metrics().split('\n'):
            if line and not line.startswith('#'):
                name, _, value = line.rpartition(' ')
                try:
                    metrics_dict[name] = float(value)
                except ValueError:
                    continue
        return metrics_dict

    def write_textfile(self, path: str | Path) -> None:
        """Schreibt die Metriken im Textfile-Collector-Format (atomar)"""
        write_to_textfile(str(path), lyapex_registry)
        logger.debug(f"Metriken geschrieben: {path}")


# Convenience-Funktionen
_metrics_exporter: Optional[LyapexMetricsExporter] = None


def _get_metrics_exporter() -> LyapexMetricsExporter:
    global _metrics_exporter
    if _metrics_exporter is None:
        _metrics_exporter = LyapexMetricsExporter()
    return _metrics_exporter


def record_run_started(system: str, solver: str):
    """Zeichnet den Start eines Laufs auf"""
    _get_metrics_exporter().record_run_started(system, solver)


def record_steps(system: str, count: int):
    """Zeichnet integrierte Schritte auf"""
    _get_metrics_exporter().record_steps(system, count)


def record_qr_events(system: str, count: int):
    """Zeichnet QR-Ereignisse auf"""
    _get_metrics_exporter().record_qr_events(system, count)


def record_run_error(kind: str):
    """Zeichnet einen Laufabbruch auf"""
    _get_metrics_exporter().record_run_error(kind)


def record_run_duration(system: str, duration_sec: float):
    """Zeichnet die Laufdauer auf"""
    _get_metrics_exporter().record_run_duration(system, duration_sec)


def update_last_exponents(system: str, exponents: Sequence[float]):
    """Setzt die finalen Exponenten des letzten Laufs"""
    _get_metrics_exporter().update_last_exponents(system, exponents)


def record_verify_check(suite: str, passed: bool):
    """Zeichnet das Ergebnis einer Verifikationsprüfung auf"""
    _get_metrics_exporter().record_verify_check(suite, passed)


def record_reproduce_curve(bundle: str):
    """Zeichnet eine geschriebene Reproduktionskurve auf"""
    _get_metrics_exporter().record_reproduce_curve(bundle)


def get_metrics() -> str:
    """Gibt Prometheus-Metriken als String zurück"""
    return _get_metrics_exporter().get_metrics()


def get_metrics_dict() -> Dict[str, Any]:
    """Gibt Metriken als Dictionary zurück"""
    return _get_metrics_exporter().get_metrics_dict()


def write_metrics_file(path: str | Path) -> None:
    """Schreibt die Metriken in eine .prom-Datei"""
    _get_metrics_exporter().write_textfile(path)
