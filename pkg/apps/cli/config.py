"""
LyapEx - Prozess-Konfiguration
Umgebungsvariablen mit Präfix LYAPEX_ (Seed-Override, Logging, Ausgabe)
"""

from __future__ import annotations

from pathlib import Path
from typing import Literal, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class LyapexSettings(BaseSettings):
    """Einstellungen aus der Umgebung"""

    seed: Optional[int] = Field(default=None, ge=0, description="Überschreibt den Seed der Konfigurationsdatei")
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = Field(default="INFO", description="Log-Level der CLI")
    output_dir: Path = Field(default=Path("data/runs"), description="Standard-Ausgabeverzeichnis für reproduce")
    progress_every: int = Field(default=100_000, ge=1, description="Fortschritts-Log alle n Schritte")
    jobs: int = Field(default=1, ge=1, description="Worker-Prozesse für unabhängige Kurven")
    metrics_file: Optional[Path] = Field(default=None, description="Prometheus-Textfile nach jedem Kommando")

    model_config = SettingsConfigDict(env_prefix="LYAPEX_", extra="ignore")


def get_settings() -> LyapexSettings:
    """Liest die Einstellungen bei jedem Aufruf neu (Tests setzen Umgebungsvariablen)."""
    return LyapexSettings()


def validate_settings(settings: LyapexSettings) -> list[str]:
    """Gibt Warnungen zu auffälligen Einstellungen zurück"""
    warnings = []
    if settings.jobs > 1 and settings.log_level == "DEBUG":
        warnings.append("LYAPEX_JOBS > 1 with DEBUG logging interleaves worker output")
    if settings.metrics_file is not None and not settings.metrics_file.parent.exists():
        warnings.append(f"metrics file directory {settings.metrics_file.parent} does not exist")
    return warnings
