"""
LyapEx - CLI Module
Konfiguration, CSV-Ausgabe, Verifikation und Reproduktion
"""

from .config import LyapexSettings, get_settings
from .models import ExperimentConfig

__all__ = [
    'LyapexSettings',
    'get_settings',
    'ExperimentConfig',
]
