"""LyapEx - apps/monitor Module"""
# Prometheus-Kennzahlen für Läufe und Verifikationen

__version__ = "1.0.0"
__author__ = "LyapEx Team"
