"""
LyapEx - Fehlerklassen
Gemeinsame Exception-Hierarchie für alle Module
"""

from __future__ import annotations

from typing import Any, Optional


class LyapexError(RuntimeError):
    """Basisklasse aller LyapEx-Fehler."""


class InvalidArgumentError(LyapexError, ValueError):
    """Raised when an argument violates a documented precondition."""


class UnsupportedOperationError(LyapexError):
    """Raised when an operation is not available for the given system or scale."""


class ConfigError(LyapexError):
    """Raised when an experiment configuration cannot be parsed or validated."""


class RunAbortedError(LyapexError):
    """Basisklasse für Abbrüche während eines Benettin-Laufs.

    Das Attribut ``partial`` enthält das Teilergebnis bis zum fehlgeschlagenen
    Schritt, sofern der Lauf bereits begonnen hatte.
    """

    def __init__(self, message: str, step: Optional[int] = None):
        super().__init__(message)
        self.step = step
        self.partial: Optional[Any] = None


class IntegrationOverflowError(RunAbortedError):
    """Raised when a solver step produces non-finite values (stepsize too large)."""


class DegenerateBasisError(RunAbortedError):
    """Raised when the perturbation basis collapses (R diagonal below 1e-300)."""
