"""
LyapEx - Einschritt-Integratoren
Euler, RK4 und exakte Propagation für das gekoppelte System (x, V)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from apps.dynamics.systems import State, SystemDef, as_state
from apps.errors import IntegrationOverflowError, InvalidArgumentError, UnsupportedOperationError

logger = logging.getLogger(__name__)

# Markierung für "unendliche" Konsistenzordnung der exakten Propagation
EXACT_ORDER = math.inf

DEFAULT_ORDER_STEPS = (0.1, 0.05, 0.025, 0.0125)


class SolverMethod(str, Enum):
    """Verfügbare Einschrittverfahren"""
    EULER = "euler"
    RK4 = "rk4"
    EXACT = "exact"


_ORDERS = {
    SolverMethod.EULER: 1.0,
    SolverMethod.RK4: 4.0,
    SolverMethod.EXACT: EXACT_ORDER,
}


@dataclass(frozen=True)
class SolverSpec:
    """Verfahren plus deklarierte Konsistenzordnung p"""
    method: SolverMethod
    order_p: float

    def __post_init__(self):
        if _ORDERS[self.method] != self.order_p:
            raise InvalidArgumentError(
                f"order {self.order_p} does not match method {self.method.value}"
            )

    @classmethod
    def from_name(cls, name: str | SolverMethod) -> "SolverSpec":
        try:
            method = SolverMethod(name)
        except ValueError:
            raise InvalidArgumentError(
                f"unknown solver '{name}', expected one of {[m.value for m in SolverMethod]}"
            ) from None
        return cls(method=method, order_p=_ORDERS[method])

    @property
    def is_exact(self) -> bool:
        return self.method is SolverMethod.EXACT


@dataclass(frozen=True)
class CoupledState:
    """Zustand x und Störungsbasis V (Spalten werden propagiert)"""
    x: State
    V: np.ndarray

    def validate(self, sys: SystemDef) -> None:
        if self.x.shape != (sys.dim,):
            raise InvalidArgumentError(f"x has shape {self.x.shape}, expected ({sys.dim},)")
        if self.V.ndim != 2 or self.V.shape[0] != sys.dim:
            raise InvalidArgumentError(f"V has shape {self.V.shape}, expected ({sys.dim}, k)")
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.V))):
            raise InvalidArgumentError("coupled state contains non-finite entries")


def require_exact(sys: SystemDef) -> None:
    if not sys.has_exact:
        raise UnsupportedOperationError(
            f"system '{sys.name}' provides no exact flow/tangent propagator"
        )


def _check_stepsize(h: float) -> None:
    if not (0.0 < h <= 1.0):
        raise InvalidArgumentError(f"stepsize must satisfy 0 < h <= 1, got {h}")


def _advance(sys: SystemDef, method: SolverMethod, x: np.ndarray, V: np.ndarray, h: float):
    """Ein Schritt ohne Validierung (h = 0 erlaubt)."""
    if method is SolverMethod.EULER:
        J = sys.jacobian(x)
        return x + h * sys.field(x), V + h * (J @ V)

    if method is SolverMethod.RK4:
        f, Df = sys.field, sys.jacobian
        k1x = f(x)
        k1V = Df(x) @ V
        x2 = x + 0.5 * h * k1x
        k2x = f(x2)
        k2V = Df(x2) @ (V + 0.5 * h * k1V)
        x3 = x + 0.5 * h * k2x
        k3x = f(x3)
        k3V = Df(x3) @ (V + 0.5 * h * k2V)
        x4 = x + h * k3x
        k4x = f(x4)
        k4V = Df(x4) @ (V + h * k3V)
        x_new = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        V_new = V + (h / 6.0) * (k1V + 2.0 * k2V + 2.0 * k3V + k4V)
        return x_new, V_new

    require_exact(sys)
    return sys.exact_flow(x, h), sys.exact_tangent(x, h) @ V


def _advance_state(sys: SystemDef, method: SolverMethod, x: np.ndarray, h: float) -> np.ndarray:
    if method is SolverMethod.EULER:
        return x + h * sys.field(x)
    if method is SolverMethod.RK4:
        f = sys.field
        k1 = f(x)
        k2 = f(x + 0.5 * h * k1)
        k3 = f(x + 0.5 * h * k2)
        k4 = f(x + h * k3)
        return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    require_exact(sys)
    return sys.exact_flow(x, h)


def step(sys: SystemDef, solver: SolverSpec, cs: CoupledState, h: float) -> CoupledState:
    """Propagiert (x, V) um einen Schritt der Länge h.

    Args:
        sys: System
        solver: Verfahren
        cs: Aktueller gekoppelter Zustand
        h: Schrittweite, 0 < h <= 1

    Returns:
        Neuer gekoppelter Zustand

    Raises:
        InvalidArgumentError: Ungültige Schrittweite oder Dimensionen
        UnsupportedOperationError: exact ohne exakte Propagatoren
        IntegrationOverflowError: NaN/Inf im Ergebnis
    """
    _check_stepsize(h)
    cs.validate(sys)
    x_new, V_new = _advance(sys, solver.method, cs.x, cs.V, h)
    if not (np.all(np.isfinite(x_new)) and np.all(np.isfinite(V_new))):
        raise IntegrationOverflowError(
            f"{solver.method.value} step with h={h} produced non-finite values"
        )
    return CoupledState(x=x_new, V=V_new)


def step_nonlinear(sys: SystemDef, solver: SolverSpec, x: State, h: float) -> State:
    """Wie step, aber nur für den nichtlinearen Zustand (Transient)."""
    _check_stepsize(h)
    x = as_state(x, sys.dim)
    x_new = _advance_state(sys, solver.method, x, h)
    if not np.all(np.isfinite(x_new)):
        raise IntegrationOverflowError(
            f"{solver.method.value} step with h={h} produced non-finite values"
        )
    return x_new


def tangent_map(sys: SystemDef, solver: SolverSpec, x: State, h: float) -> np.ndarray:
    """Tangentialabbildung Φ_x^h des Verfahrens als d×d-Matrix (h = 0 liefert I)."""
    if h < 0.0 or h > 1.0:
        raise InvalidArgumentError(f"stepsize must satisfy 0 <= h <= 1, got {h}")
    x = as_state(x, sys.dim)
    if h == 0.0:
        return np.eye(sys.dim)
    _, M = _advance(sys, solver.method, x, np.eye(sys.dim), h)
    return M


def local_error(sys: SystemDef, solver: SolverSpec, x: State, h: float) -> float:
    """Operatornorm ‖Φ_x^h − L_x^h‖ gegen den exakten Kozyklus.

    Raises:
        UnsupportedOperationError: System ohne exact_tangent
    """
    require_exact(sys)
    if h == 0.0:
        return 0.0
    Phi = tangent_map(sys, solver, x, h)
    L = sys.exact_tangent(as_state(x, sys.dim), h)
    return float(np.linalg.norm(Phi - L, 2))


def estimate_order(
    sys: SystemDef,
    solver: SolverSpec,
    x: State,
    h_list: Sequence[float] = DEFAULT_ORDER_STEPS,
) -> float:
    """Schätzt p aus der Steigung von log(local_error) über log(h), minus 1.

    Returns:
        Geschätzte Ordnung oder EXACT_ORDER, wenn alle Fehler verschwinden

    Raises:
        InvalidArgumentError: Weniger als drei oder nicht fallende Schrittweiten
    """
    hs = np.asarray(h_list, dtype=np.float64)
    if hs.size < 3:
        raise InvalidArgumentError("estimate_order needs at least 3 stepsizes")
    if not np.all(np.diff(hs) < 0):
        raise InvalidArgumentError("stepsizes for estimate_order must be decreasing")

    errors = np.array([local_error(sys, solver, x, float(h)) for h in hs])
    if np.any(errors <= 0.0):
        logger.debug(f"Lokaler Fehler verschwindet für {solver.method.value}, Ordnung exakt")
        return EXACT_ORDER

    slope, _ = np.polyfit(np.log(hs), np.log(errors), 1)
    logger.debug(f"Ordnung geschätzt: {solver.method.value} -> {slope - 1.0:.3f}")
    return float(slope - 1.0)
