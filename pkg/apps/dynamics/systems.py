"""
LyapEx - Dynamische Systeme
Vektorfeld, Jacobi-Matrix und (optional) exakte Propagatoren der Benchmarks
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Mapping, Optional, Sequence

import numpy as np
from scipy.linalg import expm

from apps.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

# Ein Zustand ist ein endlicher float64-Vektor der Länge d
State = np.ndarray

FieldFn = Callable[[np.ndarray], np.ndarray]
JacobianFn = Callable[[np.ndarray], np.ndarray]
FlowFn = Callable[[np.ndarray, float], np.ndarray]
TangentFn = Callable[[np.ndarray, float], np.ndarray]


def as_state(values: Sequence[float] | np.ndarray, dim: Optional[int] = None) -> State:
    """Wandelt Werte in einen gültigen Zustand um.

    Args:
        values: Zustandswerte
        dim: Erwartete Dimension (optional)

    Returns:
        float64-Vektor

    Raises:
        InvalidArgumentError: Bei falscher Form oder NaN/Inf
    """
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise InvalidArgumentError(f"state must be a non-empty vector, got shape {x.shape}")
    if dim is not None and x.size != dim:
        raise InvalidArgumentError(f"state has length {x.size}, system dimension is {dim}")
    if not np.all(np.isfinite(x)):
        raise InvalidArgumentError("state contains non-finite entries")
    return x


@dataclass(frozen=True)
class SystemDef:
    """Autonomes d-dimensionales ODE-System ẋ = f(x).

    exact_flow und exact_tangent sind nur für lineare Systeme gesetzt.
    """
    dim: int
    field: FieldFn
    jacobian: JacobianFn
    name: str
    exact_flow: Optional[FlowFn] = None
    exact_tangent: Optional[TangentFn] = None
    params: Mapping[str, object] = field(default_factory=dict)
    trace_fn: Optional[Callable[[np.ndarray], float]] = None

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidArgumentError(f"dim must be positive, got {self.dim}")

    @property
    def has_exact(self) -> bool:
        return self.exact_flow is not None and self.exact_tangent is not None

    def trace(self, x: np.ndarray) -> float:
        """Spur der Jacobi-Matrix an x"""
        if self.trace_fn is not None:
            return self.trace_fn(x)
        return float(np.trace(self.jacobian(x)))


def _finite_params(**params: float) -> None:
    for key, value in params.items():
        if not np.isfinite(value):
            raise InvalidArgumentError(f"parameter {key} must be finite, got {value}")


def make_linear_diagonal(diag: Sequence[float]) -> SystemDef:
    """Lineares System ẋ = diag(λ_1, ..., λ_d) x.

    Args:
        diag: Streng fallende Diagonaleinträge

    Returns:
        SystemDef mit exakten Propagatoren e^{Ah}

    Raises:
        InvalidArgumentError: Leere, nicht-endliche oder nicht streng fallende Diagonale
    """
    lam = np.asarray(diag, dtype=np.float64)
    if lam.ndim != 1 or lam.size == 0:
        raise InvalidArgumentError("diag must be a non-empty vector")
    if not np.all(np.isfinite(lam)):
        raise InvalidArgumentError("diag entries must be finite")
    if lam.size > 1 and not np.all(np.diff(lam) < 0):
        raise InvalidArgumentError(f"diag must be strictly decreasing, got {lam.tolist()}")

    A = np.diag(lam)
    lam.setflags(write=False)
    A.setflags(write=False)

    def field_fn(x: np.ndarray) -> np.ndarray:
        return lam * x

    def jacobian_fn(x: np.ndarray) -> np.ndarray:
        return A.copy()

    def exact_tangent(x: np.ndarray, h: float) -> np.ndarray:
        return np.diag(np.exp(lam * h))

    def exact_flow(x: np.ndarray, h: float) -> np.ndarray:
        return np.exp(lam * h) * x

    return SystemDef(
        dim=lam.size,
        field=field_fn,
        jacobian=jacobian_fn,
        name="linear_diagonal",
        exact_flow=exact_flow,
        exact_tangent=exact_tangent,
        params={"diag": tuple(float(v) for v in lam)},
    )


def make_linear(A: Sequence[Sequence[float]] | np.ndarray) -> SystemDef:
    """Lineares System ẋ = A x mit beliebiger konstanter Matrix.

    Die exakten Propagatoren kommen aus scipy.linalg.expm.
    """
    M = np.array(A, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise InvalidArgumentError(f"A must be a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidArgumentError("A must have finite entries")
    M.setflags(write=False)

    def field_fn(x: np.ndarray) -> np.ndarray:
        return M @ x

    def jacobian_fn(x: np.ndarray) -> np.ndarray:
        return M.copy()

    def exact_tangent(x: np.ndarray, h: float) -> np.ndarray:
        return expm(M * h)

    def exact_flow(x: np.ndarray, h: float) -> np.ndarray:
        return expm(M * h) @ x

    return SystemDef(
        dim=M.shape[0],
        field=field_fn,
        jacobian=jacobian_fn,
        name="linear",
        exact_flow=exact_flow,
        exact_tangent=exact_tangent,
        params={"matrix": tuple(tuple(float(v) for v in row) for row in M)},
    )


def make_lorenz63(sigma: float = 10.0, rho: float = 28.0, beta: float = 8.0 / 3.0) -> SystemDef:
    """Lorenz-63-System (klassisch σ=10, ρ=28, β=8/3).

    Die Spur der Jacobi-Matrix ist konstant −(σ+1+β).
    """
    _finite_params(sigma=sigma, rho=rho, beta=beta)

    def field_fn(x: np.ndarray) -> np.ndarray:
        x1, x2, x3 = x
        return np.array([
            sigma * (x2 - x1),
            x1 * (rho - x3) - x2,
            x1 * x2 - beta * x3,
        ])

    def jacobian_fn(x: np.ndarray) -> np.ndarray:
        x1, x2, x3 = x
        return np.array([
            [-sigma, sigma, 0.0],
            [rho - x3, -1.0, -x1],
            [x2, x1, -beta],
        ])

    return SystemDef(
        dim=3,
        field=field_fn,
        jacobian=jacobian_fn,
        name="lorenz63",
        params={"sigma": float(sigma), "rho": float(rho), "beta": float(beta)},
    )


def make_lorenz96(d: int = 40, F: float = 10.0) -> SystemDef:
    """Lorenz-96-System mit zyklischen Indizes x_{i+d} = x_i.

    Args:
        d: Anzahl Variablen (mindestens 4)
        F: Antrieb

    Raises:
        InvalidArgumentError: d < 4 oder F nicht endlich
    """
    if int(d) != d or d < 4:
        raise InvalidArgumentError(f"Lorenz-96 needs d >= 4 variables, got {d}")
    d = int(d)
    _finite_params(F=F)

    idx = np.arange(d)
    im2, im1, ip1 = (idx - 2) % d, (idx - 1) % d, (idx + 1) % d

    def field_fn(x: np.ndarray) -> np.ndarray:
        return (x[ip1] - x[im2]) * x[im1] - x + F

    def jacobian_fn(x: np.ndarray) -> np.ndarray:
        J = np.zeros((d, d))
        J[idx, im2] = -x[im1]
        J[idx, im1] = x[ip1] - x[im2]
        J[idx, idx] = -1.0
        J[idx, ip1] = x[im1]
        return J

    def trace_fn(x: np.ndarray) -> float:
        return -float(d)

    # Diagonale ist konstant −1, die Jacobi-Matrix muss dafür nicht gebaut werden
    return SystemDef(
        dim=d,
        field=field_fn,
        jacobian=jacobian_fn,
        name="lorenz96",
        params={"d": d, "F": float(F)},
        trace_fn=trace_fn,
    )


def finite_difference_jacobian(sys: SystemDef, x: Sequence[float] | np.ndarray, eps: float = 1e-6) -> np.ndarray:
    """Zentrale Differenzen als Test-Orakel für die analytische Jacobi-Matrix.

    Raises:
        InvalidArgumentError: eps <= 0
    """
    if not eps > 0:
        raise InvalidArgumentError(f"eps must be positive, got {eps}")
    x = as_state(x, sys.dim)
    J = np.empty((sys.dim, sys.dim))
    for j in range(sys.dim):
        e = np.zeros(sys.dim)
        e[j] = eps
        J[:, j] = (sys.field(x + e) - sys.field(x - e)) / (2.0 * eps)
    return J


def default_initial_state(sys: SystemDef) -> State:
    """Standard-Anfangszustand vor dem Transient.

    Lorenz-63: (1, 1, 1); Lorenz-96: F überall plus 0.01 auf Komponente 1;
    lineare Systeme: Einsvektor.
    """
    if sys.name == "lorenz96":
        x0 = np.full(sys.dim, float(sys.params["F"]))
        x0[0] += 0.01
        return x0
    return np.ones(sys.dim)


_BUILDERS: Dict[str, Callable[..., SystemDef]] = {
    "linear_diagonal": make_linear_diagonal,
    "linear": make_linear,
    "lorenz63": make_lorenz63,
    "lorenz96": make_lorenz96,
}


def available_systems() -> list[str]:
    return sorted(_BUILDERS)


def build_system(name: str, **params) -> SystemDef:
    """Baut ein System über seinen Registry-Namen.

    Raises:
        InvalidArgumentError: Unbekannter Name oder unpassende Parameter
    """
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise InvalidArgumentError(
            f"unknown system '{name}', expected one of {available_systems()}"
        ) from None
    try:
        system = builder(**params)
    except TypeError as exc:
        raise InvalidArgumentError(f"invalid parameters for system '{name}': {exc}") from exc
    logger.debug(f"System gebaut: {name} {dict(system.params)}")
    return system
