"""
LyapEx - Äußere Potenzen (Compound-Matrizen)
L×L-Minoren als Orakel für Volumenwachstum und die Rechenregeln äußerer Potenzen
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Optional

import numpy as np
from scipy.linalg import svdvals

from apps.benettin.runner import RunConfig, RunResult, qr_pos
from apps.dynamics.integrators import CoupledState, step
from apps.errors import InvalidArgumentError, UnsupportedOperationError

logger = logging.getLogger(__name__)

MAX_COMPOUND_DIM = 8
MAX_INEQUALITY_DIM = 6
MAX_ORACLE_STEPS = 1000

# Toleranz für Gleichheitsprüfungen (relativ)
EQUALITY_TOL = 1e-9


@lru_cache(maxsize=None)
def lexicographic_subsets(d: int, L: int) -> tuple[tuple[int, ...], ...]:
    """Lexikographisch geordnete L-Teilmengen von {0..d-1}"""
    return tuple(combinations(range(d), L))


@dataclass(frozen=True)
class CompoundMatrix:
    """L-te äußere Potenz einer d×d-Matrix, Basis e_I mit I lexikographisch"""
    d: int
    L: int
    entries: np.ndarray
    subsets: tuple[tuple[int, ...], ...] = field(repr=False, default=())

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.entries, 2))


def _check_order(d: int, L: int, limit: int = MAX_COMPOUND_DIM) -> None:
    if d > limit:
        raise UnsupportedOperationError(f"compound oracle is limited to d <= {limit}, got d = {d}")
    if not (1 <= L <= d):
        raise InvalidArgumentError(f"exterior power order must satisfy 1 <= L <= d = {d}, got {L}")


def compound(A: np.ndarray, L: int) -> CompoundMatrix:
    """Matrix der L×L-Minoren von A.

    Args:
        A: Quadratische d×d-Matrix, d <= 8
        L: Ordnung der äußeren Potenz

    Raises:
        InvalidArgumentError: L außerhalb 1..d oder A nicht quadratisch
        UnsupportedOperationError: d > 8
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidArgumentError(f"compound needs a square matrix, got shape {A.shape}")
    d = A.shape[0]
    _check_order(d, L)
    subsets = lexicographic_subsets(d, L)
    idx = np.array(subsets)
    blocks = A[idx[:, None, :, None], idx[None, :, None, :]]
    return CompoundMatrix(d=d, L=L, entries=np.linalg.det(blocks), subsets=subsets)


def wedge(V: np.ndarray) -> np.ndarray:
    """Koordinaten von v_1∧...∧v_L (Spalten von V) in der Basis e_I."""
    V = np.asarray(V, dtype=np.float64)
    if V.ndim != 2 or V.shape[1] > V.shape[0] or V.shape[1] == 0:
        raise InvalidArgumentError(f"wedge needs a d×L matrix with 1 <= L <= d, got {V.shape}")
    d, L = V.shape
    _check_order(d, L)
    idx = np.array(lexicographic_subsets(d, L))
    return np.linalg.det(V[idx])


def wedge_norm(V: np.ndarray) -> float:
    return float(np.linalg.norm(wedge(V)))


def compound_volume_check(config: RunConfig, result: RunResult, L: int) -> float:
    """|Σ_{i<=L} μ_i(N) − log‖∧^L Φ_0^N (v_1∧...∧v_L)‖ / h_0^N|

    Das Produkt der Schrittabbildungen wird entlang derselben Trajektorie
    explizit neu aufgebaut.

    Raises:
        UnsupportedOperationError: d > 8 oder N > 1000
        InvalidArgumentError: L außerhalb 1..k
    """
    d, N = config.system.dim, result.steps_completed
    if d > MAX_COMPOUND_DIM or N > MAX_ORACLE_STEPS:
        raise UnsupportedOperationError(
            f"volume oracle is limited to d <= {MAX_COMPOUND_DIM}, N <= {MAX_ORACLE_STEPS} (got d={d}, N={N})"
        )
    if not (1 <= L <= config.k):
        raise InvalidArgumentError(f"L must satisfy 1 <= L <= k = {config.k}, got {L}")

    cs = CoupledState(x=result.initial_state.copy(), V=np.eye(d))
    for h in result.h_sequence:
        cs = step(config.system, config.solver, cs, float(h))
    image = cs.V @ result.initial_V[:, :L]
    t = float(result.t_sequence[-1])
    oracle = math.log(wedge_norm(image)) / t
    residual = abs(float(np.sum(result.final_mu[:L])) - oracle)
    logger.debug(f"Volumen-Orakel L={L}: oracle={oracle:.12g} residual={residual:.3e}")
    return residual


@dataclass(frozen=True)
class InequalityCheck:
    """Eine geprüfte Aussage: lhs <= rhs (Gleichheiten als Abweichung <= Toleranz)"""
    item: str
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs * (1.0 + 1e-10) + 1e-12


@dataclass(frozen=True)
class ExteriorReport:
    checks: tuple[InequalityCheck, ...]

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def by_item(self) -> dict[str, InequalityCheck]:
        return {c.item: c for c in self.checks}


def _opnorm(M: np.ndarray) -> float:
    return float(np.linalg.norm(M, 2))


def _rel(a: np.ndarray, b: np.ndarray) -> float:
    return _opnorm(a - b) / max(1.0, _opnorm(b))


def exterior_inequalities_check(A: np.ndarray, B: np.ndarray, L: int, k: int) -> ExteriorReport:
    """Prüft ‖∧^L A‖ <= ‖A‖^L, die Submultiplikativität auf zerlegbaren
    Vektoren (Spalten von A, Aufteilung nach k) und die Lipschitz-Schranke
    ‖∧^L A − ∧^L B‖ <= C(d,L)·(Σ_{j=1}^{L} ‖A‖^{L−j}‖B‖^{j−1})·‖A−B‖.

    Raises:
        UnsupportedOperationError: d > 6
        InvalidArgumentError: L oder k außerhalb des gültigen Bereichs
    """
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidArgumentError(f"A and B must be square matrices of equal shape, got {A.shape}, {B.shape}")
    d = A.shape[0]
    _check_order(d, L, MAX_INEQUALITY_DIM)
    if L > 1 and not (1 <= k < L):
        raise InvalidArgumentError(f"split index must satisfy 1 <= k < L = {L}, got {k}")

    cA, cB = compound(A, L), compound(B, L)
    nA, nB = _opnorm(A), _opnorm(B)
    checks = [InequalityCheck("v", cA.norm, nA ** L)]

    if L > 1:
        U = A[:, :L]
        checks.append(InequalityCheck("vi", wedge_norm(U), wedge_norm(U[:, :k]) * wedge_norm(U[:, k:])))

    lipschitz = math.comb(d, L) * sum(nA ** (L - j) * nB ** (j - 1) for j in range(1, L + 1)) * _opnorm(A - B)
    checks.append(InequalityCheck("viii", _opnorm(cA.entries - cB.entries), lipschitz))
    return ExteriorReport(tuple(checks))


def exterior_lemma_check(
    A: np.ndarray,
    B: np.ndarray,
    L: int,
    k: int,
    V: Optional[np.ndarray] = None,
) -> ExteriorReport:
    """Alle numerisch prüfbaren Rechenregeln äußerer Potenzen auf (A, B).

    Gleichheiten werden als relative Abweichung gegen EQUALITY_TOL geprüft.
    V liefert die Vektoren für die QR-Volumenregel (Standard: B[:, :L]).
    """
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    d = A.shape[0]
    base = exterior_inequalities_check(A, B, L, k)
    cA, cB = compound(A, L), compound(B, L)

    checks = [InequalityCheck("i", _rel(compound(np.eye(d), L).entries, np.eye(math.comb(d, L))), EQUALITY_TOL)]
    checks.append(InequalityCheck("ii", _rel(compound(A @ B, L).entries, cA.entries @ cB.entries), EQUALITY_TOL))
    # Inverse nur bei gut konditionierter Compound-Matrix, sonst dominiert die Rundung
    if np.linalg.cond(cA.entries) < 1e6:
        inv_compound = np.linalg.inv(cA.entries)
        checks.append(InequalityCheck("iii", _rel(compound(np.linalg.inv(A), L).entries, inv_compound), EQUALITY_TOL))

    sigma = svdvals(A)
    top = float(np.prod(sigma[:L]))
    checks.append(InequalityCheck("iv", abs(cA.norm - top) / max(1.0, top), EQUALITY_TOL))

    vectors = B[:, :L] if V is None else np.asarray(V, dtype=np.float64)[:, :L]
    _, R = qr_pos(A @ vectors)
    volume = float(np.prod(np.diag(R)))
    image = wedge_norm(A @ vectors)
    checks.append(InequalityCheck("ix", abs(image - volume) / max(1.0, volume), EQUALITY_TOL))

    ordered = {c.item: c for c in (*checks, *base.checks)}
    return ExteriorReport(tuple(ordered[key] for key in sorted(ordered, key=_roman_key)))


_ROMAN = ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix")


def _roman_key(item: str) -> int:
    return _ROMAN.index(item)
