"""
LyapEx - Benettin-Algorithmus
Propagation der Störungsbasis, QR-Reorthonormalisierung und laufende Mittel
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

import numpy as np
from scipy.linalg import qr

from apps.benettin.schedules import StepsizeSchedule
from apps.benettin.weights import WeightScheme
from apps.dynamics.integrators import CoupledState, SolverSpec, step, step_nonlinear
from apps.dynamics.systems import SystemDef, as_state, default_initial_state
from apps.errors import DegenerateBasisError, InvalidArgumentError, RunAbortedError
from apps.monitor.metrics import (
    record_qr_events, record_run_duration, record_run_error, record_run_started,
    record_steps, update_last_exponents,
)

logger = logging.getLogger(__name__)

# Unterhalb dieser Schwelle gilt ein R-Diagonalelement als kollabiert
DEGENERATE_R_THRESHOLD = 1e-300


def qr_pos(W: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reduzierte QR-Zerlegung mit positiver R-Diagonale.

    Args:
        W: d×k-Matrix mit vollem Spaltenrang

    Returns:
        (Q, R) mit W = QR, Q orthonormal, R obere Dreiecksmatrix, diag(R) > 0

    Raises:
        InvalidArgumentError: k > d oder falsche Form
        DegenerateBasisError: |R_ii| < 1e-300
    """
    W = np.asarray(W, dtype=np.float64)
    if W.ndim != 2 or W.shape[1] == 0 or W.shape[1] > W.shape[0]:
        raise InvalidArgumentError(f"qr_pos needs a d×k matrix with 1 <= k <= d, got {W.shape}")

    if W.shape[1] == 1:
        r = float(np.linalg.norm(W[:, 0]))
        if not r >= DEGENERATE_R_THRESHOLD:
            raise DegenerateBasisError(f"perturbation vector collapsed (|R_11| = {r:.3e})")
        return W / r, np.array([[r]])

    Q, R = qr(W, mode="economic", check_finite=False)
    diag = np.diag(R)
    if np.any(np.abs(diag) < DEGENERATE_R_THRESHOLD):
        raise DegenerateBasisError(
            f"perturbation basis collapsed (min |R_ii| = {np.min(np.abs(diag)):.3e})"
        )
    signs = np.where(diag < 0.0, -1.0, 1.0)
    return Q * signs, R * signs[:, None]


@dataclass(frozen=True)
class TransientSpec:
    """Nichtlineare Vorintegration vor dem Mitteln"""
    steps: int = 0
    h: float = 0.001

    def __post_init__(self):
        if self.steps < 0:
            raise InvalidArgumentError(f"transient steps must be >= 0, got {self.steps}")
        if self.steps > 0 and not (0.0 < self.h <= 1.0):
            raise InvalidArgumentError(f"transient stepsize must satisfy 0 < h <= 1, got {self.h}")


@dataclass(frozen=True)
class RunConfig:
    """Eingaben eines Benettin-Laufs.

    V0 = None bedeutet zufällige Startvektoren (gleichverteilt in [0,1), Seed).
    """
    system: SystemDef
    solver: SolverSpec
    schedule: StepsizeSchedule
    k: int
    N: int
    x0: Optional[np.ndarray] = None
    V0: Optional[np.ndarray] = None
    seed: int = 0
    transient: TransientSpec = field(default_factory=TransientSpec)
    qr_interval: int = 1
    weight_schemes: tuple[WeightScheme, ...] = (WeightScheme.ADAPTIVE,)
    record_every: int = 1
    keep_log_diag: bool = True
    track_trace: bool = True
    progress_every: int = 100_000
    label: str = ""

    def validate(self) -> None:
        """Prüft die Invarianten k <= d, N >= 1 und Rang(V0) = k.

        Raises:
            InvalidArgumentError: Bei verletzter Invariante
        """
        d = self.system.dim
        if not (1 <= self.k <= d):
            raise InvalidArgumentError(f"k must satisfy 1 <= k <= d = {d}, got k = {self.k}")
        if self.N < 1:
            raise InvalidArgumentError(f"N must be >= 1, got {self.N}")
        if self.qr_interval < 1:
            raise InvalidArgumentError(f"qr_interval must be >= 1, got {self.qr_interval}")
        if self.record_every < 1 or self.record_every % self.qr_interval != 0:
            raise InvalidArgumentError(
                f"record_every ({self.record_every}) must be a positive multiple of qr_interval ({self.qr_interval})"
            )
        if self.solver.is_exact and not self.system.has_exact:
            raise InvalidArgumentError(f"solver 'exact' needs exact propagators, system '{self.system.name}' has none")
        if self.x0 is not None:
            as_state(self.x0, d)
        if self.V0 is not None:
            V0 = np.asarray(self.V0, dtype=np.float64)
            if V0.shape != (d, self.k):
                raise InvalidArgumentError(f"V0 has shape {V0.shape}, expected ({d}, {self.k})")
            if not np.all(np.isfinite(V0)) or np.linalg.matrix_rank(V0) < self.k:
                raise InvalidArgumentError("V0 columns must be finite and linearly independent")
        self.schedule.stepsizes(self.N)  # explizite Folgen müssen lang genug sein

    def initial_basis(self) -> np.ndarray:
        if self.V0 is not None:
            return np.array(self.V0, dtype=np.float64)
        rng = np.random.default_rng(self.seed)
        return rng.random((self.system.dim, self.k))

    def initial_state(self) -> np.ndarray:
        if self.x0 is not None:
            return as_state(self.x0, self.system.dim).copy()
        return default_initial_state(self.system)


@dataclass
class RunResult:
    """Ergebnis eines Laufs (oder Teilergebnis bei Abbruch)"""
    log_diag_R: Optional[np.ndarray]
    h_sequence: np.ndarray
    t_sequence: np.ndarray
    record_steps: np.ndarray
    mu: np.ndarray
    mu_weighted: Dict[WeightScheme, np.ndarray]
    final_state: np.ndarray
    final_V: np.ndarray
    initial_state: np.ndarray
    initial_V: np.ndarray
    qr_mask: np.ndarray
    trace_average: Optional[float] = None
    steps_completed: int = 0

    @property
    def final_mu(self) -> np.ndarray:
        return self.mu[-1]

    def final_mu_weighted(self, scheme: WeightScheme) -> np.ndarray:
        return self.mu_weighted[scheme][-1]

    def spectrum(self) -> np.ndarray:
        """Finale Exponenten absteigend sortiert"""
        return np.sort(self.final_mu)[::-1]


class _Accumulator:
    """Laufende Summen und Aufzeichnungen für run()."""

    def __init__(self, config: RunConfig, hs: np.ndarray, ts: np.ndarray):
        N, k = config.N, config.k
        self.config = config
        self.hs = hs
        self.ts = ts
        self.S = np.zeros(k)
        self.U = np.zeros(k)
        self.n_qr = 0
        self.h_block = 0.0
        self.t_last = 0.0
        self.log_diag = np.zeros((N, k)) if config.keep_log_diag else None
        self.qr_mask = np.zeros(N, dtype=bool)
        self.rec_steps: list[int] = []
        self.mu_rows: list[np.ndarray] = []
        self.muw_rows: Dict[WeightScheme, list[np.ndarray]] = {w: [] for w in config.weight_schemes}
        self.trace_acc = 0.0

    def add_qr(self, n: int, ld: np.ndarray) -> None:
        self.S += ld
        self.U += ld / self.h_block
        self.n_qr += 1
        if self.log_diag is not None:
            self.log_diag[n - 1] = ld
        self.qr_mask[n - 1] = True
        self.t_last = self.ts[n - 1]
        self.h_block = 0.0

    def record(self, n: int) -> None:
        mu = self.S / self.t_last
        self.rec_steps.append(n)
        self.mu_rows.append(mu)
        for scheme, rows in self.muw_rows.items():
            rows.append(mu if scheme is WeightScheme.ADAPTIVE else self.U / self.n_qr)

    def result(self, n_done: int, cs: CoupledState, x_start: np.ndarray, V_start: np.ndarray) -> RunResult:
        k = self.config.k
        t_done = float(self.ts[n_done - 1]) if n_done > 0 else 0.0
        return RunResult(
            log_diag_R=None if self.log_diag is None else self.log_diag[:n_done].copy(),
            h_sequence=self.hs[:n_done].copy(),
            t_sequence=self.ts[:n_done].copy(),
            record_steps=np.asarray(self.rec_steps, dtype=np.int64),
            mu=np.array(self.mu_rows).reshape(-1, k),
            mu_weighted={w: np.array(rows).reshape(-1, k) for w, rows in self.muw_rows.items()},
            final_state=cs.x.copy(),
            final_V=cs.V.copy(),
            initial_state=x_start,
            initial_V=V_start,
            qr_mask=self.qr_mask[:n_done].copy(),
            trace_average=(self.trace_acc / t_done) if (self.config.track_trace and t_done > 0) else None,
            steps_completed=n_done,
        )


def run_transient(config: RunConfig) -> np.ndarray:
    """Nichtlinearer Transient ohne Tangentialanteil."""
    x = config.initial_state()
    spec = config.transient
    for _ in range(spec.steps):
        x = step_nonlinear(config.system, config.solver, x, spec.h)
    if spec.steps:
        logger.info(f"Transient abgeschlossen: {spec.steps} Schritte mit h={spec.h:g}")
    return x


def run(config: RunConfig) -> RunResult:
    """Benettin-Algorithmus mit variablen Schrittweiten.

    Args:
        config: Laufkonfiguration

    Returns:
        RunResult mit log-Diagonalen, laufenden und gewichteten Mitteln

    Raises:
        InvalidArgumentError: Verletzte Konfigurationsinvariante
        DegenerateBasisError: Kollabierte Störungsbasis (mit Teilergebnis)
        IntegrationOverflowError: Nicht-endliche Werte (mit Teilergebnis)
    """
    config.validate()
    system, solver = config.system, config.solver
    logger.info(
        f"Benettin-Lauf gestartet: system={system.name} solver={solver.method.value} "
        f"schedule={config.schedule.description} N={config.N} k={config.k} qr_interval={config.qr_interval}"
    )
    record_run_started(system.name, solver.method.value)
    started = time.perf_counter()

    x_start = run_transient(config)
    V_start = config.initial_basis()
    hs = config.schedule.stepsizes(config.N)
    ts = config.schedule.partial_sums(config.N)[1:]
    acc = _Accumulator(config, hs, ts)
    cs = CoupledState(x=x_start.copy(), V=V_start.copy())

    n = 0
    try:
        for n in range(1, config.N + 1):
            h = float(hs[n - 1])
            x_prev = cs.x
            cs = step(system, solver, cs, h)
            acc.h_block += h
            if n % config.qr_interval == 0 or n == config.N:
                Q, R = qr_pos(cs.V)
                cs = CoupledState(x=cs.x, V=Q)
                acc.add_qr(n, np.log(np.diag(R)))
                if n % config.record_every == 0 or n == config.N:
                    acc.record(n)
            # nur abgeschlossene Schritte zählen
            if config.track_trace:
                acc.trace_acc += h * system.trace(x_prev)
            if n % config.progress_every == 0:
                logger.debug(f"Schritt {n}/{config.N}: mu={np.array2string(acc.S / acc.t_last, precision=6)}")
    except RunAbortedError as exc:
        exc.step = n
        exc.partial = acc.result(n - 1, cs, x_start, V_start)
        record_run_error(type(exc).__name__)
        logger.error(f"Benettin-Lauf abgebrochen in Schritt {n}: {exc}")
        raise

    result = acc.result(config.N, cs, x_start, V_start)
    elapsed = time.perf_counter() - started
    record_steps(system.name, config.N)
    record_qr_events(system.name, acc.n_qr)
    record_run_duration(system.name, elapsed)
    update_last_exponents(system.name, result.final_mu)
    logger.info(
        f"Benettin-Lauf beendet in {elapsed:.2f}s: mu={np.array2string(result.final_mu, precision=7)}"
    )
    return result


def replay_averages(
    log_diag_R: np.ndarray,
    h_sequence: Sequence[float] | np.ndarray,
    scheme: WeightScheme,
    qr_mask: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Berechnet laufende gewichtete Mittel aus gespeicherten log-Diagonalen neu.

    Bei qr_interval > 1 werden die Schrittweiten zwischen zwei QR-Ereignissen
    zusammengefasst; eine Zeile pro QR-Ereignis.

    Raises:
        InvalidArgumentError: Inkonsistente Längen
    """
    L = np.asarray(log_diag_R, dtype=np.float64)
    if L.ndim == 1:
        L = L[:, None]
    h = np.asarray(h_sequence, dtype=np.float64)
    if L.shape[0] != h.shape[0]:
        raise InvalidArgumentError(
            f"log_diag_R has {L.shape[0]} rows but h_sequence has {h.shape[0]} entries"
        )
    mask = np.ones(h.shape[0], dtype=bool) if qr_mask is None else np.asarray(qr_mask, dtype=bool)
    if mask.shape != h.shape:
        raise InvalidArgumentError(f"qr_mask has shape {mask.shape}, expected {h.shape}")

    idx = np.flatnonzero(mask)
    t_events = np.cumsum(h)[idx]
    ld = L[idx]
    if scheme is WeightScheme.ADAPTIVE:
        return np.cumsum(ld, axis=0) / t_events[:, None]
    block = np.diff(np.concatenate(([0.0], t_events)))
    if qr_mask is None:
        block = h
    counts = np.arange(1, idx.size + 1, dtype=np.float64)
    return np.cumsum(ld / block[:, None], axis=0) / counts[:, None]
