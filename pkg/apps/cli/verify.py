"""
LyapEx - Verifikations-Suiten
Randomisierte Eigenschaftsprüfungen gegen die analytischen Orakel (Desk-Skala)
"""

from __future__ import annotations

import hashlib
import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from apps.analysis.diagnostics import collect_step_maps, fast_invertibility_diagnostic
from apps.analysis.exterior import compound_volume_check, exterior_lemma_check
from apps.analysis.gronwall import gronwall_bound, gronwall_extremal, relative_error_bound, sample_admissible_sequence
from apps.analysis.linear_oracle import (
    LinearOracleParams, fit_consistency_constant, linear_relative_global_error, mu1_bounds,
    mu1_closed_form, theoretical_limit, uniform_weight_bounds, uniform_weight_closed_form,
)
from apps.benettin.runner import RunConfig, TransientSpec, run
from apps.benettin.schedules import (
    StepsizeSchedule, check_conditions, p_series_partial_sum, p_series_zeta_estimate,
)
from apps.benettin.weights import (
    WeightScheme, check_weight_conditions, identity_residual_from_weights, weight_identity_residual,
    weights_vector,
)
from apps.dynamics.integrators import SolverSpec, estimate_order
from apps.dynamics.systems import make_linear, make_linear_diagonal, make_lorenz63
from apps.errors import InvalidArgumentError
from apps.monitor.metrics import record_verify_check

logger = logging.getLogger(__name__)

GRONWALL_CASES = 1000
EXTERIOR_CASES = 200
ORACLE_CASES = 20
BOUNDS_CASES = 50
IDENTITY_CASES = 1000

ORACLE_TOL = 1e-10
IDENTITY_TOL = 1e-12
VOLUME_TOL = 1e-8
INVERTIBILITY_TOL = 1e-12
ORDER_TOL = 0.2


@dataclass(frozen=True)
class CheckResult:
    """Eine (ggf. über viele Fälle aggregierte) Prüfung; margin >= 0 heißt bestanden"""
    suite: str
    name: str
    digest: str
    margin: float
    passed: bool

    def format_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.suite:<16} {self.name:<40} {self.digest} margin={self.margin:+.3e} {status}"


def inputs_digest(*parts) -> str:
    """Kurzer SHA-256 über die Eingaben einer Prüfung"""
    digest = hashlib.sha256()
    for part in parts:
        if isinstance(part, np.ndarray):
            digest.update(np.ascontiguousarray(part, dtype=np.float64).tobytes())
        else:
            digest.update(repr(part).encode("utf-8"))
    return digest.hexdigest()[:12]


def _check(suite: str, name: str, margins: Iterable[float], *inputs, slack: float = 0.0) -> CheckResult:
    worst = float(min(margins))
    return CheckResult(suite, name, inputs_digest(name, *inputs), worst, worst >= -slack)


def _random_schedule(rng: np.random.Generator, h_max: float = 0.2) -> StepsizeSchedule:
    if rng.random() < 0.5:
        return StepsizeSchedule.constant(float(rng.uniform(0.001, min(0.1, h_max))))
    return StepsizeSchedule.power(float(rng.uniform(0.25, 1.0)), float(rng.uniform(0.01, h_max)))


def _euler() -> SolverSpec:
    return SolverSpec.from_name("euler")


# ----------------------------------------------------------------------
# Suiten
# ----------------------------------------------------------------------

def suite_gronwall(seed: int) -> list[CheckResult]:
    """Rekursions-Orakel: zulässige Folgen liegen unter der Extremalfolge und der Schranke."""
    rng = np.random.default_rng(seed)
    admissible, extremal, bound = [], [], []
    for _ in range(GRONWALL_CASES):
        n = int(rng.integers(1, 61))
        b = rng.exponential(0.05, n) * (rng.random(n) < 0.9)
        a = sample_admissible_sequence(b, rng)
        c = gronwall_extremal(b)
        for N in range(1, n + 1):
            rhs = math.fsum((1.0 + a[:N]) * b[:N])
            admissible.append((rhs - a[N]) / (1.0 + rhs))
            extremal.append((c[N] - a[N]) / (1.0 + c[N]))
            B = gronwall_bound(b, N)
            bound.append((B - c[N]) / (1.0 + B))
    inputs = ("gronwall", seed, GRONWALL_CASES)
    return [
        _check("gronwall", f"recursion_admissible[{GRONWALL_CASES}]", admissible, *inputs, slack=1e-12),
        _check("gronwall", f"extremal_dominates[{GRONWALL_CASES}]", extremal, *inputs, slack=1e-12),
        _check("gronwall", f"bound_holds[{GRONWALL_CASES}]", bound, *inputs, slack=1e-12),
    ]


def _volume_cases(rng: np.random.Generator) -> list[tuple[str, RunConfig, Sequence[int]]]:
    A = 0.5 * rng.standard_normal((3, 3))
    return [
        ("linear_diagonal_euler", RunConfig(
            system=make_linear_diagonal([1.0, -2.0]), solver=_euler(),
            schedule=StepsizeSchedule.power(0.5, 0.1), k=2, N=200, seed=int(rng.integers(1 << 31)),
        ), (1, 2)),
        ("lorenz63_rk4", RunConfig(
            system=make_lorenz63(), solver=SolverSpec.from_name("rk4"),
            schedule=StepsizeSchedule.constant(0.001), k=3, N=500, seed=int(rng.integers(1 << 31)),
        ), (1, 2, 3)),
        ("random3x3_euler", RunConfig(
            system=make_linear(A), solver=_euler(),
            schedule=StepsizeSchedule.constant(0.01), k=3, N=100, seed=int(rng.integers(1 << 31)),
        ), (1, 2)),
    ]


def suite_exterior(seed: int) -> list[CheckResult]:
    """Rechenregeln äußerer Potenzen auf Zufallsmatrizen und das Volumen-Orakel."""
    rng = np.random.default_rng(seed)
    margins: dict[str, list[float]] = {}
    for _ in range(EXTERIOR_CASES):
        d = int(rng.integers(2, 7))
        L = int(rng.integers(1, d + 1))
        k = int(rng.integers(1, L)) if L > 1 else 1
        A = rng.standard_normal((d, d))
        B = A + 0.1 * rng.standard_normal((d, d))
        for check in exterior_lemma_check(A, B, L, k).checks:
            scale = max(1.0, abs(check.rhs))
            margins.setdefault(check.item, []).append(check.margin / scale)

    results = [
        _check("exterior", f"item_{item}[{len(values)}]", values, "exterior", seed, slack=1e-10)
        for item, values in margins.items()
    ]
    for name, config, orders in _volume_cases(rng):
        result = run(config)
        residuals = [compound_volume_check(config, result, L) for L in orders]
        results.append(_check(
            "exterior", f"volume_{name}", [VOLUME_TOL - r for r in residuals], name, config.seed,
        ))
    results.extend(invertibility_checks(seed))
    return results


def invertibility_checks(seed: int) -> list[CheckResult]:
    """Schnelle Invertierbarkeit: exakt 1 für das Diagonalsystem, positiv für Lorenz-63."""
    diagonal = RunConfig(
        system=make_linear_diagonal([1.0, -2.0]), solver=SolverSpec.from_name("exact"),
        schedule=StepsizeSchedule.power(0.5, 0.1), k=2, N=200, seed=seed,
    )
    maps = collect_step_maps(diagonal)
    deviations = [
        abs(fast_invertibility_diagnostic(maps, L, samples=200, seed=seed) - 1.0) for L in (1, 2)
    ]
    lorenz = RunConfig(
        system=make_lorenz63(), solver=SolverSpec.from_name("rk4"),
        schedule=StepsizeSchedule.constant(0.01), k=3, N=200, seed=seed,
        transient=TransientSpec(steps=1000, h=0.01),
    )
    maps = collect_step_maps(lorenz)
    minima = [fast_invertibility_diagnostic(maps, L, samples=200, seed=seed) for L in (1, 2, 3)]
    return [
        _check(
            "exterior", "invertibility_diagonal_exact", [INVERTIBILITY_TOL - d for d in deviations],
            "diagonal", seed,
        ),
        # strikt positiv
        _check(
            "exterior", "invertibility_lorenz63_rk4", minima, "lorenz63", seed,
            slack=-np.finfo(np.float64).tiny,
        ),
    ]


def _random_oracle_params(rng: np.random.Generator, N_max: int = 1000) -> LinearOracleParams:
    lam1 = float(rng.uniform(0.2, 2.0))
    lam2 = lam1 - float(rng.uniform(0.5, 3.0))
    alpha1 = float(rng.uniform(0.1, 1.0)) * float(rng.choice([-1.0, 1.0]))
    alpha2 = float(rng.uniform(-1.0, 1.0))
    return LinearOracleParams(
        lambda1=lam1, lambda2=lam2, alpha1=alpha1, alpha2=alpha2,
        schedule=_random_schedule(rng), N=int(rng.integers(1, N_max + 1)),
    )


def _oracle_run(params: LinearOracleParams, V0: Sequence[float], schemes=(WeightScheme.ADAPTIVE,)):
    config = RunConfig(
        system=make_linear_diagonal([params.lambda1, params.lambda2]),
        solver=_euler(),
        schedule=params.schedule,
        k=1,
        N=params.N,
        V0=np.asarray(V0, dtype=np.float64).reshape(2, 1),
        weight_schemes=tuple(schemes),
        record_every=params.N,
        keep_log_diag=False,
        track_trace=False,
    )
    return run(config)


def suite_linear_oracle(seed: int) -> list[CheckResult]:
    """Benettin-Läufe gegen die geschlossene Form auf dem Diagonalsystem."""
    rng = np.random.default_rng(seed)
    adaptive, uniform = [], []
    for _ in range(ORACLE_CASES):
        params = _random_oracle_params(rng)
        mu = float(_oracle_run(params, [params.alpha1, params.alpha2]).final_mu[0])
        oracle = mu1_closed_form(params)
        adaptive.append(ORACLE_TOL - abs(mu - oracle) / max(1.0, abs(oracle)))

        result = _oracle_run(params, [1.0, 0.0], schemes=(WeightScheme.UNIFORM,))
        muw = float(result.final_mu_weighted(WeightScheme.UNIFORM)[0])
        exact = uniform_weight_closed_form(params.lambda1, params.schedule, params.N)
        uniform.append(ORACLE_TOL - abs(muw - exact) / max(1.0, abs(exact)))

    persistent = LinearOracleParams(1.0, -2.0, 1.0, 0.0, StepsizeSchedule.constant(0.05), 10_000)
    mu_persistent = float(_oracle_run(persistent, [1.0, 0.0]).final_mu[0])
    persistent_margin = 1e-6 - abs(mu_persistent - theoretical_limit(0.05, 1.0))

    exact_config = RunConfig(
        system=make_linear_diagonal([1.0, -2.0]), solver=SolverSpec.from_name("exact"),
        schedule=StepsizeSchedule.constant(0.05), k=2, N=100, V0=np.eye(2), track_trace=False,
    )
    exact_mu = run(exact_config).final_mu
    exact_margin = 1e-12 - float(np.max(np.abs(exact_mu - np.array([1.0, -2.0]))))

    return [
        _check("linear-oracle", f"closed_form_adaptive[{ORACLE_CASES}]", adaptive, seed, ORACLE_CASES),
        _check("linear-oracle", f"closed_form_uniform[{ORACLE_CASES}]", uniform, seed, ORACLE_CASES),
        _check("linear-oracle", "persistent_error_h0.05", [persistent_margin], persistent.N),
        _check("linear-oracle", "exact_solver_spectrum", [exact_margin], exact_config.N),
    ]


def suite_bounds(seed: int) -> list[CheckResult]:
    """Zweiseitige Schranken für μ_1, uniforme Gewichte und den globalen Fehler."""
    rng = np.random.default_rng(seed)
    mu_margins = []
    for _ in range(BOUNDS_CASES):
        params = _random_oracle_params(rng)
        lower, upper = mu1_bounds(params)
        value = mu1_closed_form(params)
        scale = max(1.0, abs(value))
        mu_margins.append(min(value - lower, upper - value) / scale)

    uniform_margins = []
    sched = StepsizeSchedule.power(0.5, 0.1)
    for N in (10, 100, 1000, 10_000):
        lower, upper = uniform_weight_bounds(1.0, sched, N)
        value = uniform_weight_closed_form(1.0, sched, N)
        uniform_margins.append(min(value - lower, upper - value))

    system = make_linear_diagonal([1.0, -2.0])
    c = fit_consistency_constant(system, _euler(), np.ones(2), (0.01, 0.005, 0.0025))
    global_margins = []
    for sched in (StepsizeSchedule.constant(0.01), StepsizeSchedule.power(0.5, 0.05)):
        for N in (10, 100, 1000):
            measured = linear_relative_global_error([1.0, -2.0], sched, N)
            global_margins.append(relative_error_bound(c, sched, 1.0, N) - measured)

    taylor_margins = [
        h * h / 3.0 - abs(theoretical_limit(h, 1.0) - (1.0 - h / 2.0))
        for h in np.geomspace(0.001, 0.1, 9)
    ]
    return [
        _check("bounds", f"mu1_two_sided[{BOUNDS_CASES}]", mu_margins, seed, BOUNDS_CASES, slack=1e-12),
        _check("bounds", "uniform_weight_two_sided", uniform_margins, "power0.5", slack=1e-12),
        _check("bounds", "global_error_gronwall", global_margins, c),
        _check("bounds", "persistent_limit_taylor", taylor_margins, "taylor"),
    ]


def suite_weights_identity(seed: int) -> list[CheckResult]:
    """Gewichtsidentität für Zufallsgewichte und die eingebauten Schemata."""
    rng = np.random.default_rng(seed)
    random_margins = []
    for _ in range(IDENTITY_CASES):
        N = int(rng.integers(1, 201))
        h = rng.uniform(0.01, 0.2, N)
        w = rng.random(N)
        w /= w.sum()
        random_margins.append(IDENTITY_TOL - identity_residual_from_weights(w, h))

    scheme_margins, normalisation = [], []
    schedules = (StepsizeSchedule.constant(0.05), StepsizeSchedule.power(0.5, 0.1), StepsizeSchedule.power(1.0, 0.1))
    for scheme in WeightScheme:
        for sched in schedules:
            for N in (1000, 10_000):
                scheme_margins.append(IDENTITY_TOL - weight_identity_residual(scheme, sched, N))
                normalisation.append(IDENTITY_TOL - abs(math.fsum(weights_vector(scheme, sched, N)) - 1.0))
    return [
        _check("weights-identity", f"random_weights[{IDENTITY_CASES}]", random_margins, seed, IDENTITY_CASES),
        _check("weights-identity", "builtin_schemes", scheme_margins, "schemes"),
        _check("weights-identity", "normalisation", normalisation, "schemes"),
    ]


def _decade_ratio(values: np.ndarray) -> float:
    """Zuwachs der Partialsumme über die letzte Dekade relativ zur vorletzten"""
    ps = np.cumsum(values)
    n = values.size
    return float((ps[-1] - ps[n // 10 - 1]) / (ps[n // 10 - 1] - ps[n // 100 - 1]))


def suite_conditions(seed: int) -> list[CheckResult]:
    """Schrittweitenbedingungen gegen p-Reihen-Brute-Force, Gewichtsbedingungen und Ordnungen."""
    N = 100_000
    table = [
        (StepsizeSchedule.constant(0.05), 1.0),
        (StepsizeSchedule.power(0.5, 0.1), 1.0),
        (StepsizeSchedule.power(0.75, 0.1), 1.0),
        (StepsizeSchedule.power(1.0, 0.1), 4.0),
        (StepsizeSchedule.power(0.25, 0.1), 4.0),
    ]
    verdicts, zeta_margins = [], []
    for sched, p in table:
        report = check_conditions(sched, p)
        rule = sched.rule_values(N)
        brute_diverges = _decade_ratio(rule) >= 0.99
        brute_converges = _decade_ratio(rule ** (p + 1.0)) < 0.99
        agree = brute_diverges == report.sum_diverges and brute_converges == report.p_series_converges
        verdicts.append(1.0 if agree else -1.0)
        if sched.s is not None and sched.s * (p + 1.0) > 1.0:
            brute = p_series_partial_sum(sched, p, N)
            estimate = p_series_zeta_estimate(float(sched.s), p, N)
            zeta_margins.append(1e-9 - abs(brute - estimate) / estimate)

    weight_margins = []
    report = check_weight_conditions(WeightScheme.UNIFORM, StepsizeSchedule.power(0.5, 0.1), N)
    weight_margins.append(min(report.sup_ratio - 1.8, 2.1 - report.sup_ratio) if report.all_hold else -1.0)
    report = check_weight_conditions(WeightScheme.UNIFORM, StepsizeSchedule.power(1.0, 0.1), N)
    weight_margins.append(1.0 if not report.bounded and report.increasing_at_horizon else -1.0)
    report = check_weight_conditions(WeightScheme.ADAPTIVE, StepsizeSchedule.power(0.5, 0.1), N)
    weight_margins.append(1.0 if report.all_hold else -1.0)

    system = make_linear_diagonal([1.0, -2.0])
    x = np.ones(2)
    order_margins = [
        ORDER_TOL - abs(estimate_order(system, SolverSpec.from_name("euler"), x) - 1.0),
        ORDER_TOL - abs(estimate_order(system, SolverSpec.from_name("rk4"), x) - 4.0),
        1.0 if math.isinf(estimate_order(system, SolverSpec.from_name("exact"), x)) else -1.0,
    ]
    return [
        _check("conditions", f"verdicts_vs_brute_force[{len(table)}]", verdicts, N),
        _check("conditions", "p_series_vs_zeta", zeta_margins, N),
        _check("conditions", "weight_conditions", weight_margins, N),
        _check("conditions", "consistency_orders", order_margins, "linear_diagonal"),
    ]


SUITES: dict[str, Callable[[int], list[CheckResult]]] = {
    "gronwall": suite_gronwall,
    "exterior": suite_exterior,
    "linear-oracle": suite_linear_oracle,
    "bounds": suite_bounds,
    "weights-identity": suite_weights_identity,
    "conditions": suite_conditions,
}


def available_suites() -> list[str]:
    return [*SUITES, "all"]


def run_suites(name: str, seed: int = 0) -> list[CheckResult]:
    """Führt eine Suite oder "all" aus.

    Raises:
        InvalidArgumentError: Unbekannte Suite
    """
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise InvalidArgumentError(f"unknown suite '{name}', expected one of {available_suites()}")

    results: list[CheckResult] = []
    for suite in names:
        logger.info(f"Verifikation gestartet: {suite} (seed={seed})")
        checks = SUITES[suite](seed)
        for check in checks:
            record_verify_check(check.suite, check.passed)
            logger.info(f"{check.suite}/{check.name}: margin={check.margin:.3e} {'PASS' if check.passed else 'FAIL'}")
        results.extend(checks)
    return results
