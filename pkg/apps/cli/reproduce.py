"""
LyapEx - Reproduktions-Bündel
Kurvensätze für die Abbildungen (linear, Lorenz-63, Lorenz-96) als CSV plus Manifest
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from apps.benettin.runner import RunResult, run
from apps.benettin.weights import WeightScheme
from apps.cli.config_file import atomic_write_text, dump_flat, load_flat
from apps.cli.csv_out import write_columns_csv, write_result_csv
from apps.cli.models import ExperimentConfig
from apps.errors import ConfigError, InvalidArgumentError
from apps.monitor.metrics import record_reproduce_curve

logger = logging.getLogger(__name__)

# Exakte Werte für Lorenz-63 mit σ=10, β=8/3: λ_2 = 0, Σλ = −(σ+1+β)
LORENZ63_LE2 = 0.0
LORENZ63_SUM = -41.0 / 3.0


@dataclass(frozen=True)
class ScaleProfile:
    """Horizonte und Aufzeichnungsabstände einer Skala"""
    name: str
    linear_N: int
    linear_record: int
    lorenz63_N: int
    lorenz63_record: int
    lorenz96_N: int
    lorenz96_reference_N: int
    lorenz96_record: int


SCALES: dict[str, ScaleProfile] = {
    "desk": ScaleProfile("desk", 100_000, 100, 100_000, 100, 100_000, 1_000_000, 1_000),
    "full": ScaleProfile("full", 1_000_000, 1_000, 10_000_000, 10_000, 1_000_000, 10_000_000, 10_000),
}


@dataclass(frozen=True)
class CurveSpec:
    """Eine Kurve: Konfiguration plus das Schema, das die Kurve darstellt"""
    curve_id: str
    config: ExperimentConfig

    @property
    def scheme(self) -> WeightScheme:
        return self.config.weights[0]


@dataclass
class ReproduceReport:
    bundle: str
    scale: str
    out_dir: Path
    manifest: Optional[Path] = None
    files: list[Path] = field(default_factory=list)


def _tag(value: float) -> str:
    """Punktfreie Kurzform für Kurven-IDs: 0.005 -> 0p005"""
    return f"{value:g}".replace(".", "p").replace("-", "m")


def _config(**values) -> ExperimentConfig:
    return ExperimentConfig.model_validate({key.replace("__", "."): value for key, value in values.items()})


# ----------------------------------------------------------------------
# Bündel
# ----------------------------------------------------------------------

def _linear_curves(profile: ScaleProfile, seed: int) -> list[CurveSpec]:
    common = dict(
        system__name="linear_diagonal", system__diag="1,-2", solver="euler", k=2,
        N=profile.linear_N, record_every=profile.linear_record, seed=seed, V0="random",
    )
    curves = [
        CurveSpec(f"const_h{_tag(h)}", _config(**common, schedule__rule="constant", schedule__h=h))
        for h in (0.05, 0.01, 0.005)
    ]
    curves.append(CurveSpec("power0p5_h0p1", _config(**common, schedule__rule="power:0.5", schedule__h=0.1)))
    curves.append(CurveSpec(
        "power0p5_h0p1_uniform",
        _config(**common, schedule__rule="power:0.5", schedule__h=0.1, weights="uniform"),
    ))
    return curves


def _lorenz63_curves(profile: ScaleProfile, seed: int) -> list[CurveSpec]:
    common = dict(
        system__name="lorenz63", solver="rk4", k=3, N=profile.lorenz63_N,
        record_every=profile.lorenz63_record, transient_steps=100_000, transient_h=0.001, seed=seed,
    )
    curves = [
        CurveSpec(f"const_h{_tag(h)}", _config(**common, schedule__rule="constant", schedule__h=h))
        for h in (0.001, 0.0005, 0.00025)
    ]
    curves.append(CurveSpec("power0p5_h0p1", _config(**common, schedule__rule="power:0.5", schedule__h=0.1)))
    curves.append(CurveSpec(
        "power0p5_h0p1_uniform",
        _config(**common, schedule__rule="power:0.5", schedule__h=0.1, weights="uniform"),
    ))
    return curves


def _lorenz96_curves(profile: ScaleProfile, seed: int) -> list[CurveSpec]:
    common = dict(
        system__name="lorenz96", system__d=40, system__F=10.0, solver="rk4", k=40,
        record_every=profile.lorenz96_record, transient_steps=100_000, transient_h=0.01, seed=seed,
    )
    N = profile.lorenz96_N
    return [
        CurveSpec("const_h0p01", _config(**common, N=N, schedule__rule="constant", schedule__h=0.01)),
        CurveSpec("power0p5_h0p1", _config(**common, N=N, schedule__rule="power:0.5", schedule__h=0.1)),
        CurveSpec(
            "power0p5_h0p1_uniform",
            _config(**common, N=N, schedule__rule="power:0.5", schedule__h=0.1, weights="uniform"),
        ),
        CurveSpec(
            "reference_h0p001",
            _config(**common, N=profile.lorenz96_reference_N, schedule__rule="constant", schedule__h=0.001),
        ),
    ]


def _linear_sweep_curves(profile: ScaleProfile, seed: int) -> list[CurveSpec]:
    common = dict(
        system__name="linear_diagonal", system__diag="1,-2", solver="euler", k=1,
        N=profile.linear_N, record_every=profile.linear_record, seed=seed,
    )
    curves = []
    for a in (0.0, 0.25, 0.5, 0.75, 1.0):
        V0 = f"{1.0 - a!r};{a!r}"
        curves.append(CurveSpec(
            f"v0_a{_tag(a)}_const_h0p005", _config(**common, V0=V0, schedule__rule="constant", schedule__h=0.005),
        ))
        curves.append(CurveSpec(
            f"v0_a{_tag(a)}_power0p5_h0p1", _config(**common, V0=V0, schedule__rule="power:0.5", schedule__h=0.1),
        ))
    for s in (0.25, 0.5, 0.75, 1.0):
        curves.append(CurveSpec(
            f"power{_tag(s)}_h0p1", _config(**common, V0="1;0", schedule__rule=f"power:{s!r}", schedule__h=0.1),
        ))
    return curves


BUNDLES = {
    "fig1": _linear_curves,
    "fig2": _lorenz63_curves,
    "fig3": _lorenz63_curves,
    "fig4": _lorenz96_curves,
    "linear-sweep": _linear_sweep_curves,
}


def available_bundles() -> list[str]:
    return list(BUNDLES)


def bundle_curves(bundle: str, scale: str = "desk", seed: int = 0) -> list[CurveSpec]:
    """Kurven eines Bündels.

    Raises:
        InvalidArgumentError: Unbekanntes Bündel oder unbekannte Skala
    """
    if bundle not in BUNDLES:
        raise InvalidArgumentError(f"unknown bundle '{bundle}', expected one of {available_bundles()}")
    if scale not in SCALES:
        raise InvalidArgumentError(f"unknown scale '{scale}', expected one of {list(SCALES)}")
    return BUNDLES[bundle](SCALES[scale], seed)


# ----------------------------------------------------------------------
# Manifest
# ----------------------------------------------------------------------

def manifest_text(bundle: str, scale: str, curves: list[CurveSpec]) -> str:
    values = {"bundle": bundle, "scale": scale}
    for curve in curves:
        for key, value in curve.config.to_flat().items():
            values[f"curve.{curve.curve_id}.{key}"] = value
    return dump_flat(values, header=f"lyapex reproduce {bundle} --scale={scale}")


def load_manifest(path: str | Path) -> dict[str, ExperimentConfig]:
    """Liest ein Manifest zurück: Kurven-ID -> ExperimentConfig.

    Raises:
        ConfigError: Fehlerhafte Schlüssel oder ungültige Konfigurationen
    """
    grouped: dict[str, dict[str, str]] = {}
    for key, value in load_flat(path).items():
        if key in ("bundle", "scale"):
            continue
        prefix, _, rest = key.partition(".")
        curve_id, _, config_key = rest.partition(".")
        if prefix != "curve" or not curve_id or not config_key:
            raise ConfigError(f"{path}: unexpected manifest key '{key}'")
        grouped.setdefault(curve_id, {})[config_key] = value
    return {
        curve_id: ExperimentConfig.from_mapping(values, source=f"{path}[{curve_id}]")
        for curve_id, values in grouped.items()
    }


# ----------------------------------------------------------------------
# Ausführung
# ----------------------------------------------------------------------

def run_curve(curve: CurveSpec, progress_every: int = 100_000) -> RunResult:
    """Ein Lauf ohne gespeicherte log-Diagonalen (top-level für Prozess-Pools)."""
    config = curve.config.to_run_config(progress_every=progress_every, keep_log_diag=False, label=curve.curve_id)
    return run(config)


def _errors_columns(curve: CurveSpec, result: RunResult) -> dict[str, np.ndarray]:
    steps = result.record_steps
    columns = {
        "n": steps,
        "t": result.t_sequence[steps - 1],
        "le2_error": np.abs(result.mu[:, 1] - LORENZ63_LE2),
        "le_sum_error": np.abs(result.mu.sum(axis=1) - LORENZ63_SUM),
    }
    for scheme in curve.config.weights:
        mu = result.mu_weighted[scheme]
        columns[f"le2_error_{scheme.value}"] = np.abs(mu[:, 1] - LORENZ63_LE2)
        columns[f"le_sum_error_{scheme.value}"] = np.abs(mu.sum(axis=1) - LORENZ63_SUM)
    return columns


def _curve_spectrum(curve: CurveSpec, result: RunResult) -> np.ndarray:
    final = result.final_mu_weighted(curve.scheme)
    return np.sort(final)[::-1]


def reproduce(
    bundle: str,
    scale: str,
    out_dir: str | Path,
    jobs: int = 1,
    seed: int = 0,
    progress_every: int = 100_000,
) -> ReproduceReport:
    """Rechnet alle Kurven eines Bündels und schreibt CSVs und Manifest.

    Args:
        bundle: fig1..fig4 oder linear-sweep
        scale: desk oder full
        out_dir: Zielverzeichnis
        jobs: Anzahl Worker-Prozesse (1 = sequentiell)
        seed: Seed für zufällige Startvektoren

    Raises:
        InvalidArgumentError: Unbekanntes Bündel oder Skala
        RunAbortedError: Ein Lauf ist numerisch gescheitert
    """
    out_dir = Path(out_dir)
    curves = [
        CurveSpec(c.curve_id, c.config.with_output_path(out_dir / f"{bundle}_{c.curve_id}.csv"))
        for c in bundle_curves(bundle, scale, seed)
    ]
    report = ReproduceReport(bundle=bundle, scale=scale, out_dir=out_dir)
    logger.info(f"Reproduktion gestartet: {bundle} ({scale}), {len(curves)} Kurven, jobs={jobs}")
    started = time.perf_counter()

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(run_curve, curves, [progress_every] * len(curves)))
    else:
        results = [run_curve(curve, progress_every) for curve in curves]

    spectra: dict[str, np.ndarray] = {}
    for curve, result in zip(curves, results):
        report.files.append(write_result_csv(curve.config.output_path, result, curve.config.weights))
        if bundle == "fig2":
            report.files.append(write_columns_csv(
                out_dir / f"{bundle}_{curve.curve_id}_errors.csv", _errors_columns(curve, result),
            ))
        if bundle == "fig4":
            spectra[curve.curve_id] = _curve_spectrum(curve, result)
        record_reproduce_curve(bundle)
        logger.info(f"Kurve {curve.curve_id}: mu={np.array2string(result.final_mu[:3], precision=6)} ...")

    if spectra:
        k = next(iter(spectra.values())).size
        columns = {"i": np.arange(1, k + 1), **spectra}
        report.files.append(write_columns_csv(out_dir / f"{bundle}_spectra.csv", columns))

    report.manifest = atomic_write_text(out_dir / f"{bundle}_manifest.cfg", manifest_text(bundle, scale, curves))
    logger.info(f"Reproduktion {bundle} beendet in {time.perf_counter() - started:.1f}s: {out_dir}")
    return report
