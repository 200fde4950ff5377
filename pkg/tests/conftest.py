"""
LyapEx - Pytest Configuration
Gemeinsame Fixtures für Systeme, Verfahren und Konfigurationsdateien
"""

import os
from pathlib import Path
from typing import Callable

import numpy as np
import pytest

from apps.benettin.schedules import StepsizeSchedule
from apps.dynamics.integrators import SolverSpec
from apps.dynamics.systems import SystemDef, make_linear_diagonal, make_lorenz63, make_lorenz96


LYAPEX_ENV = (
    'LYAPEX_SEED', 'LYAPEX_LOG_LEVEL', 'LYAPEX_OUTPUT_DIR',
    'LYAPEX_PROGRESS_EVERY', 'LYAPEX_JOBS', 'LYAPEX_METRICS_FILE',
)


@pytest.fixture(autouse=True)
def clean_lyapex_env(monkeypatch):
    """Entfernt LYAPEX_* Variablen, damit Tests unabhängig von der Shell sind"""
    for name in LYAPEX_ENV:
        monkeypatch.delenv(name, raising=False)
    yield


@pytest.fixture
def linear_system() -> SystemDef:
    """diag(1, -2), das lineare Referenzsystem"""
    return make_linear_diagonal([1.0, -2.0])


@pytest.fixture
def lorenz63() -> SystemDef:
    return make_lorenz63()


@pytest.fixture
def lorenz96_small() -> SystemDef:
    return make_lorenz96(d=8, F=8.0)


@pytest.fixture
def euler() -> SolverSpec:
    return SolverSpec.from_name("euler")


@pytest.fixture
def rk4() -> SolverSpec:
    return SolverSpec.from_name("rk4")


@pytest.fixture
def exact() -> SolverSpec:
    return SolverSpec.from_name("exact")


@pytest.fixture
def power_half() -> StepsizeSchedule:
    """h_n = 0.1/√n"""
    return StepsizeSchedule.power(0.5, 0.1)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def write_config(tmp_path) -> Callable[..., Path]:
    """Schreibt eine flache Konfigurationsdatei nach tmp_path"""
    def _write(text: str, name: str = "experiment.cfg") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write


@pytest.fixture
def linear_config_text(tmp_path) -> str:
    """Euler auf diag(1,-2), h=0.05, V0 = e_1"""
    return (
        "# linear benchmark\n"
        "system.name = linear_diagonal\n"
        "system.diag = 1,-2\n"
        "solver = euler\n"
        "schedule.rule = constant\n"
        "schedule.h = 0.05\n"
        "weights = adaptive,uniform\n"
        "k = 1\n"
        "N = 1000\n"
        "record_every = 100\n"
        "V0 = 1;0\n"
        f"output_path = {tmp_path / 'linear.csv'}\n"
    )
