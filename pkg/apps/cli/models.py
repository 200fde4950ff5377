"""
LyapEx - Experiment-Konfiguration
Pydantic-Modell für die flachen key=value-Dateien von run und reproduce
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from apps.benettin.runner import RunConfig, TransientSpec
from apps.benettin.schedules import parse_schedule
from apps.benettin.weights import WeightScheme, parse_weight_list
from apps.cli.config_file import dump_flat, load_flat, parse_flat
from apps.dynamics.integrators import SolverMethod, SolverSpec
from apps.dynamics.systems import SystemDef, build_system
from apps.errors import ConfigError

logger = logging.getLogger(__name__)

SystemName = Literal["linear_diagonal", "linear", "lorenz63", "lorenz96"]

# Erlaubte Systemparameter je System (Konfigurationsschlüssel ohne "system.")
_SYSTEM_PARAMS: dict[str, tuple[str, ...]] = {
    "linear_diagonal": ("diag",),
    "linear": ("matrix",),
    "lorenz63": ("sigma", "rho", "beta"),
    "lorenz96": ("d", "F"),
}

_REQUIRED_PARAMS = {"linear_diagonal": "diag", "linear": "matrix"}

_INT_FIELDS = ("k", "N", "transient_steps", "seed", "record_every", "qr_interval", "system_d")


def parse_vector(text: str) -> list[float]:
    """ "1, -2.5" -> [1.0, -2.5]"""
    parts = [p.strip() for p in text.split(",")]
    if not parts or any(not p for p in parts):
        raise ValueError(f"expected a comma separated list of numbers, got '{text}'")
    return [float(p) for p in parts]


def parse_matrix(text: str) -> list[list[float]]:
    """Zeilen durch ";" getrennt, Spalten durch "," """
    rows = [parse_vector(row) for row in text.split(";")]
    if len({len(row) for row in rows}) != 1:
        raise ValueError(f"matrix rows have different lengths: '{text}'")
    return rows


def _fmt(value: float) -> str:
    # repr liefert die kürzeste exakt rückführbare Darstellung
    return repr(float(value))


def _fmt_vector(values: list[float]) -> str:
    return ",".join(_fmt(v) for v in values)


def _fmt_matrix(rows: list[list[float]]) -> str:
    return ";".join(_fmt_vector(row) for row in rows)


class ExperimentConfig(BaseModel):
    """Eine Experiment-Konfiguration (ein Benettin-Lauf)"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    system_name: SystemName = Field(alias="system.name")
    system_diag: Optional[list[float]] = Field(default=None, alias="system.diag")
    system_matrix: Optional[list[list[float]]] = Field(default=None, alias="system.matrix")
    system_sigma: Optional[float] = Field(default=None, alias="system.sigma")
    system_rho: Optional[float] = Field(default=None, alias="system.rho")
    system_beta: Optional[float] = Field(default=None, alias="system.beta")
    system_d: Optional[int] = Field(default=None, ge=4, alias="system.d")
    system_F: Optional[float] = Field(default=None, alias="system.F")

    solver: SolverMethod
    schedule_rule: str = Field(default="constant", alias="schedule.rule")
    schedule_h: float = Field(gt=0.0, le=1.0, alias="schedule.h")
    weights: list[WeightScheme] = Field(default_factory=lambda: [WeightScheme.ADAPTIVE])

    k: int = Field(ge=1)
    N: int = Field(ge=1)
    transient_steps: int = Field(default=0, ge=0)
    transient_h: float = Field(default=0.001, gt=0.0, le=1.0)
    seed: int = Field(default=0, ge=0)
    record_every: int = Field(default=1, ge=1)
    qr_interval: int = Field(default=1, ge=1)
    output_path: Optional[str] = None
    x0: Optional[list[float]] = None
    V0: Optional[list[list[float]]] = None

    @field_validator(*_INT_FIELDS, mode="before")
    @classmethod
    def validate_integer_text(cls, v):
        """Erlaubt "1e5" als Schreibweise für ganze Zahlen"""
        if isinstance(v, str):
            try:
                f = float(v)
            except ValueError:
                return v
            if f.is_integer():
                return int(f)
        return v

    @field_validator("system_diag", "x0", mode="before")
    @classmethod
    def validate_vector(cls, v):
        return parse_vector(v) if isinstance(v, str) else v

    @field_validator("system_matrix", mode="before")
    @classmethod
    def validate_matrix(cls, v):
        return parse_matrix(v) if isinstance(v, str) else v

    @field_validator("V0", mode="before")
    @classmethod
    def validate_initial_basis(cls, v):
        if isinstance(v, str):
            return None if v.strip().lower() == "random" else parse_matrix(v)
        return v

    @field_validator("weights", mode="before")
    @classmethod
    def validate_weights(cls, v):
        return parse_weight_list(v) if isinstance(v, str) else v

    @field_validator("schedule_rule")
    @classmethod
    def validate_schedule_rule(cls, v: str) -> str:
        kind = v.strip().split(":", 1)[0].lower()
        if kind not in ("constant", "power", "explicit"):
            raise ValueError(f"unknown schedule rule '{v}', expected constant, power:<s> or explicit:<path>")
        return v.strip()

    @field_validator("output_path", mode="before")
    @classmethod
    def validate_output_path(cls, v):
        if isinstance(v, str) and not v.strip():
            return None
        return v

    @model_validator(mode="after")
    def validate_system_params(self) -> "ExperimentConfig":
        allowed = _SYSTEM_PARAMS[self.system_name]
        for key in ("diag", "matrix", "sigma", "rho", "beta", "d", "F"):
            if getattr(self, f"system_{key}") is not None and key not in allowed:
                raise ValueError(f"system.{key} is not a parameter of system '{self.system_name}'")
        required = _REQUIRED_PARAMS.get(self.system_name)
        if required and getattr(self, f"system_{required}") is None:
            raise ValueError(f"system '{self.system_name}' needs system.{required}")
        return self

    # ------------------------------------------------------------------

    @classmethod
    def from_mapping(cls, values: dict[str, str], source: str = "<mapping>") -> "ExperimentConfig":
        """Validiert ein flaches Dictionary.

        Raises:
            ConfigError: Unbekannte Schlüssel oder ungültige Werte
        """
        try:
            return cls.model_validate(values)
        except ValidationError as exc:
            problems = "; ".join(
                f"{'.'.join(str(part) for part in err['loc']) or '<config>'}: {err['msg']}"
                for err in exc.errors()
            )
            raise ConfigError(f"{source}: {problems}") from exc

    @classmethod
    def from_text(cls, text: str, source: str = "<string>") -> "ExperimentConfig":
        return cls.from_mapping(parse_flat(text, source=source), source=source)

    @classmethod
    def from_file(cls, path: str | Path) -> "ExperimentConfig":
        return cls.from_mapping(load_flat(path), source=str(path))

    def system_params(self) -> dict:
        params = {}
        for key in _SYSTEM_PARAMS[self.system_name]:
            value = getattr(self, f"system_{key}")
            if value is not None:
                params["A" if key == "matrix" else key] = value
        return params

    def build_system(self) -> SystemDef:
        return build_system(self.system_name, **self.system_params())

    def with_seed(self, seed: int) -> "ExperimentConfig":
        return self.model_copy(update={"seed": seed})

    def with_output_path(self, path: str | Path) -> "ExperimentConfig":
        return self.model_copy(update={"output_path": str(path)})

    def to_run_config(
        self,
        progress_every: int = 100_000,
        keep_log_diag: bool = True,
        label: str = "",
    ) -> RunConfig:
        """Baut und validiert den RunConfig.

        Raises:
            InvalidArgumentError: Verletzte Invariante (z.B. k > d, V0 mit falscher Form)
        """
        config = RunConfig(
            system=self.build_system(),
            solver=SolverSpec.from_name(self.solver),
            schedule=parse_schedule(self.schedule_rule, self.schedule_h),
            k=self.k,
            N=self.N,
            x0=None if self.x0 is None else np.asarray(self.x0, dtype=np.float64),
            V0=None if self.V0 is None else np.asarray(self.V0, dtype=np.float64),
            seed=self.seed,
            transient=TransientSpec(steps=self.transient_steps, h=self.transient_h),
            qr_interval=self.qr_interval,
            weight_schemes=tuple(self.weights),
            record_every=self.record_every,
            keep_log_diag=keep_log_diag,
            progress_every=progress_every,
            label=label,
        )
        config.validate()
        return config

    def to_flat(self) -> dict[str, str]:
        """Flache Darstellung in fester Schlüsselreihenfolge"""
        values = {"system.name": self.system_name}
        for key in _SYSTEM_PARAMS[self.system_name]:
            value = getattr(self, f"system_{key}")
            if value is None:
                continue
            if key == "diag":
                values["system.diag"] = _fmt_vector(value)
            elif key == "matrix":
                values["system.matrix"] = _fmt_matrix(value)
            elif key == "d":
                values["system.d"] = str(value)
            else:
                values[f"system.{key}"] = _fmt(value)
        values.update({
            "solver": self.solver.value,
            "schedule.rule": self.schedule_rule,
            "schedule.h": _fmt(self.schedule_h),
            "weights": ",".join(w.value for w in self.weights),
            "k": str(self.k),
            "N": str(self.N),
            "transient_steps": str(self.transient_steps),
            "transient_h": _fmt(self.transient_h),
            "seed": str(self.seed),
            "record_every": str(self.record_every),
            "qr_interval": str(self.qr_interval),
        })
        if self.x0 is not None:
            values["x0"] = _fmt_vector(self.x0)
        values["V0"] = "random" if self.V0 is None else _fmt_matrix(self.V0)
        if self.output_path is not None:
            values["output_path"] = self.output_path
        return values

    def to_text(self, header: Optional[str] = None) -> str:
        return dump_flat(self.to_flat(), header=header)
