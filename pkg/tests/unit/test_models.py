"""
Tests für ExperimentConfig
"""

import numpy as np
import pytest

from apps.benettin.schedules import ScheduleRule
from apps.benettin.weights import WeightScheme
from apps.cli.models import ExperimentConfig, parse_matrix, parse_vector
from apps.dynamics.integrators import SolverMethod
from apps.errors import ConfigError, InvalidArgumentError


LORENZ_TEXT = """
system.name = lorenz63
solver = rk4
schedule.rule = power:0.5
schedule.h = 0.1
weights = adaptive,uniform
k = 3
N = 1e4
transient_steps = 1e3
record_every = 100
"""


@pytest.mark.unit
class TestParsing:
    """Tests für Vektor- und Matrixsyntax"""

    def test_vector(self):
        """Test Komma-Liste"""
        assert parse_vector(" 1, -2.5 ") == [1.0, -2.5]

    def test_matrix(self):
        """Test Zeilen mit ; getrennt"""
        assert parse_matrix("1,0;0,1") == [[1.0, 0.0], [0.0, 1.0]]

    def test_ragged_matrix(self):
        """Test ungleiche Zeilenlängen"""
        with pytest.raises(ValueError):
            parse_matrix("1,0;1")

    def test_empty_entry(self):
        """Test leerer Eintrag"""
        with pytest.raises(ValueError):
            parse_vector("1,,2")


@pytest.mark.unit
class TestExperimentConfig:
    """Tests für Validierung und Umwandlung"""

    def test_from_text(self):
        """Test Lorenz-63-Konfiguration mit Zahlen in e-Notation"""
        config = ExperimentConfig.from_text(LORENZ_TEXT)
        assert config.system_name == "lorenz63"
        assert config.solver is SolverMethod.RK4
        assert config.N == 10_000
        assert config.transient_steps == 1_000
        assert config.weights == [WeightScheme.ADAPTIVE, WeightScheme.UNIFORM]
        assert config.V0 is None

    def test_to_run_config(self):
        """Test RunConfig mit Schrittweitenregel und Transient"""
        run_config = ExperimentConfig.from_text(LORENZ_TEXT).to_run_config(label="l63")
        assert run_config.system.dim == 3
        assert run_config.schedule.rule is ScheduleRule.POWER
        assert run_config.schedule.s == 0.5
        assert run_config.transient.steps == 1_000
        assert run_config.weight_schemes == (WeightScheme.ADAPTIVE, WeightScheme.UNIFORM)
        assert run_config.label == "l63"

    def test_unknown_key(self):
        """Test unbekannter Schlüssel wird abgelehnt"""
        with pytest.raises(ConfigError, match="solvr"):
            ExperimentConfig.from_text(LORENZ_TEXT + "solvr = euler\n")

    @pytest.mark.parametrize("old,new", [
        ("system.name = lorenz63", "system_name = lorenz63"),
        ("schedule.h = 0.1", "schedule_h = 0.1"),
    ])
    def test_field_names_are_not_keys(self, old, new):
        """Test nur punktierte Schlüssel, keine Python-Feldnamen"""
        with pytest.raises(ConfigError, match=new.split(" ")[0]):
            ExperimentConfig.from_text(LORENZ_TEXT.replace(old, new))

    def test_duplicate_key(self):
        """Test doppelter Schlüssel"""
        with pytest.raises(ConfigError, match="duplicate"):
            ExperimentConfig.from_text(LORENZ_TEXT + "k = 2\n")

    def test_foreign_system_param(self):
        """Test Parameter eines anderen Systems"""
        with pytest.raises(ConfigError, match="system.F"):
            ExperimentConfig.from_text(LORENZ_TEXT + "system.F = 8\n")

    def test_missing_required_param(self):
        """Test linear_diagonal ohne Diagonale"""
        with pytest.raises(ConfigError, match="system.diag"):
            ExperimentConfig.from_text("system.name = linear_diagonal\nsolver = euler\nschedule.h = 0.1\nk = 1\nN = 10\n")

    @pytest.mark.parametrize("line", [
        "schedule.h = 1.5",
        "k = 0",
        "N = 2.5",
        "schedule.rule = linear",
        "weights = harmonic",
        "seed = -3",
    ])
    def test_invalid_values(self, line):
        """Test ungültige Werte führen zu ConfigError"""
        text = LORENZ_TEXT.replace("schedule.h = 0.1\n", "") if line.startswith("schedule.h") else LORENZ_TEXT
        key = line.split("=")[0].strip()
        text = "\n".join(ln for ln in text.splitlines() if not ln.startswith(key + " ")) + "\n" + line + "\n"
        with pytest.raises(ConfigError):
            ExperimentConfig.from_text(text)

    def test_k_greater_than_d(self):
        """Test k > d scheitert bei der Laufkonfiguration"""
        config = ExperimentConfig.from_text(LORENZ_TEXT.replace("k = 3", "k = 4"))
        with pytest.raises(InvalidArgumentError, match="k must satisfy"):
            config.to_run_config()

    def test_linear_with_basis(self, linear_config_text):
        """Test lineares System mit expliziter Startbasis"""
        config = ExperimentConfig.from_text(linear_config_text)
        run_config = config.to_run_config()
        np.testing.assert_allclose(run_config.V0, [[1.0], [0.0]])
        assert config.output_path.endswith("linear.csv")

    def test_matrix_system(self):
        """Test allgemeines lineares System"""
        config = ExperimentConfig.from_text(
            "system.name = linear\nsystem.matrix = 0,1;-1,0\nsolver = exact\nschedule.h = 0.1\nk = 2\nN = 10\n"
        )
        system = config.build_system()
        assert system.has_exact
        np.testing.assert_allclose(system.jacobian(np.zeros(2)), [[0.0, 1.0], [-1.0, 0.0]])

    def test_text_round_trip(self, linear_config_text):
        """Test to_text liefert wieder dieselbe Konfiguration"""
        config = ExperimentConfig.from_text(linear_config_text)
        assert ExperimentConfig.from_text(config.to_text(header="copy")) == config
        lorenz = ExperimentConfig.from_text(LORENZ_TEXT)
        assert ExperimentConfig.from_text(lorenz.to_text()) == lorenz

    def test_with_seed(self):
        """Test Seed-Override ohne Mutation"""
        config = ExperimentConfig.from_text(LORENZ_TEXT)
        other = config.with_seed(7)
        assert other.seed == 7
        assert config.seed == 0
