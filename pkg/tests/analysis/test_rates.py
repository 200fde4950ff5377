"""
Tests für den Vergleich von Konvergenzraten
"""

import math

import numpy as np
import pytest

from apps.analysis.rates import RateModel, best_rate_model, rate_fit
from apps.benettin.runner import RunConfig, run
from apps.benettin.schedules import StepsizeSchedule
from apps.errors import InvalidArgumentError

NS = np.logspace(2, 6, 13)


@pytest.mark.unit
class TestRateFit:
    """Tests für rate_fit und best_rate_model"""

    @pytest.mark.parametrize("model,errors", [
        (RateModel.LOGN_OVER_SQRTN, np.log(NS) / np.sqrt(NS)),
        (RateModel.ONE_OVER_SQRTN, 3.0 / np.sqrt(NS)),
        (RateModel.ONE_OVER_LOGN, 0.5 / np.log(NS)),
        (RateModel.CONSTANT, np.full(NS.size, 0.02)),
    ])
    def test_exact_model_wins(self, model, errors):
        """Test exakte Modelldaten werden erkannt"""
        fit = best_rate_model(NS, errors)
        assert fit.model is model
        assert fit.residual < 1e-10

    def test_constant_level(self):
        """Test Konstante C wird zurückgegeben"""
        fit = rate_fit(NS, 3.0 / np.sqrt(NS), "one_over_sqrtN")
        assert fit.constant == pytest.approx(3.0)

    def test_persistent_error_level(self, euler, linear_system):
        """Test konstante Schritte: Fehler bleibt bei 1 − log(1.05)/0.05"""
        config = RunConfig(
            system=linear_system, solver=euler, schedule=StepsizeSchedule.constant(0.05), k=1, N=1000,
            V0=np.array([[1.0], [0.0]]), record_every=50,
        )
        result = run(config)
        errors = np.abs(result.mu[:, 0] - 1.0)
        fit = best_rate_model(result.record_steps, errors)
        assert fit.model is RateModel.CONSTANT
        assert fit.constant == pytest.approx(1.0 - math.log(1.05) / 0.05, abs=1e-9)
        assert fit.constant == pytest.approx(0.0241967, abs=1e-7)

    def test_too_few_samples(self):
        """Test weniger als 10 Werte"""
        with pytest.raises(InvalidArgumentError, match="at least 10"):
            rate_fit(NS[:5], np.ones(5), RateModel.CONSTANT)

    def test_nonpositive_errors(self):
        """Test Fehler 0"""
        errors = np.ones(NS.size)
        errors[3] = 0.0
        with pytest.raises(InvalidArgumentError):
            rate_fit(NS, errors, RateModel.CONSTANT)

    def test_unknown_model(self):
        """Test unbekanntes Modell"""
        with pytest.raises(InvalidArgumentError, match="unknown rate model"):
            rate_fit(NS, np.ones(NS.size), "exponential")

    def test_model_by_name(self):
        """Test Modellname als Text"""
        fit = rate_fit(NS, np.full(NS.size, 0.5), "constant")
        assert fit.model is RateModel.CONSTANT
        assert fit.constant == pytest.approx(0.5)
