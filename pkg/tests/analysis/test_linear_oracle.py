"""
Tests für das analytische Orakel des linearen Systems
"""

import math

import numpy as np
import pytest

from apps.analysis.linear_oracle import (
    LinearOracleParams, fit_consistency_constant, linear_relative_global_error, mu1_bounds,
    mu1_closed_form, theoretical_limit, uniform_weight_bounds, uniform_weight_closed_form,
)
from apps.analysis.gronwall import relative_error_bound
from apps.benettin.schedules import StepsizeSchedule
from apps.errors import InvalidArgumentError


@pytest.mark.unit
class TestClosedForm:
    """Tests für mu1_closed_form"""

    def test_persistent_error(self):
        """Test α = (1, 0), konstante Schritte: log(1.05)/0.05"""
        params = LinearOracleParams(1.0, -2.0, 1.0, 0.0, StepsizeSchedule.constant(0.05), 10 ** 5)
        assert mu1_closed_form(params) == pytest.approx(0.9758033, abs=1e-7)

    def test_alpha_contribution(self):
        """Test Anteil von α_2 verschwindet für große N"""
        sched = StepsizeSchedule.constant(0.05)
        short = LinearOracleParams(1.0, -2.0, 1.0, 1.0, sched, 10)
        long = LinearOracleParams(1.0, -2.0, 1.0, 1.0, sched, 10 ** 4)
        limit = theoretical_limit(0.05, 1.0)
        assert abs(mu1_closed_form(long) - limit) < abs(mu1_closed_form(short) - limit)
        assert mu1_closed_form(long) == pytest.approx(limit, abs=1e-6)

    @pytest.mark.parametrize("kwargs", [
        dict(lambda1=-2.0, lambda2=1.0, alpha1=1.0, alpha2=0.0),
        dict(lambda1=1.0, lambda2=-2.0, alpha1=0.0, alpha2=1.0),
    ])
    def test_invalid_params(self, kwargs):
        """Test λ_1 <= λ_2 und α_1 = 0"""
        with pytest.raises(InvalidArgumentError):
            LinearOracleParams(schedule=StepsizeSchedule.constant(0.05), N=10, **kwargs)

    def test_log_domain(self):
        """Test 1 + hλ_2 <= 0"""
        params = LinearOracleParams(1.0, -20.0, 1.0, 0.0, StepsizeSchedule.constant(0.1), 10)
        with pytest.raises(InvalidArgumentError, match="logarithm"):
            mu1_closed_form(params)


@pytest.mark.unit
class TestTheoreticalLimit:
    """Tests für theoretical_limit"""

    def test_value(self):
        """Test h = 0.05, λ_1 = 1"""
        assert theoretical_limit(0.05, 1.0) == pytest.approx(0.9758033, abs=1e-7)

    def test_zero_exponent(self):
        """Test λ_1 = 0"""
        assert theoretical_limit(0.3, 0.0) == 0.0

    def test_taylor_remainder(self):
        """Test |limit − λ_1 + λ_1²h/2| <= h²"""
        for h in (0.1, 0.05, 0.025):
            assert abs(theoretical_limit(h, 1.0) - 1.0 + h / 2.0) <= h * h

    def test_domain(self):
        """Test h <= 0 und 1 + hλ_1 <= 0"""
        with pytest.raises(InvalidArgumentError):
            theoretical_limit(0.0, 1.0)
        with pytest.raises(InvalidArgumentError):
            theoretical_limit(0.5, -2.0)


@pytest.mark.unit
class TestBounds:
    """Tests für mu1_bounds und die Schranken uniformer Gewichte"""

    def test_bounds_enclose_closed_form(self, rng):
        """Test untere <= geschlossene Form <= obere Schranke"""
        for _ in range(50):
            lam1 = rng.uniform(-1.0, 2.0)
            lam2 = lam1 - rng.uniform(0.1, 2.0)
            alpha = rng.normal(size=2)
            sched = StepsizeSchedule.power(rng.uniform(0.3, 1.0), rng.uniform(0.01, 0.1))
            params = LinearOracleParams(lam1, lam2, alpha[0], alpha[1], sched, int(rng.integers(10, 2000)))
            lower, upper = mu1_bounds(params)
            value = mu1_closed_form(params)
            assert lower - 1e-12 <= value <= upper + 1e-12

    def test_bounds_domain(self):
        """Test h_nλ_1 < −1/2"""
        params = LinearOracleParams(-6.0, -8.0, 1.0, 1.0, StepsizeSchedule.constant(0.1), 10)
        with pytest.raises(InvalidArgumentError, match="-1/2"):
            mu1_bounds(params)

    def test_uniform_closed_form_within_bounds(self, power_half):
        """Test uniforme Gewichte zwischen λ_1 − λ_1²h_0^N/N und λ_1"""
        value = uniform_weight_closed_form(1.0, power_half, 10 ** 4)
        lower, upper = uniform_weight_bounds(1.0, power_half, 10 ** 4)
        assert lower <= value <= upper

    def test_uniform_converges(self, power_half):
        """Test Fehler der uniformen Gewichte fällt mit N"""
        errors = [abs(uniform_weight_closed_form(1.0, power_half, N) - 1.0) for N in (10 ** 3, 10 ** 4, 10 ** 5)]
        assert errors[0] > errors[1] > errors[2]


@pytest.mark.unit
class TestGlobalError:
    """Tests für linear_relative_global_error und die Konsistenzkonstante"""

    def test_within_gronwall_bound(self, linear_system, euler):
        """Test relativer globaler Fehler unter der Gronwall-Schranke"""
        c = fit_consistency_constant(linear_system, euler, np.ones(2), (0.01, 0.005, 0.0025))
        assert c == pytest.approx(2.0, rel=0.05)
        for sched, N in ((StepsizeSchedule.constant(0.001), 1000), (StepsizeSchedule.power(0.5, 0.01), 5000)):
            error = linear_relative_global_error([1.0, -2.0], sched, N)
            assert 0.0 < error <= relative_error_bound(c, sched, 1.0, N)

    def test_exact_has_zero_constant(self, linear_system, exact):
        """Test exakte Propagation: c = 0"""
        assert fit_consistency_constant(linear_system, exact, np.ones(2), (0.1, 0.05)) == 0.0

    def test_error_shrinks_with_stepsize(self):
        """Test kleinere Schritte, kleinerer Fehler bei gleichem t"""
        coarse = linear_relative_global_error([1.0, -2.0], StepsizeSchedule.constant(0.01), 100)
        fine = linear_relative_global_error([1.0, -2.0], StepsizeSchedule.constant(0.001), 1000)
        assert fine == pytest.approx(coarse / 10.0, rel=0.05)
        assert math.isfinite(coarse)
