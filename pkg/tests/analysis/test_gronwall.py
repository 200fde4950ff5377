"""
Tests für das diskrete Gronwall-Lemma
"""

import math

import numpy as np
import pytest

from apps.analysis.gronwall import gronwall_bound, gronwall_extremal, relative_error_bound, sample_admissible_sequence
from apps.benettin.schedules import StepsizeSchedule
from apps.errors import InvalidArgumentError


@pytest.mark.unit
class TestGronwallBound:
    """Tests für gronwall_bound"""

    def test_zero_sequence(self):
        """Test b ≡ 0"""
        assert gronwall_bound(np.zeros(10), 10) == 0.0

    def test_constant_sequence(self):
        """Test b_n = b: Nb·e^{Nb}"""
        assert gronwall_bound(np.full(20, 0.05), 20) == pytest.approx(1.0 * math.e)

    def test_prefix(self):
        """Test nur die ersten N Einträge zählen"""
        assert gronwall_bound([0.1, 0.2, 5.0], 2) == pytest.approx(0.3 * math.exp(0.3))

    def test_negative_entries(self):
        """Test negative Einträge"""
        with pytest.raises(InvalidArgumentError):
            gronwall_bound([0.1, -0.2], 2)

    def test_horizon_out_of_range(self):
        """Test N > len(b)"""
        with pytest.raises(InvalidArgumentError):
            gronwall_bound([0.1], 2)


@pytest.mark.unit
class TestAdmissibleSequences:
    """Tests für extremale und zufällige zulässige Folgen"""

    def test_extremal_recursion(self):
        """Test c_N = Π(1+b_n) − 1"""
        b = np.array([0.1, 0.2, 0.3])
        c = gronwall_extremal(b)
        assert c[0] == 0.0
        assert c[-1] == pytest.approx(1.1 * 1.2 * 1.3 - 1.0)

    def test_bound_holds(self, rng):
        """Test a_N <= c_N <= B·e^B für 1000 Zufallsfälle"""
        for _ in range(1000):
            size = int(rng.integers(1, 30))
            b = rng.uniform(0.0, 0.5, size)
            a = sample_admissible_sequence(b, rng)
            c = gronwall_extremal(b)
            bound = gronwall_bound(b, size)
            assert a[0] == 0.0
            assert np.all(a <= c + 1e-12)
            assert c[-1] <= bound * (1.0 + 1e-12)

    def test_admissible_inequality(self, rng):
        """Test a_N <= Σ_{n<N} (1+a_n) b_{n+1}"""
        b = rng.uniform(0.0, 1.0, 25)
        a = sample_admissible_sequence(b, rng)
        for N in range(1, 26):
            assert a[N] <= float(np.sum((1.0 + a[:N]) * b[:N])) + 1e-12


@pytest.mark.unit
class TestRelativeErrorBound:
    """Tests für relative_error_bound"""

    def test_constant_euler(self):
        """Test c=1, h=0.1, p=1, N=10: 0.1·e^{0.1}"""
        assert relative_error_bound(1.0, StepsizeSchedule.constant(0.1), 1.0, 10) == pytest.approx(0.1105171, abs=1e-7)

    def test_power_half_rk4_converges(self):
        """Test Schranke stabilisiert sich für power(0.5), p=4"""
        sched = StepsizeSchedule.power(0.5, 0.1)
        a = relative_error_bound(1.0, sched, 4.0, 10 ** 5)
        b = relative_error_bound(1.0, sched, 4.0, 2 * 10 ** 5)
        assert abs(b - a) < 1e-6

    def test_constant_grows(self):
        """Test konstante Schritte: Schranke wächst unbeschränkt"""
        sched = StepsizeSchedule.constant(0.1)
        assert relative_error_bound(1.0, sched, 1.0, 1000) > relative_error_bound(1.0, sched, 1.0, 100) * 10

    @pytest.mark.parametrize("c,p", [(0.0, 1.0), (1.0, 0.0)])
    def test_invalid(self, c, p):
        """Test c <= 0 oder p <= 0"""
        with pytest.raises(InvalidArgumentError):
            relative_error_bound(c, StepsizeSchedule.constant(0.1), p, 10)
