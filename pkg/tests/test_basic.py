#!/usr/bin/env python3
"""
Grundlegende Tests für LyapEx
"""
import os

import pytest

import apps
from apps.benettin import __all__ as benettin_exports
from apps.dynamics import __all__ as dynamics_exports
from apps.analysis import __all__ as analysis_exports


def test_version():
    """Test: Paketversion ist gesetzt"""
    assert apps.__version__ == "1.0.0"


def test_public_api():
    """Test: Kernoperationen sind exportiert"""
    assert {'run', 'qr_pos', 'replay_averages', 'weighted_average', 'check_conditions'} <= set(benettin_exports)
    assert {'step', 'tangent_map', 'local_error', 'estimate_order', 'make_lorenz96'} <= set(dynamics_exports)
    assert {'mu1_closed_form', 'gronwall_bound', 'compound', 'rate_fit'} <= set(analysis_exports)


def test_utf8_encoding():
    """Test: UTF-8 Encoding funktioniert korrekt"""
    test_text = "Lyapunov-Exponenten λ₁ ≥ λ₂"
    assert test_text.encode('utf-8').decode('utf-8') == test_text


def test_project_structure():
    """Test: Grundlegende Projektstruktur ist vorhanden"""
    project_root = os.path.dirname(os.path.dirname(__file__))

    for path in ('apps/dynamics', 'apps/benettin', 'apps/analysis', 'apps/cli', 'tests', 'requirements.txt'):
        assert os.path.exists(os.path.join(project_root, path)), f"{path} fehlt"


if __name__ == '__main__':
    pytest.main([__file__])
