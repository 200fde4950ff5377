"""
LyapEx - CLI Integration Test: lyapex verify und lyapex reproduce
Reproduktion mit verkleinerter desk-Skala
"""

from unittest.mock import patch

import pytest

from apps.cli import reproduce as reproduce_module
from apps.cli.csv_out import read_csv
from apps.cli.main import EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, main
from apps.cli.models import ExperimentConfig
from apps.cli.reproduce import ScaleProfile, bundle_curves, load_manifest
from apps.cli.verify import CheckResult, invertibility_checks


pytestmark = [pytest.mark.integration]

TINY = ScaleProfile("desk", 400, 100, 400, 100, 200, 400, 100)


@pytest.fixture
def tiny_desk(monkeypatch):
    """Verkleinerte desk-Skala für schnelle Bündel"""
    monkeypatch.setitem(reproduce_module.SCALES, "desk", TINY)
    return TINY


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def test_verify_weights_identity(capsys):
    """Testet Suite weights-identity mit Margins"""
    assert main(["verify", "weights-identity"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "weights-identity" in out
    assert "margin=" in out
    assert out.strip().endswith("checks passed")
    assert "FAIL" not in out


def test_verify_gronwall(capsys):
    """Testet Gronwall-Suite mit 1000 Fällen"""
    assert main(["verify", "gronwall", "--seed", "3"]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[-1] == f"{len(lines) - 1}/{len(lines) - 1} checks passed"


def test_invertibility_checks():
    """Testet Invertierbarkeits-Diagnose: Diagonalsystem exakt 1, Lorenz-63 positiv"""
    checks = {check.name: check for check in invertibility_checks(seed=5)}
    assert set(checks) == {"invertibility_diagonal_exact", "invertibility_lorenz63_rk4"}
    assert all(check.passed for check in checks.values())
    assert checks["invertibility_lorenz63_rk4"].margin > 0.0


def test_verify_exterior_reaches_invertibility(capsys):
    """Testet Suite exterior enthält die Invertierbarkeits-Prüfungen"""
    assert main(["verify", "exterior"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "invertibility_diagonal_exact" in out
    assert "invertibility_lorenz63_rk4" in out
    assert "FAIL" not in out


def test_verify_unknown_suite(capsys):
    """Testet unbekannte Suite: Exit 2"""
    assert main(["verify", "lyapunov"]) == EXIT_CONFIG
    assert "unknown suite" in capsys.readouterr().err


def test_verify_failure_exit_code(capsys):
    """Testet fehlgeschlagene Prüfung: Exit 3"""
    failing = [
        CheckResult("gronwall", "ok_case", "000000000000", 0.5, True),
        CheckResult("gronwall", "broken_case", "111111111111", -1.0, False),
    ]
    with patch("apps.cli.main.run_suites", return_value=failing):
        assert main(["verify", "gronwall"]) == EXIT_RUNTIME
    out = capsys.readouterr().out
    assert "FAIL" in out
    assert "1/2 checks passed" in out


# ---------------------------------------------------------------------------
# reproduce
# ---------------------------------------------------------------------------

def test_reproduce_fig1(tiny_desk, tmp_path, capsys):
    """Testet fig1: fünf Kurven, Manifest, stabile Dateinamen"""
    assert main(["reproduce", "fig1", "--scale=desk", f"--out={tmp_path}"]) == EXIT_OK
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == [
        "fig1_const_h0p005.csv",
        "fig1_const_h0p01.csv",
        "fig1_const_h0p05.csv",
        "fig1_manifest.cfg",
        "fig1_power0p5_h0p1.csv",
        "fig1_power0p5_h0p1_uniform.csv",
    ]
    header, values = read_csv(tmp_path / "fig1_const_h0p05.csv")
    assert header == ["n", "h_n", "t", "mu_1", "mu_2", "muw_adaptive_1", "muw_adaptive_2"]
    assert values[-1, 0] == TINY.linear_N
    assert "fig1_manifest.cfg" in capsys.readouterr().out


def test_manifest_round_trip(tiny_desk, tmp_path, write_config):
    """Testet: Konfigurationen aus dem Manifest reproduzieren die CSVs bitgleich"""
    out = tmp_path / "bundle"
    assert main(["reproduce", "fig1", "--out", str(out), "--seed", "4"]) == EXIT_OK

    configs = load_manifest(out / "fig1_manifest.cfg")
    expected = {c.curve_id: c.config for c in bundle_curves("fig1", "desk", seed=4)}
    assert set(configs) == set(expected)
    for curve_id, config in configs.items():
        assert config.with_output_path("x") == expected[curve_id].with_output_path("x")

    config = configs["power0p5_h0p1_uniform"].with_output_path(tmp_path / "rerun.csv")
    assert main(["run", str(write_config(config.to_text(), "rerun.cfg"))]) == EXIT_OK
    assert (tmp_path / "rerun.csv").read_bytes() == (out / "fig1_power0p5_h0p1_uniform.csv").read_bytes()


def test_reproduce_jobs_identical(tiny_desk, tmp_path):
    """Testet: parallele Ausführung ändert keine Bytes"""
    assert main(["reproduce", "linear-sweep", "--out", str(tmp_path / "seq")]) == EXIT_OK
    assert main(["reproduce", "linear-sweep", "--out", str(tmp_path / "par"), "--jobs", "2"]) == EXIT_OK
    seq = sorted((tmp_path / "seq").glob("*.csv"))
    assert len(seq) == 14
    for path in seq:
        assert (tmp_path / "par" / path.name).read_bytes() == path.read_bytes()


def test_reproduce_errors(tmp_path):
    """Testet unbekanntes Bündel und ungültige Worker-Zahl"""
    assert main(["reproduce", "fig9", "--out", str(tmp_path)]) == EXIT_CONFIG
    assert main(["reproduce", "fig1", "--out", str(tmp_path), "--jobs", "0"]) == EXIT_CONFIG
    with pytest.raises(SystemExit) as exc_info:
        main(["reproduce", "fig1", "--scale=huge"])
    assert exc_info.value.code == 2


def test_bundle_contents():
    """Testet Kurvensätze der Bündel ohne Rechnung"""
    fig2 = bundle_curves("fig2", "desk")
    assert [c.curve_id for c in fig2] == [
        "const_h0p001", "const_h0p0005", "const_h0p00025", "power0p5_h0p1", "power0p5_h0p1_uniform",
    ]
    assert all(c.config.transient_steps == 100_000 for c in fig2)
    fig4 = {c.curve_id: c.config for c in bundle_curves("fig4", "full")}
    assert fig4["reference_h0p001"].N == 10_000_000
    assert fig4["const_h0p01"].k == 40
    assert isinstance(fig4["power0p5_h0p1"], ExperimentConfig)


@pytest.mark.slow
def test_reproduce_fig2_errors(tiny_desk, tmp_path):
    """Testet fig2: Fehlerkurven gegen λ_2 = 0 und Σλ = −41/3"""
    assert main(["reproduce", "fig2", "--out", str(tmp_path)]) == EXIT_OK
    header, values = read_csv(tmp_path / "fig2_const_h0p001_errors.csv")
    assert header == [
        "n", "t", "le2_error", "le_sum_error", "le2_error_adaptive", "le_sum_error_adaptive",
    ]
    assert values.shape[0] == TINY.lorenz63_N // TINY.lorenz63_record
    assert (values[:, 2:] >= 0.0).all()
