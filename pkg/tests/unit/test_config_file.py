"""
Tests für das flache Konfigurationsformat und die Prozess-Einstellungen
"""

from pathlib import Path

import pytest
from pydantic import ValidationError

from apps.cli.config import LyapexSettings, get_settings, validate_settings
from apps.cli.config_file import atomic_write_text, dump_flat, load_flat, parse_flat
from apps.errors import ConfigError


@pytest.mark.unit
class TestParseFlat:
    """Tests für parse_flat"""

    def test_comments_and_blank_lines(self):
        """Test Kommentare, Leerzeilen und Leerraum"""
        text = "# header\n\nsystem.name = lorenz63   # inline\nk=3\n"
        assert parse_flat(text) == {"system.name": "lorenz63", "k": "3"}

    def test_value_with_equals(self):
        """Test nur das erste = trennt"""
        assert parse_flat("a = b=c") == {"a": "b=c"}

    def test_missing_separator(self):
        """Test Zeile ohne = mit Zeilennummer"""
        with pytest.raises(ConfigError, match="cfg:2"):
            parse_flat("k = 1\nsolver euler\n", source="cfg")

    def test_empty_key(self):
        """Test leerer Schlüssel"""
        with pytest.raises(ConfigError):
            parse_flat("= 3")

    def test_duplicate_key(self):
        """Test doppelter Schlüssel"""
        with pytest.raises(ConfigError, match="duplicate key 'k'"):
            parse_flat("k = 1\nk = 2\n")


@pytest.mark.unit
class TestFileIO:
    """Tests für load_flat, dump_flat und atomic_write_text"""

    def test_dump_then_parse(self):
        """Test dump_flat erzeugt parsebaren Text mit Kopfzeilen"""
        text = dump_flat({"a.b": "1", "c": "x,y"}, header="first\nsecond")
        assert text.startswith("# first\n# second\n")
        assert text.endswith("\n")
        assert parse_flat(text) == {"a.b": "1", "c": "x,y"}

    def test_load_missing(self, tmp_path):
        """Test fehlende Datei wird ConfigError"""
        with pytest.raises(ConfigError, match="cannot read config"):
            load_flat(tmp_path / "missing.cfg")

    def test_atomic_write(self, tmp_path):
        """Test Verzeichnisse anlegen, LF-Zeilenenden, keine .tmp-Reste"""
        target = tmp_path / "nested" / "dir" / "out.csv"
        atomic_write_text(target, "a,b\n1,2\n")
        assert target.read_bytes() == b"a,b\n1,2\n"
        assert list(target.parent.iterdir()) == [target]

    def test_atomic_overwrite(self, tmp_path):
        """Test bestehende Datei wird ersetzt"""
        target = tmp_path / "out.txt"
        target.write_text("old", encoding="utf-8")
        atomic_write_text(target, "new\n")
        assert target.read_text(encoding="utf-8") == "new\n"


@pytest.mark.unit
class TestSettings:
    """Tests für LyapexSettings"""

    def test_defaults(self):
        """Test Standardwerte ohne Umgebung"""
        settings = get_settings()
        assert settings.seed is None
        assert settings.log_level == "INFO"
        assert settings.output_dir == Path("data/runs")
        assert settings.jobs == 1

    def test_env_override(self, monkeypatch):
        """Test LYAPEX_SEED und LYAPEX_JOBS"""
        monkeypatch.setenv("LYAPEX_SEED", "42")
        monkeypatch.setenv("LYAPEX_JOBS", "4")
        settings = get_settings()
        assert settings.seed == 42
        assert settings.jobs == 4

    def test_invalid_env(self, monkeypatch):
        """Test negativer Seed"""
        monkeypatch.setenv("LYAPEX_SEED", "-1")
        with pytest.raises(ValidationError):
            get_settings()

    def test_warnings(self, tmp_path):
        """Test Warnungen zu auffälligen Kombinationen"""
        settings = LyapexSettings(jobs=2, log_level="DEBUG", metrics_file=tmp_path / "missing" / "m.prom")
        warnings = validate_settings(settings)
        assert len(warnings) == 2
        assert validate_settings(LyapexSettings()) == []
