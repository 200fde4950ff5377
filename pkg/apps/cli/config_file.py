"""
LyapEx - Flaches Konfigurationsformat
Eine Zeile pro Schlüssel: "punktierter.schluessel = wert", # leitet Kommentare ein
"""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Mapping, Optional

from apps.errors import ConfigError

logger = logging.getLogger(__name__)


def parse_flat(text: str, source: str = "<string>") -> dict[str, str]:
    """Zerlegt den Text in ein Dictionary.

    Raises:
        ConfigError: Zeile ohne "=", leerer Schlüssel oder doppelter Schlüssel
    """
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got '{raw.strip()}'")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key '{key}'")
        values[key] = value
    return values


def load_flat(path: str | Path) -> dict[str, str]:
    """Liest eine Konfigurationsdatei.

    Raises:
        ConfigError: Datei nicht lesbar oder fehlerhaft
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_flat(text, source=str(path))


def dump_flat(values: Mapping[str, str], header: Optional[str] = None) -> str:
    lines = [f"# {line}" for line in header.splitlines()] if header else []
    lines.extend(f"{key} = {value}" for key, value in values.items())
    return "\n".join(lines) + "\n"


def atomic_write_text(path: str | Path, text: str) -> Path:
    """Schreibt über eine temporäre Datei und benennt dann um."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f"{path.name}.tmp")
    with open(tmp, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    os.replace(tmp, path)
    logger.debug(f"Datei geschrieben: {path}")
    return path
