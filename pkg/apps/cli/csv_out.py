"""
LyapEx - CSV-Ausgabe
Stabiles Schema n,h_n,t,mu_1..mu_k[,muw_<scheme>_1..k]*, LF-Zeilenenden, atomar geschrieben
"""

from __future__ import annotations

import csv
import io
import logging
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from apps.benettin.runner import RunResult
from apps.benettin.weights import WeightScheme
from apps.cli.config_file import atomic_write_text

logger = logging.getLogger(__name__)


def _num(value: float) -> str:
    # repr ist locale-unabhängig und verlustfrei
    return repr(float(value))


def csv_header(k: int, schemes: Sequence[WeightScheme]) -> list[str]:
    header = ["n", "h_n", "t"] + [f"mu_{i}" for i in range(1, k + 1)]
    for scheme in schemes:
        header.extend(f"muw_{scheme.value}_{i}" for i in range(1, k + 1))
    return header


def render_table(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def result_rows(result: RunResult, schemes: Sequence[WeightScheme]) -> Iterable[list[str]]:
    """Eine Zeile pro aufgezeichnetem Schritt"""
    for row, n in enumerate(result.record_steps):
        n = int(n)
        cells = [str(n), _num(result.h_sequence[n - 1]), _num(result.t_sequence[n - 1])]
        cells.extend(_num(v) for v in result.mu[row])
        for scheme in schemes:
            cells.extend(_num(v) for v in result.mu_weighted[scheme][row])
        yield cells


def render_result_csv(result: RunResult, schemes: Sequence[WeightScheme]) -> str:
    k = result.mu.shape[1]
    return render_table(csv_header(k, schemes), result_rows(result, schemes))


def write_result_csv(path: str | Path, result: RunResult, schemes: Sequence[WeightScheme]) -> Path:
    """Schreibt das Laufergebnis als CSV (temporäre Datei, dann Umbenennen).

    Args:
        path: Zieldatei
        result: Ergebnis von run()
        schemes: Gewichtsschemata in Spaltenreihenfolge
    """
    path = atomic_write_text(path, render_result_csv(result, schemes))
    logger.info(f"CSV geschrieben: {path} ({len(result.record_steps)} Zeilen)")
    return path


def write_columns_csv(path: str | Path, columns: dict[str, np.ndarray]) -> Path:
    """Spaltenweise Tabelle; die erste Spalte bestimmt die Zeilenzahl."""
    header = list(columns)
    arrays = [np.asarray(columns[name]) for name in header]
    rows = (
        [str(int(a[i])) if np.issubdtype(a.dtype, np.integer) else _num(a[i]) for a in arrays]
        for i in range(arrays[0].shape[0])
    )
    return atomic_write_text(path, render_table(header, rows))


def read_csv(path: str | Path) -> tuple[list[str], np.ndarray]:
    """Liest eine geschriebene Tabelle zurück (Header, Werte als float)"""
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader)
        values = np.array([[float(cell) for cell in row] for row in reader], dtype=np.float64)
    return header, values.reshape(-1, len(header))
