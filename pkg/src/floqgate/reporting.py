"""CSV/JSON artifact writers with reproducible formatting.

Floats are serialized with ``repr`` (shortest round-trip form), so a rerun
with identical inputs produces byte-identical file bodies.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np


def _cell(value) -> str:
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value) or math.isinf(value):
            raise ValueError("refusing to serialize NaN/Inf")
        return repr(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def write_csv(path: str | Path, header: list[str], rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        if math.isnan(value) or math.isinf(value):
            raise ValueError("refusing to serialize NaN/Inf")
        return value
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def write_json(path: str | Path, payload: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")
    return path


def density_matrix_payload(rho: np.ndarray) -> list[list[list[float]]]:
    """Row-major [re, im] pairs for debugging dumps."""
    rho = np.asarray(rho, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in rho]


def write_trajectory_csv(path: str | Path, result) -> Path:
    """Time column followed by the named observables of an EvolutionResult."""
    names = sorted(result.observables)
    rows = [
        [t] + [result.observables[name][i] for name in names]
        for i, t in enumerate(result.times)
    ]
    return write_csv(path, ["time_us"] + names, rows)
