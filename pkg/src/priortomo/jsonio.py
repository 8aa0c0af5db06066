"""
JSON and CSV interchange formats.

* matrix: ``{"dim": d, "entries": [[[re, im], ...], ...]}`` (row-major);
* POVM / observable set: ``{"dim": d, "effects" | "observables": [matrix, ...]}``;
* expectation or probability vector: ``{"values": [...]}``;
* state vector: ``{"dim": d, "amplitudes": [[re, im], ...]}``;
* point cloud: CSV with header ``y1,y2,y3``.

Floats are written by :mod:`json`, which uses the shortest decimal string
that reads back to the same double, so ``parse(emit(x)) == x`` bit for bit.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .core import DimensionError
from .opsys import ObservableSet, Povm

__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "scheme_to_json",
    "scheme_from_json",
    "vector_to_json",
    "vector_from_json",
    "amplitudes_to_json",
    "amplitudes_from_json",
    "points_to_csv",
    "points_from_csv",
    "dumps",
    "load",
]


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return {"dim": m.shape[0], "entries": [[_pair(z) for z in row] for row in m]}


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        d = int(obj["dim"])
        arr = np.asarray(obj["entries"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix JSON: {exc}") from None
    if arr.shape != (d, d, 2):
        raise DimensionError(f"matrix entries have shape {arr.shape}, expected {(d, d, 2)}")
    return arr[..., 0] + 1j * arr[..., 1]


def scheme_to_json(scheme, **extra) -> dict:
    """POVM or observable set as JSON; ``extra`` keys are added verbatim."""
    if isinstance(scheme, Povm):
        key, ops = "effects", scheme.effects
    elif isinstance(scheme, ObservableSet):
        key, ops = "observables", scheme.observables
    else:
        raise TypeError(f"expected Povm or ObservableSet, got {type(scheme).__name__}")
    return {"dim": int(ops.shape[1]), key: [matrix_to_json(o) for o in ops], **extra}


def scheme_from_json(obj: dict) -> Povm | ObservableSet:
    if "effects" in obj:
        mats, cls = obj["effects"], Povm
    elif "observables" in obj:
        mats, cls = obj["observables"], ObservableSet
    else:
        raise ValueError("scheme JSON needs an 'effects' or 'observables' list")
    ops = np.array([matrix_from_json(m) for m in mats])
    if ops.ndim != 3 or ops.shape[1] != int(obj.get("dim", ops.shape[1])):
        raise DimensionError("scheme matrices do not match the declared dimension")
    return cls(ops)


def vector_to_json(values) -> dict:
    return {"values": [float(v) for v in np.asarray(values, dtype=float).ravel()]}


def vector_from_json(obj: dict) -> np.ndarray:
    if "values" not in obj:
        raise ValueError("vector JSON needs a 'values' list")
    return np.asarray(obj["values"], dtype=float)


def amplitudes_to_json(x) -> dict:
    x = np.asarray(x, dtype=complex).ravel()
    return {"dim": len(x), "amplitudes": [_pair(z) for z in x]}


def amplitudes_from_json(obj: dict) -> np.ndarray:
    arr = np.asarray(obj["amplitudes"], dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("amplitudes must be [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def points_to_csv(points, header=("y1", "y2", "y3")) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in np.asarray(points, dtype=float):
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def points_from_csv(text: str) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    return np.array([[float(v) for v in row] for row in rows[1:]])


def dumps(obj) -> str:
    return json.dumps(obj, indent=1)


def load(path) -> dict:
    return json.loads(Path(path).read_text())
