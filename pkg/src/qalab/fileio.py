"""Repo-wide JSON matrix format.

A matrix file is {"dim": d, "re": row-major d x d array, "im": same}.
Parsing rejects NaN/Inf, non-numeric entries and shape mismatches.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .algebra import AlgebraElement
from .ensemble import QuantumState, density_state
from .errors import FileFormatError


def _as_float_grid(raw, dim: int, label: str) -> np.ndarray:
    try:
        arr = np.array(raw, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise FileFormatError(f"field '{label}' is not a numeric array: {exc}") from exc
    if arr.shape != (dim, dim):
        raise FileFormatError(f"field '{label}' has shape {arr.shape}, expected ({dim}, {dim})")
    if not np.all(np.isfinite(arr)):
        raise FileFormatError(f"field '{label}' contains NaN or Inf")
    return arr


def load_matrix(path) -> np.ndarray:
    """Read a complex matrix from the JSON matrix format."""
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise FileFormatError(f"{path}: top-level value must be an object")
    for key in ("dim", "re", "im"):
        if key not in payload:
            raise FileFormatError(f"{path}: missing field '{key}'")
    dim = payload["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise FileFormatError(f"{path}: 'dim' must be a positive integer")
    re = _as_float_grid(payload["re"], dim, "re")
    im = _as_float_grid(payload["im"], dim, "im")
    return re + 1j * im


def save_matrix(path, matrix) -> None:
    m = np.asarray(matrix, dtype=np.complex128)
    payload = {"dim": int(m.shape[0]), "re": m.real.tolist(), "im": m.imag.tolist()}
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def load_element(path) -> AlgebraElement:
    m = load_matrix(path)
    return AlgebraElement(m.shape[0], m)


def load_state(path) -> QuantumState:
    """Read a density operator (validated) from the matrix format."""
    return density_state(load_matrix(path))
