"""JSON state files: {"dims": [...], "matrix": [[[re, im], ...], ...]}.

Floats are written with ``repr`` precision by the json module, so a
save/load cycle reproduces every entry bit for bit.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .qmat import DensityOperator, as_density


class StateFileError(ValueError):
    pass


def state_to_dict(state) -> dict:
    rho = as_density(state)
    m = rho.mat
    return {
        "dims": list(rho.dims),
        "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in m],
    }


def state_from_dict(data: dict, validate: bool = True) -> DensityOperator:
    try:
        dims = [int(d) for d in data["dims"]]
        arr = np.asarray(data["matrix"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise StateFileError(f"malformed state record: {exc}") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise StateFileError("matrix must be a 2-D array of [re, im] pairs")
    try:
        return DensityOperator(arr[..., 0] + 1j * arr[..., 1], dims, validate=validate)
    except ValueError as exc:
        raise StateFileError(str(exc)) from exc


def save_state(path, state) -> None:
    Path(path).write_text(json.dumps(state_to_dict(state)))


def load_state(path, validate: bool = True) -> DensityOperator:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise StateFileError(f"cannot read state file {path}: {exc}") from exc
    return state_from_dict(data, validate=validate)
