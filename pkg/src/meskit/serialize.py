"""JSON formats shared by the CLI and the file interfaces.

Matrix payload: ``{"rows": r, "cols": c, "data": [[re, im], ...]}`` with the
entries in row-major order; a vector is a matrix with ``cols = 1``.

Serialization is deterministic: floats are emitted with 17 significant digits
(lossless for float64), keys in fixed insertion order, files written via a
temp file + rename so readers never observe partial output.
"""

from __future__ import annotations

import json
import math
import os
import tempfile

import numpy as np

from .errors import DimensionError
from .tensor import Dims


def dumps(obj) -> str:
    """Deterministic JSON encoding with 17-significant-digit floats."""
    return _encode(obj)


def _encode(obj) -> str:
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError(f"non-finite number {x!r} cannot be serialized")
        return format(x, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if obj is None:
        return "null"
    if isinstance(obj, dict):
        items = ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize object of type {type(obj).__name__}")


def write_json(path: str, obj) -> None:
    """Atomically write ``obj`` as JSON to ``path`` (temp file + rename)."""
    text = dumps(obj) + "\n"
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path: str):
    with open(path) as handle:
        return json.load(handle)


def matrix_to_obj(a: np.ndarray) -> dict:
    a = np.asarray(a, dtype=complex)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise DimensionError(f"expected a matrix, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite entries")
    rows, cols = a.shape
    flat = a.reshape(-1)
    return {
        "rows": int(rows),
        "cols": int(cols),
        "data": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_obj(obj) -> np.ndarray:
    if not isinstance(obj, dict) or not {"rows", "cols", "data"} <= set(obj):
        raise ValueError("matrix object must carry rows, cols and data")
    rows, cols = int(obj["rows"]), int(obj["cols"])
    if rows < 1 or cols < 1:
        raise DimensionError(f"matrix dimensions must be positive: {rows}x{cols}")
    data = obj["data"]
    if len(data) != rows * cols:
        raise DimensionError(f"expected {rows * cols} entries, got {len(data)}")
    out = np.empty(rows * cols, dtype=complex)
    for i, pair in enumerate(data):
        re, im = float(pair[0]), float(pair[1])
        out[i] = complex(re, im)
    if not np.all(np.isfinite(out)):
        raise ValueError("matrix contains non-finite entries")
    return out.reshape(rows, cols)


def dims_to_obj(dims: Dims) -> dict:
    return {"m": dims.m, "n": dims.n, "k": dims.k}


def dims_from_obj(obj) -> Dims:
    return Dims(m=int(obj["m"]), n=int(obj["n"]), k=int(obj["k"]))


def coisometry_to_obj(matrix: np.ndarray, dims: Dims) -> dict:
    out = matrix_to_obj(matrix)
    out["m"] = dims.m
    out["n"] = dims.n
    return out


def superoperator_to_obj(matrix: np.ndarray, dims: Dims) -> dict:
    return {"dims": dims_to_obj(dims), "matrix": matrix_to_obj(matrix)}


def superoperator_from_obj(obj) -> tuple[np.ndarray, Dims]:
    dims = dims_from_obj(obj["dims"])
    matrix = matrix_from_obj(obj["matrix"])
    side = dims.mn * dims.mn
    if matrix.shape != (side, side):
        raise DimensionError(
            f"superoperator for dims {dims} must be {side}x{side}, got {matrix.shape}"
        )
    return matrix, dims
