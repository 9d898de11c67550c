"""JSON formats for matrices, flags, decompositions and measures.

Floats are written with ``repr`` (Python's shortest round-trip decimal), so
``read(write(x)) == x`` bit for bit. Documents are dumped with fixed key order
and separators, making files byte-stable across runs.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .decomp import Decomposition
from .errors import InputError
from .flags import Flag
from .linalg import as_matrix


def dumps(doc) -> str:
    return json.dumps(doc, separators=(", ", ": "), allow_nan=False) + "\n"


def finite_or_text(x: float):
    """JSON-safe float: non-finite values become the strings ``"inf"``, ``"-inf"``, ``"nan"``."""
    x = float(x)
    return x if math.isfinite(x) else repr(x)


def matrix_to_json(a) -> dict:
    a = as_matrix(a)
    return {
        "n": a.shape[0],
        "data": [[float(z.real), float(z.imag)] for z in a.ravel()],
    }


def matrix_from_json(doc) -> np.ndarray:
    """Parse a MatrixFile document.

    Raises:
        InputError: on a wrong shape, a non-numeric entry or a non-finite value.
    """
    if not isinstance(doc, dict) or "n" not in doc or "data" not in doc:
        raise InputError('matrix document needs keys "n" and "data"')
    n, data = doc["n"], doc["data"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError(f"n must be a positive integer, got {n!r}")
    if not isinstance(data, list) or len(data) != n * n:
        raise InputError(f"data must hold n^2 = {n * n} entries")
    out = np.empty(n * n, dtype=np.complex128)
    for k, pair in enumerate(data):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
        ):
            raise InputError(f"entry {k} is not a [re, im] pair of numbers")
        out[k] = complex(pair[0], pair[1])
    return as_matrix(out.reshape(n, n))


def _load(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def read_matrix(path) -> np.ndarray:
    return matrix_from_json(_load(path))


def write_json(path, doc) -> None:
    Path(path).write_text(dumps(doc))


def write_matrix(path, a) -> None:
    write_json(path, matrix_to_json(a))


def read_json(path) -> object:
    return _load(path)


def flag_to_json(f: Flag) -> dict:
    return {"basis": matrix_to_json(f.basis), "cuts": list(f.cuts)}


def flag_from_json(doc) -> Flag:
    try:
        return Flag(matrix_from_json(doc["basis"]), tuple(int(c) for c in doc["cuts"]))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed flag document: {exc}") from exc


def decomposition_to_json(d: Decomposition) -> dict:
    return {
        "N": matrix_to_json(d.n_part),
        "Q": matrix_to_json(d.q_part),
        "flag": flag_to_json(d.flag),
        "order": d.order.name,
    }
