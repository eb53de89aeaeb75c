"""JSON encoding of matrices, channels, DFS results, ensembles and codes.

A matrix is ``{"rows": r, "cols": c, "data": [[re, im], ...]}`` in row-major
order. Floats are written with Python's shortest round-trip repr, so every
emitted value parses back bit-identically.
"""

import json
from pathlib import Path

import numpy as np

from .channel import QuantumChannel
from .dfs import DfsSubspace, SystemOperatorSet, WiretapCode
from .errors import SchemaError, ValidationError
from .linalg import as_matrix, dagger
from .secrecy import Ensemble


def _num(x: float) -> float:
    x = float(x)
    return 0.0 if x == 0.0 else x  # no "-0.0" in output


def complex_to_json(z) -> list:
    z = complex(z)
    return [_num(z.real), _num(z.imag)]


def complex_from_json(obj, where: str) -> complex:
    if not (isinstance(obj, list) and len(obj) == 2 and all(_is_real(x) for x in obj)):
        raise SchemaError(f"{where}: expected [re, im], got {obj!r}")
    return complex(obj[0], obj[1])


def _is_real(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def matrix_to_json(m) -> dict:
    m = as_matrix(m)
    return {
        "rows": m.shape[0],
        "cols": m.shape[1],
        "data": [complex_to_json(z) for z in m.reshape(-1)],
    }


def matrix_from_json(obj, where: str = "matrix") -> np.ndarray:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object with rows/cols/data")
    for key in ("rows", "cols", "data"):
        if key not in obj:
            raise SchemaError(f"{where}: missing field {key!r}")
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise SchemaError(f"{where}: rows and cols must be positive integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise SchemaError(f"{where}.data: expected {rows * cols} entries")
    vals = [complex_from_json(z, f"{where}.data[{i}]") for i, z in enumerate(data)]
    try:
        return as_matrix(vals, rows, cols)
    except ValidationError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def _field(obj, key, where, kind=None):
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected a JSON object")
    if key not in obj:
        raise SchemaError(f"{where}: missing field {key!r}")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise SchemaError(f"{where}.{key}: expected {getattr(kind, '__name__', kind)}")
    return val


def channel_to_json(ch: QuantumChannel) -> dict:
    return {"label": ch.label, "dim_in": ch.dim_in, "kraus": [matrix_to_json(a) for a in ch.kraus]}


def channel_from_json(obj, where: str = "channel") -> QuantumChannel:
    label = obj.get("label", "") if isinstance(obj, dict) else ""
    dim_in = _field(obj, "dim_in", where, int)
    kraus = _field(obj, "kraus", where, list)
    ops = [matrix_from_json(k, f"{where}.kraus[{i}]") for i, k in enumerate(kraus)]
    for i, a in enumerate(ops):
        if a.shape != (dim_in, dim_in):
            raise SchemaError(f"{where}.kraus[{i}]: shape {a.shape} does not match dim_in {dim_in}")
    return QuantumChannel(tuple(ops), label=str(label))


def operators_from_json(obj, where: str = "operators") -> SystemOperatorSet:
    ops = _field(obj, "operators", where, list)
    return SystemOperatorSet(tuple(matrix_from_json(s, f"{where}.operators[{i}]") for i, s in enumerate(ops)))


def dfs_to_json(ambient_dim: int, subspaces) -> dict:
    return {
        "ambient_dim": ambient_dim,
        "dims": [s.dim for s in subspaces],
        "subspaces": [
            {"basis": matrix_to_json(s.basis), "eigenvalues": [complex_to_json(c) for c in s.eigenvalues]}
            for s in subspaces
        ],
    }


def dfs_from_json(obj, where: str = "dfs") -> tuple[int, list[DfsSubspace]]:
    ambient = _field(obj, "ambient_dim", where, int)
    subs = []
    for i, s in enumerate(_field(obj, "subspaces", where, list)):
        w = f"{where}.subspaces[{i}]"
        basis = matrix_from_json(_field(s, "basis", w), f"{w}.basis")
        eig = [complex_from_json(c, f"{w}.eigenvalues[{j}]") for j, c in enumerate(_field(s, "eigenvalues", w, list))]
        if basis.shape[0] != ambient:
            raise SchemaError(f"{w}.basis: {basis.shape[0]} rows, expected ambient_dim {ambient}")
        subs.append(DfsSubspace(basis, tuple(eig)))
    return ambient, subs


def _state_matrix(m: np.ndarray) -> np.ndarray:
    # a single column is read as a ket
    if m.shape[1] == 1 and m.shape[0] > 1:
        v = m / np.linalg.norm(m)
        return v @ dagger(v)
    return m


def ensemble_to_json(e: Ensemble) -> dict:
    return {"probs": [_num(p) for p in e.probs], "states": [matrix_to_json(s.matrix) for s in e.states]}


def ensemble_from_json(obj, where: str = "ensemble") -> Ensemble:
    probs = _field(obj, "probs", where, list)
    states = _field(obj, "states", where, list)
    if not all(_is_real(p) for p in probs):
        raise SchemaError(f"{where}.probs: expected numbers")
    mats = [_state_matrix(matrix_from_json(s, f"{where}.states[{i}]")) for i, s in enumerate(states)]
    return Ensemble(tuple(mats), np.array(probs, dtype=float))


def code_to_json(code: WiretapCode) -> dict:
    return {
        "length": code.length,
        "codewords": [matrix_to_json(c.matrix) for c in code.codewords],
        "povm": [matrix_to_json(p) for p in code.povm],
    }


def code_from_json(obj, where: str = "code") -> WiretapCode:
    length = _field(obj, "length", where, int)
    cws = [_state_matrix(matrix_from_json(c, f"{where}.codewords[{i}]")) for i, c in enumerate(_field(obj, "codewords", where, list))]
    povm = [matrix_from_json(p, f"{where}.povm[{i}]") for i, p in enumerate(_field(obj, "povm", where, list))]
    return WiretapCode(tuple(cws), tuple(povm), length)


def load_json(path) -> object:
    """Parse a JSON file, reporting the line and column of syntax errors."""
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"
