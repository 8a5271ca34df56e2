"""JSON file format for states, witnesses, Choi matrices and Kraus lists.

::

    {"kind": "state", "dims": {"dA": 2, "dB": 2},
     "entries": [[re, im], ...]}          # row-major

``dims`` may also be ``{"d": n}``, meaning ``dA = dB = n``. For ``map-choi``
``dA``/``dB`` are the input/output dimensions. A ``kraus-list`` concatenates
its ``dB x dA`` operators in ``entries``. Floats are written with ``repr``,
which round-trips exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

KINDS = ("state", "witness", "map-choi", "kraus-list")


class MatrixFileError(ValueError):
    """Malformed or inconsistent matrix file."""


@dataclass(frozen=True)
class MatrixFile:
    kind: str
    dA: int
    dB: int
    data: np.ndarray  # square matrix, or stack of Kraus operators


def _field_error(path, field, msg):
    return MatrixFileError(f"{path}: field '{field}': {msg}")


def loads(text: str, path: str = "<string>") -> MatrixFile:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise MatrixFileError(f"{path}: top level must be a JSON object")
    kind = raw.get("kind")
    if kind not in KINDS:
        raise _field_error(path, "kind", f"expected one of {KINDS}, got {kind!r}")
    dims = raw.get("dims")
    if not isinstance(dims, dict):
        raise _field_error(path, "dims", "missing or not an object")
    try:
        if "d" in dims:
            dA = dB = int(dims["d"])
        else:
            dA, dB = int(dims["dA"]), int(dims["dB"])
    except (KeyError, TypeError, ValueError) as exc:
        raise _field_error(path, "dims", "expected {'dA', 'dB'} or {'d'} integers") from exc
    if dA < 1 or dB < 1:
        raise _field_error(path, "dims", "dimensions must be positive")
    entries = raw.get("entries")
    if not isinstance(entries, list):
        raise _field_error(path, "entries", "missing or not a list")
    vals = np.empty(len(entries), dtype=np.complex128)
    for idx, e in enumerate(entries):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, (int, float)) for x in e)):
            raise _field_error(path, f"entries[{idx}]", f"expected [re, im], got {e!r}")
        vals[idx] = complex(e[0], e[1])

    n = dA * dB
    if kind == "kraus-list":
        size = dA * dB
        if len(vals) == 0 or len(vals) % size:
            raise _field_error(path, "entries", f"length {len(vals)} is not a positive multiple of {size}")
        data = vals.reshape(-1, dB, dA)
    else:
        if len(vals) != n * n:
            raise _field_error(path, "entries", f"expected {n * n} entries for dims ({dA}, {dB}), got {len(vals)}")
        data = vals.reshape(n, n)
    return MatrixFile(kind, dA, dB, data)


def load(path) -> MatrixFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise MatrixFileError(f"{path}: {exc.strerror}") from exc
    return loads(text, str(path))


def dumps(kind: str, dA: int, dB: int, data) -> str:
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    arr = np.asarray(data, dtype=np.complex128).reshape(-1)
    entries = [[float(z.real), float(z.imag)] for z in arr]
    return json.dumps({"kind": kind, "dims": {"dA": int(dA), "dB": int(dB)}, "entries": entries})


def dump(path, kind: str, dA: int, dB: int, data) -> None:
    Path(path).write_text(dumps(kind, dA, dB, data) + "\n", encoding="utf-8")
