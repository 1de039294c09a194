"""Single-file matrix export: a JSON header line followed by m,n,re,im rows.

Floats are written in shortest round-trip decimal (repr), so a dump/load
cycle reproduces the matrix bit for bit.
"""

from __future__ import annotations

import io
import json
from pathlib import Path

import numpy as np

from .operators import OperatorMatrix

__all__ = ["dump_matrix", "dumps_matrix", "load_matrix", "loads_matrix"]

_HEADER_KEYS = ("trunc", "u_spec", "phi_spec", "m")


def dumps_matrix(mat: OperatorMatrix) -> str:
    meta = dict(mat.meta or {})
    header = {
        "trunc": mat.trunc,
        "u_spec": meta.get("u_spec"),
        "phi_spec": meta.get("phi_spec"),
        "m": meta.get("m"),
    }
    out = io.StringIO()
    out.write(json.dumps(header, sort_keys=True))
    out.write("\nm,n,re,im\n")
    entries = mat.entries
    for row in range(mat.trunc):
        for col in range(mat.trunc):
            value = entries[row, col]
            out.write(f"{row},{col},{float(value.real)!r},{float(value.imag)!r}\n")
    return out.getvalue()


def dump_matrix(mat: OperatorMatrix, path) -> None:
    Path(path).write_text(dumps_matrix(mat), encoding="ascii")


def loads_matrix(text: str) -> OperatorMatrix:
    lines = text.splitlines()
    if len(lines) < 2:
        raise ValueError("matrix file too short: expected header, column line, rows")
    header = json.loads(lines[0])
    missing = [key for key in _HEADER_KEYS if key not in header]
    if missing:
        raise ValueError(f"matrix header missing keys: {missing}")
    if lines[1].strip() != "m,n,re,im":
        raise ValueError(f"unexpected column line {lines[1]!r}")
    trunc = int(header["trunc"])
    entries = np.zeros((trunc, trunc), dtype=np.complex128)
    for line in lines[2:]:
        if not line.strip():
            continue
        row_s, col_s, re_s, im_s = line.split(",")
        entries[int(row_s), int(col_s)] = complex(float(re_s), float(im_s))
    meta = {"u_spec": header["u_spec"], "phi_spec": header["phi_spec"], "m": header["m"]}
    return OperatorMatrix(entries=entries, meta=meta)


def load_matrix(path) -> OperatorMatrix:
    return loads_matrix(Path(path).read_text(encoding="ascii"))
