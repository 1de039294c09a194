"""Export format: JSON header plus m,n,re,im rows, bit-exact round trip."""

import numpy as np
import pytest

from hardylab.matrixio import dump_matrix, dumps_matrix, load_matrix, loads_matrix
from hardylab.operators import OperatorMatrix, build_operator
from hardylab.series import from_coeffs


def test_round_trip_bit_exact(tmp_path):
    rng = np.random.default_rng(8)
    entries = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    entries *= rng.choice([1e-300, 1e-12, 1.0, 1e12], size=(16, 16))
    meta = {"u_spec": {"kind": "poly", "coeffs": [[0.0, 0.0], [1.0, 0.0]]},
            "phi_spec": {"kind": "poly", "coeffs": [[0.0, 0.0], [0.5, 0.0]]},
            "m": 1}
    mat = OperatorMatrix(entries, meta=meta)
    path = tmp_path / "matrix.csv"
    dump_matrix(mat, path)
    back = load_matrix(path)
    assert np.array_equal(back.entries, mat.entries)  # bitwise, no tolerance
    assert back.meta["m"] == 1
    assert back.meta["u_spec"] == meta["u_spec"]


def test_header_first_line_is_json(tmp_path):
    mat = build_operator(from_coeffs([0, 1], 4), from_coeffs([0, 0.5], 4), 1, 4,
                         meta={"u_spec": None, "phi_spec": None, "m": 1})
    text = dumps_matrix(mat)
    first, second = text.splitlines()[:2]
    import json

    header = json.loads(first)
    assert set(header) == {"trunc", "u_spec", "phi_spec", "m"}
    assert header["trunc"] == 4 and header["m"] == 1
    assert second == "m,n,re,im"


def test_diagonal_values_present():
    mat = build_operator(from_coeffs([0, 1], 4), from_coeffs([0, 0.5], 4), 1, 4)
    text = dumps_matrix(mat)
    assert "1,1,1.0,0.0" in text
    assert "3,3,0.75,0.0" in text


def test_rejects_malformed():
    with pytest.raises(ValueError, match="too short"):
        loads_matrix("{}")
    with pytest.raises(ValueError, match="missing keys"):
        loads_matrix('{"trunc": 2}\nm,n,re,im\n')
    with pytest.raises(ValueError, match="column line"):
        loads_matrix('{"trunc": 1, "u_spec": null, "phi_spec": null, "m": 1}\nwrong\n')
