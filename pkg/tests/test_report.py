"""Serialization contract of the diagnostics reports."""

import json
import math

import numpy as np
import pytest

from gfs.report import DiagnosticsReport, format_cell, jsonable


def test_format_cell_variants():
    assert format_cell(None) == ""
    assert format_cell(7) == "7"
    assert format_cell(np.int64(7)) == "7"
    assert format_cell(True) == "true"
    assert format_cell(np.bool_(False)) == "false"
    assert format_cell("walsh:3") == "walsh:3"
    assert format_cell(0.25) == "0.25"


def test_float_formatting_roundtrips():
    for v in (1 / 3, math.pi, 2.0 ** -52, 1e300, -7.1e-12, 0.1 + 0.2):
        assert float(format_cell(v)) == v
        assert float(format_cell(np.float64(v))) == v


def test_csv_layout_and_blanks():
    rep = DiagnosticsReport(
        columns=("n", "G", "T", "ratio", "S", "cauchy_gap"),
        rows=[(4, 0.5, 1.0, 0.5, None, None), (8, 0.25, 1.0, None, None, 0.125)],
        metadata={"system": "walsh"},
    )
    lines = rep.to_csv_text().splitlines()
    assert lines[0] == "n,G,T,ratio,S,cauchy_gap"
    assert lines[1] == "4,0.5,1,0.5,,"
    assert lines[2] == "8,0.25,1,,,0.125"
    assert rep.to_csv_text().endswith("\n")


def test_row_width_enforced():
    rep = DiagnosticsReport(columns=("a", "b"), rows=[(1,)], metadata={})
    with pytest.raises(ValueError):
        rep.to_csv_text()


def test_json_payload(tmp_path):
    rep = DiagnosticsReport(
        columns=("n", "value"),
        rows=[(1, np.float64(0.5)), (2, None)],
        metadata={"seed": np.int64(3), "list": np.array([1.0, 2.0])},
        warning="all-T-zero",
    )
    path = tmp_path / "rep.json"
    rep.write_json(path)
    data = json.loads(path.read_text())
    assert data["rows"] == [[1, 0.5], [2, None]]
    assert data["metadata"] == {"seed": 3, "list": [1.0, 2.0]}
    assert data["warning"] == "all-T-zero"
    # deterministic text (sorted keys, trailing newline)
    assert rep.to_json() == rep.to_json()
    assert rep.to_json().endswith("\n")


def test_jsonable_nested():
    out = jsonable({"a": (np.int32(1), [np.float32(0.5)]), "b": {"c": np.bool_(True)}})
    assert out == {"a": [1, [0.5]], "b": {"c": True}}
    assert json.dumps(out)
