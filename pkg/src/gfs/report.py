"""Tabular diagnostics with deterministic CSV and JSON serialization.

Numbers are written with 17 significant digits so files round-trip exactly;
absent cells are left empty.  Tolerances belong in assertions, never in the
file layer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


def format_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def jsonable(v):
    """Recursively coerce numpy scalars/arrays so json.dumps succeeds."""
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, np.ndarray):
        return [jsonable(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    return v


@dataclass
class DiagnosticsReport:
    columns: tuple[str, ...]
    rows: list[tuple]
    metadata: dict = field(default_factory=dict)
    warning: str | None = None

    STANDARD_COLUMNS = ("n", "G", "T", "ratio", "S", "cauchy_gap")

    def to_csv_text(self) -> str:
        lines = [",".join(self.columns)]
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError("row width does not match the header")
            lines.append(",".join(format_cell(v) for v in row))
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        Path(path).write_text(self.to_csv_text(), encoding="utf-8")

    def to_json_dict(self) -> dict:
        out = {
            "columns": list(self.columns),
            "rows": [[jsonable(v) for v in row] for row in self.rows],
            "metadata": jsonable(self.metadata),
        }
        if self.warning is not None:
            out["warning"] = self.warning
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"

    def write_json(self, path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")
