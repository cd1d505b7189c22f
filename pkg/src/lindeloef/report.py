"""Tabular experiment output and its CSV/JSON serialisation.

Floats are written with ``repr``, the shortest string that parses back to the
same double, so every numeric field round-trips exactly. Reports carry only
inputs that determine the numbers; execution details (thread count, output
path, wall time) are logged to stderr so that reruns are byte-identical.
"""

from __future__ import annotations

import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ReportIOError


def _plain(v):
    """numpy scalars and containers -> JSON-compatible python values."""
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return f if math.isfinite(f) else None
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_plain(x) for x in v]
    return v


def format_field(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


@dataclass
class Report:
    columns: list[str]
    meta: dict = field(default_factory=dict)
    rows: list[tuple] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def add(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} fields, header has {len(self.columns)}")
        self.rows.append(tuple(values))

    def to_dict(self) -> dict:
        return {
            "meta": _plain(self.meta),
            "rows": [_plain(dict(zip(self.columns, r))) for r in self.rows],
            "summary": _plain(self.summary),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.columns) + "\n")
        for r in self.rows:
            buf.write(",".join(format_field(v) for v in r) + "\n")
        return buf.getvalue()

    def sidecar_json(self) -> str:
        return json.dumps({"meta": _plain(self.meta), "summary": _plain(self.summary)}, indent=1, allow_nan=False) + "\n"


def emit(report: Report, fmt: str, out_path: str) -> None:
    """Write the report; CSV files get a ``<out>.meta.json`` sidecar."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    text = report.to_csv() if fmt == "csv" else report.to_json()
    if out_path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        if fmt == "csv":
            sys.stderr.write(report.sidecar_json())
        return
    path = Path(out_path)
    try:
        path.write_text(text, encoding="utf-8", newline="\n")
        if fmt == "csv":
            Path(str(path) + ".meta.json").write_text(report.sidecar_json(), encoding="utf-8", newline="\n")
    except OSError as exc:
        raise ReportIOError(f"cannot write report to {path}: {exc}") from exc
