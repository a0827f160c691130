"""Deterministic report serialization.

Reports are emitted as JSON (all experiments) and CSV (tabular ones).
Floats are written with 17 significant digits, which round-trips float64
exactly: parsing an emitted JSON report and re-emitting it is
byte-identical, and repeated runs with the same seed produce
byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


@dataclass
class Report:
    """JSON payload plus an optional tabular (CSV) view of the results."""

    data: dict
    csv_columns: list | None = None
    csv_rows: list | None = None

    @property
    def has_csv(self) -> bool:
        return self.csv_columns is not None


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def _jsonify(obj):
    """Recursively convert arrays/scalars into JSON-ready values."""
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _scalar_str(v) -> str:
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, float):
        return format_float(v)
    if isinstance(v, int):
        return str(v)
    return json.dumps(v)


def _write_json(obj, parts: list, indent: int):
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            parts.append("{}")
            return
        parts.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            parts.append(f'{pad}  {json.dumps(str(k))}: ')
            _write_json(v, parts, indent + 1)
            parts.append(",\n" if i < len(obj) - 1 else "\n")
        parts.append(pad + "}")
    elif isinstance(obj, list):
        if not obj:
            parts.append("[]")
            return
        if all(not isinstance(v, (dict, list)) for v in obj):
            parts.append("[" + ", ".join(_scalar_str(v) for v in obj) + "]")
        else:
            parts.append("[\n")
            for i, v in enumerate(obj):
                parts.append(pad + "  ")
                _write_json(v, parts, indent + 1)
                parts.append(",\n" if i < len(obj) - 1 else "\n")
            parts.append(pad + "]")
    else:
        parts.append(_scalar_str(obj))


def dumps_canonical(obj) -> str:
    """Deterministic JSON text: insertion-ordered keys, %.17g floats."""
    parts: list = []
    _write_json(_jsonify(obj), parts, 0)
    parts.append("\n")
    return "".join(parts)


def emit_report(report: Report, fmt: str, path) -> None:
    """Write a report to path as 'json' or 'csv'."""
    if fmt == "json":
        body = dumps_canonical(report.data)
    elif fmt == "csv":
        if not report.has_csv:
            raise ValueError("report has no tabular form; emit it as json")
        lines = ["# columns: " + ",".join(report.csv_columns)]
        for row in report.csv_rows:
            lines.append(",".join(
                format_float(v) if isinstance(v, (float, np.floating))
                else str(_jsonify(v))
                for v in row
            ))
        body = "\n".join(lines) + "\n"
    else:
        raise ValueError(f"unknown report format {fmt!r}; use 'json' or 'csv'")
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(body)
