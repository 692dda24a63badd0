"""Deterministic CSV and JSON reports."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

SCHEMA = "stationary-geodesics/report"
SCHEMA_VERSION = 1


@dataclass
class Report:
    """Result of one command: scalar results plus an optional sample table."""

    command: str
    parameters: dict
    results: dict
    columns: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    status: str = "ok"


def _plain(value):
    """Convert numpy scalars/arrays to JSON-safe Python values; non-finite floats become strings."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isfinite(v):
            return v
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    return value


def _cell(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def emit_report(report: Report, fmt: str, version: str, header: bool = True) -> bytes:
    """Serialise ``report`` as ``"json"`` or ``"csv"``.

    JSON carries the schema id, schema version, toolkit version, parameter
    echo, results and table.  CSV has one row per table sample; with
    ``header=True`` it is preceded by ``#`` lines echoing version and
    parameters.  No timestamps are written, so equal inputs give equal bytes.
    """
    if fmt == "json":
        body = {
            "schema": SCHEMA,
            "schema_version": SCHEMA_VERSION,
            "toolkit_version": version,
            "command": report.command,
            "status": report.status,
            "parameters": _plain(report.parameters),
            "results": _plain(report.results),
            "table": {"columns": list(report.columns), "rows": _plain(report.rows)},
        }
        return (json.dumps(body, sort_keys=True, indent=2, allow_nan=False) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        if header:
            buf.write(f"# {SCHEMA} v{SCHEMA_VERSION}\n")
            buf.write(f"# toolkit_version: {version}\n")
            buf.write(f"# command: {report.command}\n")
            for key in sorted(report.parameters):
                buf.write(f"# {key}: {json.dumps(_plain(report.parameters[key]), sort_keys=True)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(report.columns)
        for row in report.rows:
            writer.writerow([_cell(v) for v in row])
        return buf.getvalue().encode()
    raise ValueError(f"unknown format {fmt!r}")
