"""Report serialisation: CSV sweep tables, versioned JSON and SVG plots."""

from __future__ import annotations

import csv
import io
import json
import math
from datetime import datetime, timezone
from pathlib import Path

SCHEMA = "hclab/1"
FORMATS = ("csv", "json", "svg")
CSV_HEADER = ("eps", "ratio", "lower_bound")


def _num(x) -> str:
    return repr(float(x))


def report_csv(report) -> str:
    """One row per sweep point plus a ``limit`` summary row; header only for an empty sweep."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for e, r, lb in report.sweep_points:
        writer.writerow((_num(e), _num(r), _num(lb)))
    if report.sweep_points:
        tc = report.theoretical_constant
        const = "" if tc is None else ("inf" if not tc.finite else _num(tc.value))
        limit = "" if report.extrapolated_limit is None else _num(report.extrapolated_limit)
        writer.writerow(("limit", limit, const))
    return buf.getvalue()


def _clean(obj):
    """Replace non-finite floats so that the JSON stays strict."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return "infinite" if obj > 0 else ("-infinite" if obj < 0 else "nan")
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def report_payload(report, command: str, config: dict | None = None, seed: int | None = None) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "seed": seed,
        "config": config or {},
        "report": report.to_dict(),
        "timing": {
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "runtime_s": report.runtime,
        },
    }


def dumps(payload: dict) -> str:
    return json.dumps(_clean(payload), sort_keys=True, indent=2, allow_nan=False) + "\n"


def strip_timing(text: str) -> dict:
    """Parsed JSON report without the ``timing`` block (the only non-deterministic part)."""
    data = json.loads(text)
    data.pop("timing", None)
    if isinstance(data.get("criteria"), list):
        for c in data["criteria"]:
            c.pop("runtime_s", None)
    return data


def emit_report(report, fmt: str, out_dir, stem: str, command: str = "", config: dict | None = None,
                seed: int | None = None) -> Path:
    """Write ``report`` as ``<out_dir>/<stem>.<fmt>`` and return the path."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{stem}.{fmt}"
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            fh.write(report_csv(report))
    elif fmt == "json":
        with open(path, "w", newline="\n") as fh:
            fh.write(dumps(report_payload(report, command, config, seed)))
    else:
        from .plotting import save_svg, sweep_figure

        save_svg(sweep_figure(report), path)
    return path
