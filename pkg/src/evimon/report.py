"""Report emission: a per-record CSV plus an optional JSON summary."""

from __future__ import annotations

import csv
import json

from .forward import EffectivenessReport

_FMT = ".12g"


def write_report_csv(report: EffectivenessReport, path) -> None:
    """One row per record; the window column fills where a window ends."""
    by_end = {w.end: w for w in report.windows}
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["timestamp", "conflict", "step_effectiveness", "window_effectiveness"]
        )
        for step in report.steps:
            window = by_end.get(step.index)
            writer.writerow(
                [
                    format(step.timestamp, _FMT),
                    format(step.conflict, _FMT),
                    format(step.step_effectiveness, _FMT),
                    format(window.value, _FMT) if window else "",
                ]
            )


def summary_dict(report: EffectivenessReport) -> dict:
    values = [w.value for w in report.windows]
    return {
        "records": len(report.steps),
        "window_len": report.window_len,
        "stride": report.stride,
        "rule": report.rule,
        "overall_effectiveness": report.overall,
        "windows": len(report.windows),
        "min_window_effectiveness": min(values) if values else None,
        "max_window_effectiveness": max(values) if values else None,
        "breach_steps": list(report.breach_steps),
        "reset_steps": [s.index for s in report.steps if s.reset],
        "breached": bool(report.breach_steps),
    }


def write_summary_json(report: EffectivenessReport, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(summary_dict(report), fh, indent=2)
        fh.write("\n")
