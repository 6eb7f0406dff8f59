"""Deterministic JSON reports.

Everything outside the ``timing`` section is a pure function of the run
configuration, so two runs of the same config differ only there.
"""
from __future__ import annotations

import json
import platform
from collections import Counter
from pathlib import Path

from . import __version__

STATUSES = ("zero", "nonzero", "error")


def summarize(records: list[dict]) -> dict:
    c = Counter(r["status"] for r in records)
    return {"total": len(records), **{s: c.get(s, 0) for s in STATUSES}}


def controls_ok(controls: list[dict]) -> bool:
    """Negative controls pass when the perturbed relation does not vanish."""
    return all(c["status"] == "nonzero" for c in controls)


def build_report(command: str, config: dict, records: list[dict], controls: list[dict] | None = None,
                 extra: dict | None = None, timing: dict | None = None) -> dict:
    controls = controls or []
    summary = summarize(records)
    summary["controls_ok"] = controls_ok(controls)
    summary["passed"] = summary["nonzero"] == 0 and summary["error"] == 0 and summary["controls_ok"]
    rep = {
        "engine": {"name": "sdhall", "version": __version__},
        "command": command,
        "config": config,
        "results": records,
        "controls": controls,
        "summary": summary,
        "timing": dict(timing or {}, python=platform.python_version()),
    }
    if extra:
        rep.update(extra)
    return rep


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1, default=str) + "\n"


def stable_view(report: dict) -> dict:
    """The report without its volatile timing section."""
    return {k: v for k, v in report.items() if k != "timing"}


def write_report(report: dict, path: str | Path | None) -> None:
    if path is None:
        return
    Path(path).write_text(dumps(report))


def load_report(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())
