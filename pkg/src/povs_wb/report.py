"""Deterministic report structures: one JSON document plus a text rendering.

Rationals serialize as 'p/q' strings, never floats. Identical inputs and
seeds must reproduce identical bytes, so everything is sorted and no
timestamps or environment data enter the payload.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from . import __version__
from .exactnum import Matrix, Subspace, Vector, format_rational
from .semilin import SemiLinearSet
from .dsl import render_set_dsl


def ser_q(x: Fraction) -> str:
    return format_rational(Fraction(x))


def ser_vec(v: Vector) -> list[str]:
    return [ser_q(x) for x in v]


def ser_mat(m: Matrix) -> list[list[str]]:
    return [ser_vec(row) for row in m]


def ser_subspace(s: Subspace) -> dict[str, Any]:
    return {"ambient_dim": s.ambient_dim, "dim": s.dim, "basis": ser_mat(s.basis)}


def ser_set(s: SemiLinearSet) -> dict[str, Any]:
    return {"dim": s.dim, "cells": len(s.cells), "expr": render_set_dsl(s)}


def new_report(command: str, source: str, flags: dict[str, Any]) -> dict[str, Any]:
    return {
        "artifact": {"name": "povs-workbench", "version": __version__},
        "command": command,
        "flags": dict(sorted(flags.items())),
        "input": source,
        "status": "ok",
        "issues": [],
    }


def to_json(report: dict[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def exit_code(report: dict[str, Any]) -> int:
    return {"ok": 0, "violation": 2, "cap-exceeded": 3}[report["status"]]


def _fmt_value(v: Any, indent: int) -> list[str]:
    pad = "  " * indent
    if isinstance(v, dict):
        lines = []
        for k in v:
            sub = _fmt_value(v[k], indent + 1)
            if len(sub) == 1 and not isinstance(v[k], (dict, list)):
                lines.append(f"{pad}{k}: {sub[0].strip()}")
            else:
                lines.append(f"{pad}{k}:")
                lines.extend(sub)
        return lines
    if isinstance(v, list):
        if all(not isinstance(item, (dict, list)) for item in v):
            return [f"{pad}[{', '.join(str(i) for i in v)}]"]
        lines = []
        for item in v:
            lines.append(f"{pad}-")
            lines.extend(_fmt_value(item, indent + 1))
        return lines
    return [f"{pad}{v}"]


def to_text(report: dict[str, Any]) -> str:
    """Human-readable rendering; deterministic like the JSON form."""
    lines = [
        f"povs-workbench {report['artifact']['version']} :: {report['command']}",
        f"status: {report['status']}",
    ]
    for key in sorted(report):
        if key in ("artifact", "command", "status", "input"):
            continue
        val = report[key]
        if key == "issues" and not val:
            continue
        lines.append(f"{key}:")
        lines.extend(_fmt_value(val, 1))
    lines.append("")
    return "\n".join(lines)
