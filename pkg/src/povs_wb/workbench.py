"""Command orchestration: parse a document, build and validate its objects,
run analyses, and assemble deterministic reports.

This module is the single implementation behind both the CLI and the HTTP
service; both surfaces call run() / run_search().
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Optional

from . import povs, opmaps, seqspace
from .dsl import WorkbenchFile, parse, render_set_dsl
from .generators import random_space
from .opmaps import LinearMap
from .povs import (
    AnalysisReport,
    IterationCapError,
    PreOrderedSpace,
    WedgeValidation,
)
from .report import (
    exit_code,
    new_report,
    ser_mat,
    ser_q,
    ser_set,
    ser_subspace,
    ser_vec,
    to_json,
    to_text,
)
from .semilin import CapacityError, full_set, set_equal, topo_closure

COMMANDS = ("check", "closure", "archimedeanize", "ideals", "types", "factor", "seq")


class InputError(ValueError):
    """Bad request that is not a syntax error (unknown map name etc.)."""


@dataclass
class BuiltFile:
    wf: WorkbenchFile
    spaces: dict[str, PreOrderedSpace]
    invalid: dict[str, WedgeValidation]
    maps: dict[str, LinearMap]
    map_errors: dict[str, str]


def build(wf: WorkbenchFile) -> BuiltFile:
    spaces: dict[str, PreOrderedSpace] = {}
    invalid: dict[str, WedgeValidation] = {}
    for name, dim in wf.space_dims.items():
        if dim == 0:
            spaces[name] = PreOrderedSpace(0, full_set(0))
            continue
        decl = wf.wedges[name]
        v = povs.validate_wedge(dim, decl.set_)
        if v.ok:
            spaces[name] = PreOrderedSpace(dim, decl.set_)
        else:
            invalid[name] = v
    maps: dict[str, LinearMap] = {}
    map_errors: dict[str, str] = {}
    for name, decl in wf.maps.items():
        missing = [s for s in (decl.domain, decl.codomain) if s in invalid]
        if missing:
            map_errors[name] = f"depends on invalid wedge(s): {', '.join(missing)}"
            continue
        maps[name] = LinearMap(decl.matrix, spaces[decl.domain], spaces[decl.codomain])
    return BuiltFile(wf, spaces, invalid, maps, map_errors)


def _space_names(built: BuiltFile) -> list[str]:
    return [name for kind, name in built.wf.order if kind == "space"]


def _mark(report: dict, status: str) -> None:
    order = ["ok", "cap-exceeded", "violation"]
    if order.index(status) > order.index(report["status"]):
        report["status"] = status


def _invalid_entries(built: BuiltFile, report: dict) -> dict[str, Any]:
    entries = {}
    for name, v in built.invalid.items():
        entry: dict[str, Any] = {"valid_wedge": False, "reason": v.message}
        if v.witness is not None:
            entry["witness"] = [ser_vec(v.witness[0]), ser_vec(v.witness[1])]
        entries[name] = entry
        report["issues"].append(f"space {name}: {v.message}")
        _mark(report, "violation")
    return entries


def _analysis_entry(sp: PreOrderedSpace, rep: AnalysisReport) -> dict[str, Any]:
    return {
        "valid_wedge": True,
        "dim": sp.dim,
        "wedge": ser_set(sp.positive),
        "regulator": ser_vec(povs.regulator(sp)),
        "is_cone": rep.is_cone,
        "is_majorizing": rep.is_majorizing,
        "is_almost_archimedean": rep.is_almost_archimedean,
        "is_archimedean": rep.is_archimedean,
        "is_ru_closed": rep.is_ru_closed,
        "alpha_type": rep.alpha_type,
        "lambda_type": rep.lambda_type,
        "lineality_dim": rep.lineality_dim,
        "infinitesimals": ser_subspace(rep.infinitesimals),
        "closure_steps": [ser_set(s) for s in rep.closure_steps],
        "tower": [ser_subspace(s) for s in rep.tower],
    }


def _run_check(built: BuiltFile, report: dict, cap: int) -> None:
    entries = _invalid_entries(built, report)
    for name in _space_names(built):
        if name in entries:
            continue
        sp = built.spaces[name]
        rep = povs.analyze(sp, cap=cap)
        entries[name] = _analysis_entry(sp, rep)
        if rep.alpha_type == "cap-exceeded" or rep.lambda_type == "cap-exceeded":
            _mark(report, "cap-exceeded")
            report["issues"].append(f"space {name}: iteration cap {cap} exceeded")
    report["spaces"] = entries

    map_entries = {}
    for kind, name in built.wf.order:
        if kind != "map":
            continue
        if name in built.map_errors:
            map_entries[name] = {"error": built.map_errors[name]}
            report["issues"].append(f"map {name}: {built.map_errors[name]}")
            _mark(report, "violation")
            continue
        t = built.maps[name]
        entry: dict[str, Any] = {
            "domain": built.wf.maps[name].domain,
            "codomain": built.wf.maps[name].codomain,
            "matrix": ser_mat(t.matrix),
            "is_positive": opmaps.is_positive(t),
        }
        try:
            entry["is_order_bounded"] = opmaps.is_order_bounded(t)
        except ValueError as e:
            entry["is_order_bounded"] = f"refused: {e}"
        if povs.is_ru_closed(t.codomain, t.codomain.positive):
            entry["preimage_of_positive_wedge_ru_closed"] = opmaps.check_ru_continuity(
                t, t.codomain.positive)
        map_entries[name] = entry
    if map_entries:
        report["maps"] = map_entries


def _run_closure(built: BuiltFile, report: dict, cap: int) -> None:
    entries = _invalid_entries(built, report)
    for name in _space_names(built):
        if name in entries:
            continue
        sp = built.spaces[name]
        try:
            res = povs.ru_closure(sp, sp.positive, cap=cap)
            entries[name] = {
                "steps": res.steps,
                "trace": [ser_set(s) for s in res.trace],
                "closure": ser_set(res.closure),
            }
        except IterationCapError as e:
            entries[name] = {
                "steps": "cap-exceeded",
                "trace": [ser_set(s) for s in e.trace],
            }
            report["issues"].append(f"space {name}: iteration cap {cap} exceeded")
            _mark(report, "cap-exceeded")
    report["spaces"] = entries


def quotient_document(name: str, pres: povs.QuotientPresentation) -> str:
    q = pres.quotient
    lines = [f"space {name} dim {q.dim}"]
    if q.dim > 0:
        lines.append(f"wedge {name}.pos := {render_set_dsl(q.positive)}")
    return "\n".join(lines) + "\n"


def _run_archimedeanize(built: BuiltFile, report: dict, cap: int) -> None:
    entries = _invalid_entries(built, report)
    for name in _space_names(built):
        if name in entries:
            continue
        sp = built.spaces[name]
        try:
            pres = povs.archimedeanization(sp, cap=cap)
        except IterationCapError:
            entries[name] = {"error": f"iteration cap {cap} exceeded"}
            report["issues"].append(f"space {name}: iteration cap {cap} exceeded")
            _mark(report, "cap-exceeded")
            continue
        entries[name] = {
            "kernel": ser_subspace(pres.kernel),
            "projection": ser_mat(pres.projection),
            "section": ser_mat(pres.section),
            "quotient_dim": pres.quotient.dim,
            "quotient_wedge": ser_set(pres.quotient.positive),
            "document": quotient_document(f"{name}_ark", pres),
        }
    report["spaces"] = entries


def _run_ideals(built: BuiltFile, report: dict, cap: int) -> None:
    entries = _invalid_entries(built, report)
    for name in _space_names(built):
        if name in entries:
            continue
        sp = built.spaces[name]
        try:
            tower, lam = povs.ideal_tower(sp, cap=cap)
            entries[name] = {
                "lambda_type": lam,
                "tower": [ser_subspace(s) for s in tower],
            }
        except IterationCapError as e:
            entries[name] = {
                "lambda_type": "cap-exceeded",
                "tower": [ser_subspace(s) for s in e.trace],
            }
            report["issues"].append(f"space {name}: iteration cap {cap} exceeded")
            _mark(report, "cap-exceeded")
    report["spaces"] = entries


def _run_types(built: BuiltFile, report: dict, cap: int) -> None:
    entries = _invalid_entries(built, report)
    for name in _space_names(built):
        if name in entries:
            continue
        sp = built.spaces[name]
        entry: dict[str, Any] = {}
        try:
            entry["alpha_type"] = povs.alpha_type(sp, cap=cap)
        except IterationCapError:
            entry["alpha_type"] = "cap-exceeded"
            _mark(report, "cap-exceeded")
        try:
            entry["lambda_type"] = povs.lambda_type(sp, cap=cap)
        except IterationCapError:
            entry["lambda_type"] = "cap-exceeded"
            _mark(report, "cap-exceeded")
        entries[name] = entry
    report["spaces"] = entries


def _run_factor(built: BuiltFile, report: dict, cap: int, map_name: Optional[str]) -> None:
    if not map_name:
        raise InputError("factor needs --map NAME")
    if map_name not in built.wf.maps:
        raise InputError(f"unknown map {map_name!r}")
    if map_name in built.map_errors:
        report["issues"].append(f"map {map_name}: {built.map_errors[map_name]}")
        _mark(report, "violation")
        return
    phi = built.maps[map_name]
    try:
        factored = opmaps.factor_through_archimedeanization(phi)
    except ValueError as e:
        report["factor"] = {"map": map_name, "error": str(e)}
        report["issues"].append(f"map {map_name}: {e}")
        _mark(report, "violation")
        return
    pres = povs.archimedeanization(phi.domain, cap=cap)
    report["factor"] = {
        "map": map_name,
        "factored_matrix": ser_mat(factored.matrix),
        "quotient_dim": factored.domain.dim,
        "projection": ser_mat(pres.projection),
        "composition_equals_original": True,
        "factored_is_positive": True,
        "document": quotient_document(f"{built.wf.maps[map_name].domain}_ark", pres),
    }


def _run_seq(built: BuiltFile, report: dict) -> None:
    entries = {}
    for kind, name in built.wf.order:
        if kind != "seq":
            continue
        x = built.wf.sequences[name]
        kind_name = seqspace.classify(x)
        entry: dict[str, Any] = {
            "class": kind_name,
            "bound": ser_q(seqspace.bounding_constant(x)),
        }
        for ambient in ("c0", "linf"):
            order = {"c00": 0, "c0": 1, "linf": 2}
            if order[kind_name] > order[ambient]:
                continue
            w = seqspace.is_infinitesimal_mod_c00(x, ambient)
            key = f"infinitesimal_mod_finite_in_{ambient}"
            if w is None:
                entry[key] = {"regulator": None}
            else:
                entry[key] = {
                    "regulator": seqspace.describe(w.regulator),
                    "thresholds": [[n, k] for n, k in w.thresholds],
                    "note": w.note,
                }
        entries[name] = entry
    report["sequences"] = entries
    report["notes"] = [
        "sequence checks are witness-level only: membership of one element at a time, "
        "never a claim about a whole infinite-dimensional space",
        "tower heights of infinite-dimensional quotients are out of scope for this tool "
        "and are never asserted",
    ]


def run(command: str, source: str, cap: int = povs.DEFAULT_ITERATION_CAP,
        map_name: Optional[str] = None) -> dict[str, Any]:
    """Parse and execute one command over a document; returns the report."""
    if command not in COMMANDS:
        raise InputError(f"unknown command {command!r}")
    flags: dict[str, Any] = {"cap": cap}
    if map_name:
        flags["map"] = map_name
    report = new_report(command, source, flags)
    wf = parse(source)
    built = build(wf)
    if command == "check":
        _run_check(built, report, cap)
    elif command == "closure":
        _run_closure(built, report, cap)
    elif command == "archimedeanize":
        _run_archimedeanize(built, report, cap)
    elif command == "ideals":
        _run_ideals(built, report, cap)
    elif command == "types":
        _run_types(built, report, cap)
    elif command == "factor":
        _run_factor(built, report, cap, map_name)
    elif command == "seq":
        _run_seq(built, report)
    return report


def _wedge_document(name: str, sp: PreOrderedSpace) -> str:
    return f"space {name} dim {sp.dim}\nwedge {name}.pos := {render_set_dsl(sp.positive)}\n"


def _case_invariants(sp: PreOrderedSpace, rep: AnalysisReport, cap: int) -> list[str]:
    """Cross-checks beyond the ones analyze() already enforces internally.

    Returns human-readable violation strings (empty when everything holds).
    """
    problems = []
    if set_equal(topo_closure(sp.positive), sp.positive) and not rep.is_archimedean:
        problems.append("topologically closed wedge is not Archimedean")
    if rep.is_almost_archimedean and rep.alpha_type not in (0, 1):
        problems.append(f"almost Archimedean space has alpha {rep.alpha_type}")
    try:
        pres = povs.archimedeanization(sp, cap=cap)
    except IterationCapError:
        problems.append("archimedeanization exceeded the iteration cap")
        return problems
    u = povs.regulator(sp)
    # an order unit inside the lineality is trivially infinitesimal, so the
    # claim only binds for units outside W cap -W
    if any(v != 0 for v in u) and not povs.lineality(sp).contains(u):
        if povs.has_order_unit(sp, u) and povs.infinitesimal_ideal(sp).contains(u):
            problems.append("a nonzero order unit outside the lineality is infinitesimal")
    for step_set in rep.closure_steps:
        v = povs.validate_wedge(sp.dim, step_set)
        if not v.ok:
            problems.append(f"a derived-set iterate is not a wedge: {v.message}")
            break
    return problems


def run_search(dim: int, cases: int, seed: int, cap: int = povs.DEFAULT_ITERATION_CAP,
               max_dim: int = 4) -> dict[str, Any]:
    """Generate wedges, compute both ordinal types, tabulate, cross-check."""
    if dim < 1 or dim > max_dim:
        raise InputError(f"search dimension must be between 1 and {max_dim}")
    if cases < 0:
        raise InputError("cases must be nonnegative")
    flags = {"dim": dim, "cases": cases, "seed": seed, "cap": cap}
    report = new_report("search", "", flags)
    rng = random.Random(seed)
    table: dict[tuple, int] = {}
    violations: list[dict[str, Any]] = []
    capped: list[dict[str, Any]] = []
    eq_counts = {"lambda_eq_alpha": 0, "lambda_eq_alpha_plus_1": 0, "other": 0}
    other_docs: list[str] = []
    for idx in range(cases):
        sp = random_space(rng, dim)
        doc = _wedge_document(f"W{idx}", sp)
        try:
            rep = povs.analyze(sp, cap=cap)
        except CapacityError as e:
            capped.append({"case": idx, "document": doc, "capacity": str(e)})
            continue
        if isinstance(rep.alpha_type, str) or isinstance(rep.lambda_type, str):
            capped.append({"case": idx, "document": doc})
            continue
        key = (rep.alpha_type, rep.lambda_type)
        table[key] = table.get(key, 0) + 1
        if rep.lambda_type == rep.alpha_type:
            eq_counts["lambda_eq_alpha"] += 1
        elif rep.lambda_type == rep.alpha_type + 1:
            eq_counts["lambda_eq_alpha_plus_1"] += 1
        else:
            eq_counts["other"] += 1
            other_docs.append(doc)
        problems = _case_invariants(sp, rep, cap)
        for p in problems:
            violations.append({"case": idx, "problem": p, "document": doc})
    report["search"] = {
        "dim": dim,
        "cases": cases,
        "seed": seed,
        "type_table": [
            {"alpha": a, "lambda": l, "count": c}
            for (a, l), c in sorted(table.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1])))
        ],
        "hypothesis_counts": eq_counts,
        "other_type_gap_documents": other_docs,
        "violations": violations,
        "cap_exceeded": capped,
    }
    if violations:
        _mark(report, "violation")
    return report


def render(report: dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "text":
        return to_text(report)
    raise InputError(f"unknown format {fmt!r}")
