"""Rendering of analysis results as text or canonical JSON envelopes."""

from __future__ import annotations

import os
import sys

from reqlattice.changes import ImpactReport, ReuseHint
from reqlattice.corpus_io import canonical_json, report_envelope
from reqlattice.hierarchy import HierarchyFinding
from reqlattice.optimize import GlobalView, OptimizedView
from reqlattice.partition import Finding, Partition, ScenarioClass
from reqlattice.relations import ConflictRecord
from reqlattice.topsis import Ranking


def _use_color(stream) -> bool:
    env = os.environ.get("REQLATTICE_COLOR")
    if env == "0":
        return False
    if env == "1":
        return True
    return hasattr(stream, "isatty") and stream.isatty()


def heading(text: str, stream=None) -> str:
    if _use_color(stream or sys.stdout):
        return f"\x1b[1m{text}\x1b[0m"
    return text


# ---------------------------------------------------------------------------
# JSON bodies

def finding_body(f: Finding) -> dict:
    return {"code": f.code, "severity": f.severity, "id": f.item_id, "message": f.message}


def partition_body(parts: dict[str, Partition],
                   elaboration: list[Finding],
                   condition: list[Finding]) -> dict:
    per_kind = {}
    for kind, part in sorted(parts.items()):
        per_kind[kind] = {
            "role": part.role,
            "general": {k: sorted(v) for k, v in sorted(part.general_concepts.items())},
            "specific": {jid: sorted(ids) for jid, ids in sorted(part.specific.items())},
        }
    return {
        "perKind": per_kind,
        "elaborationFindings": [finding_body(f) for f in elaboration],
        "contradictionCondition": [finding_body(f) for f in condition],
    }


def scenario_body(classes: dict[str, ScenarioClass | None]) -> dict:
    out = {}
    for aspect, cls in sorted(classes.items()):
        out[aspect] = None if cls is None else {"option": cls.option.value, "note": cls.note}
    return out


def _view_body(view: OptimizedView, emit: str) -> dict:
    out: dict = {"scope": view.scope}
    if emit in ("star", "both"):
        out["strongest"] = sorted(view.strongest)
        out["removed"] = dict(sorted(view.removed.items()))
    if emit in ("min", "both"):
        out["baseline"] = sorted(view.baseline)
    return out


def optimize_body(gv: GlobalView, emit: str = "both") -> dict:
    return {
        "perJurisdiction": {
            jid: {kind: _view_body(v, emit) for kind, v in sorted(kinds.items())}
            for jid, kinds in sorted(gv.per_jurisdiction.items())
        },
        "globalPerKind": {kind: _view_body(v, emit) for kind, v in sorted(gv.global_per_kind.items())},
        "global": _view_body(gv.global_all, emit),
        "conflicts": conflicts_body(gv.conflicts),
    }


def conflicts_body(records: list[ConflictRecord]) -> list[dict]:
    return [{"pair": list(r.pair), "origin": r.origin} for r in records]


def impact_body(report: ImpactReport, hints: list[ReuseHint]) -> dict:
    return {
        "label": report.label,
        "before": report.before_fingerprint,
        "after": report.after_fingerprint,
        "ops": [
            {
                "op": rec.op,
                "target": rec.target,
                "case": rec.case_code,
                "migrations": [
                    {"id": m.item_id, "from": m.from_set, "to": m.to_set}
                    for m in rec.migrations
                ],
                "affected": sorted(rec.affected),
                "components": [{"id": cid, "status": status} for cid, status in rec.component_impact],
            }
            for rec in report.per_op
        ],
        "reuseHints": [
            {"component": h.component_id, "owner": h.owner_jurisdiction,
             "for": h.for_jurisdiction, "via": h.via_requirement}
            for h in hints
        ],
    }


def hierarchy_body(findings: list[HierarchyFinding], effective: dict[str, list[str]]) -> dict:
    return {
        "findings": [
            {"code": f.code, "jurisdiction": f.jurisdiction, "message": f.message}
            for f in findings
        ],
        "effectiveRequirements": {jid: ids for jid, ids in sorted(effective.items())},
    }


def ranking_body(ranking: Ranking) -> dict:
    return {
        "ranking": [{"alternative": aid, "closeness": c} for aid, c in ranking.entries],
        "droppedCriteria": list(ranking.dropped_criteria),
    }


def envelope_json(report_type: str, body) -> str:
    return canonical_json(report_envelope(report_type, body))


# ---------------------------------------------------------------------------
# text renderings

def render_findings(findings: list[Finding], lines: list[str]) -> None:
    for f in findings:
        lines.append(f"  [{f.severity}] {f.code} {f.item_id}: {f.message}")


def partition_text(parts: dict[str, Partition],
                   elaboration: list[Finding],
                   condition: list[Finding]) -> str:
    lines = []
    for kind, part in sorted(parts.items()):
        lines.append(heading(f"{part.role} / {kind}"))
        if part.general_concepts:
            lines.append("  general concepts:")
            for key, ids in sorted(part.general_concepts.items()):
                lines.append(f"    {key}: {', '.join(sorted(ids))}")
        else:
            lines.append("  general concepts: (none)")
        for jid, ids in sorted(part.specific.items()):
            lines.append(f"  specific to {jid}: {', '.join(sorted(ids)) or '(none)'}")
    if elaboration:
        lines.append(heading("elaboration findings"))
        render_findings(elaboration, lines)
    if condition:
        lines.append(heading("cross-jurisdiction contradiction condition"))
        render_findings(condition, lines)
    return "\n".join(lines) + "\n"


def scenario_text(classes: dict[str, ScenarioClass | None]) -> str:
    lines = []
    for aspect, cls in sorted(classes.items()):
        if cls is None:
            lines.append(f"{aspect}: no items")
        else:
            lines.append(f"{aspect}: {cls.option.value} ({cls.note})")
    return "\n".join(lines) + "\n"


def optimize_text(gv: GlobalView, emit: str = "both") -> str:
    lines = [heading("global optimized view")]

    def emit_view(label: str, view: OptimizedView) -> None:
        lines.append(f"  {label}:")
        if emit in ("star", "both"):
            lines.append(f"    strongest: {', '.join(sorted(view.strongest)) or '(empty)'}")
            for removed, witness in sorted(view.removed.items()):
                lines.append(f"    removed {removed} (refined by {witness})")
        if emit in ("min", "both"):
            lines.append(f"    baseline:  {', '.join(sorted(view.baseline)) or '(empty)'}")

    emit_view("all requirements", gv.global_all)
    for kind, view in sorted(gv.global_per_kind.items()):
        emit_view(f"{kind} (global)", view)
    for jid, kinds in sorted(gv.per_jurisdiction.items()):
        lines.append(heading(f"jurisdiction {jid}"))
        for kind, view in sorted(kinds.items()):
            emit_view(kind, view)
    lines.append(heading("conflicts"))
    lines.append(conflicts_text(gv.conflicts).rstrip("\n"))
    return "\n".join(lines) + "\n"


def conflicts_text(records: list[ConflictRecord]) -> str:
    if not records:
        return "no conflicts\n"
    lines = [f"  {a} <-> {b} ({r.origin})" for r in records for a, b in [r.pair]]
    return "\n".join(lines) + "\n"


def impact_text(report: ImpactReport, hints: list[ReuseHint]) -> str:
    lines = [heading(f"change set: {report.label}")]
    for rec in report.per_op:
        lines.append(f"  {rec.op} {rec.target}: case {rec.case_code}, "
                     f"affected {', '.join(sorted(rec.affected)) or '(none)'}")
        for m in rec.migrations:
            lines.append(f"    {m.item_id}: {m.from_set} -> {m.to_set}")
        for cid, status in rec.component_impact:
            lines.append(f"    component {cid}: {status}")
    if hints:
        lines.append(heading("reuse hints"))
        for h in hints:
            lines.append(f"  {h.component_id} (of {h.owner_jurisdiction}) reusable for "
                         f"{h.for_jurisdiction} via {h.via_requirement}")
    return "\n".join(lines) + "\n"


def hierarchy_text(findings: list[HierarchyFinding], effective: dict[str, list[str]]) -> str:
    lines = []
    if findings:
        lines.append(heading("hierarchy findings"))
        for f in findings:
            lines.append(f"  {f.code} {f.jurisdiction}: {f.message}")
    else:
        lines.append("hierarchy well-formed")
    lines.append(heading("effective requirements"))
    for jid, ids in sorted(effective.items()):
        lines.append(f"  {jid}: {', '.join(ids) or '(none)'}")
    return "\n".join(lines) + "\n"


def ranking_text(ranking: Ranking) -> str:
    lines = [heading("ranking (closeness to ideal)")]
    for pos, (aid, closeness) in enumerate(ranking.entries, start=1):
        lines.append(f"  {pos}. {aid}  {closeness:.6f}")
    if ranking.dropped_criteria:
        lines.append(f"  dropped zero-variance criteria: {', '.join(ranking.dropped_criteria)}")
    return "\n".join(lines) + "\n"
