"""Command-line front end.

Exit codes: 0 success, 1 parse/validation error (incl. bad usage), 2
strict-mode findings, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from reqlattice import corpus_io, hierarchy, optimize, partition, relations, reports, topsis
from reqlattice.changes import apply_change_set, reuse_hints
from reqlattice.errors import (
    CycleError,
    DegenerateMatrixError,
    EmptyAspectError,
    IOFailure,
    ParseError,
    ReqLatticeError,
    ValidationError,
)
from reqlattice.model import Corpus, Level, RequirementKind, SourceKind
from reqlattice.partition import Finding, Partition

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_STRICT = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; the contract wants 1
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


def _build_parser() -> _Parser:
    parser = _Parser(prog="reqlattice", description="Multi-jurisdiction requirements analysis")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, corpus=True):
        if corpus:
            p.add_argument("--corpus", required=True, help="corpus file (.reqcorpus.json)")
        p.add_argument("--level", choices=["national", "state", "org"], default=None,
                       help="restrict analysis to this hierarchy level's frontier")
        p.add_argument("--format", choices=["text", "json"], default="text")
        p.add_argument("--strict", action="store_true",
                       help="escalate warnings/conflicts to a failing exit code")
        p.add_argument("--out", default=None, help="write the report to this file")
        return p

    common(sub.add_parser("validate", help="load and validate a corpus"))
    common(sub.add_parser("partition", help="general/specific decomposition"))
    common(sub.add_parser("scenario", help="classify the regulation/culture overlap scenario"))
    p = common(sub.add_parser("optimize", help="strongest/baseline requirement sets"))
    p.add_argument("--emit", choices=["min", "star", "both"], default="both")
    common(sub.add_parser("conflicts", help="list declared and derived contradictions"))
    p = common(sub.add_parser("change", help="apply a change set and classify its impact"))
    p.add_argument("--changes", required=True, help="change-set file (.reqchange.json)")
    common(sub.add_parser("hierarchy", help="hierarchy lint and effective requirement sets"))
    p = common(sub.add_parser("rank", help="TOPSIS ranking of conflict resolutions"))
    p.add_argument("--alts", required=True, help="alternatives file (.reqalts.json)")
    return parser


_LEVEL_FLAG = {"national": Level.NATIONAL, "state": Level.STATE, "org": Level.ORGANISATIONAL}


def _emit(args, text_out: str, json_out: str) -> None:
    payload = json_out if args.format == "json" else text_out
    if getattr(args, "out", None) and args.command != "change":
        Path(args.out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)


def _level_partitions(corpus: Corpus, level_flag: str | None) -> dict[str, Partition]:
    """Per-kind partitions, over the flat corpus or a level frontier."""
    if level_flag is None:
        return partition.all_partitions(corpus)
    selection = hierarchy.select_level(corpus, _LEVEL_FLAG[level_flag])
    out: dict[str, Partition] = {}
    for skind in SourceKind:
        view = hierarchy.level_source_view(corpus, selection, skind)
        out[skind.value] = partition.partition_sources(corpus, skind, view)
    for rkind in RequirementKind:
        view = hierarchy.level_requirement_view(corpus, selection, rkind)
        out[rkind.value] = partition.partition_requirements(corpus, rkind, view)
    return out


def _component_scope_warnings(corpus: Corpus, parts: dict[str, Partition]) -> list[Finding]:
    warnings: list[Finding] = []
    for comp in sorted(corpus.components, key=lambda c: c.id):
        for rid in sorted(comp.implements):
            req = corpus.requirement_map().get(rid)
            if req is None:
                continue
            part = parts[req.kind.value]
            if comp.scope.kind == "general" and rid not in part.general:
                warnings.append(Finding(
                    "COMPONENT_SCOPE", "warning", comp.id,
                    f"general component {comp.id!r} implements non-general requirement {rid!r}"))
            elif comp.scope.kind == "specific" and rid not in part.specific.get(comp.scope.jurisdiction, frozenset()):
                warnings.append(Finding(
                    "COMPONENT_SCOPE", "warning", comp.id,
                    f"component {comp.id!r} of {comp.scope.jurisdiction!r} implements out-of-scope requirement {rid!r}"))
    return warnings


def _cmd_validate(args, corpus: Corpus) -> int:
    parts = _level_partitions(corpus, args.level)
    warnings = _component_scope_warnings(corpus, parts)
    body = {"valid": True, "warnings": [reports.finding_body(f) for f in warnings]}
    lines = ["corpus valid"]
    reports.render_findings(warnings, lines)
    _emit(args, "\n".join(lines) + "\n", reports.envelope_json("validate", body))
    return EXIT_STRICT if args.strict and warnings else EXIT_OK


def _cmd_partition(args, corpus: Corpus) -> int:
    parts = _level_partitions(corpus, args.level)
    source_parts = {k: parts[k] for k in (SourceKind.LEGAL.value, SourceKind.CULTURAL.value)}
    req_parts = {k.value: parts[k.value] for k in RequirementKind}
    elaboration = partition.check_elaboration(corpus, source_parts, req_parts)
    condition: list[Finding] = []
    for part in source_parts.values():
        condition.extend(partition.check_specific_contradiction_condition(corpus, part))
    _emit(
        args,
        reports.partition_text(parts, elaboration, condition),
        reports.envelope_json("partition", reports.partition_body(parts, elaboration, condition)),
    )
    failing = [f for f in elaboration if f.severity == "error"] + condition
    return EXIT_STRICT if args.strict and failing else EXIT_OK


def _cmd_scenario(args, corpus: Corpus) -> int:
    parts = _level_partitions(corpus, args.level)
    classes = {}
    for kind in SourceKind:
        try:
            classes[kind.value] = partition.classify_scenario(parts[kind.value])
        except EmptyAspectError:
            classes[kind.value] = None
    _emit(args, reports.scenario_text(classes),
          reports.envelope_json("scenario", reports.scenario_body(classes)))
    return EXIT_OK


def _cmd_optimize(args, corpus: Corpus) -> int:
    gv = optimize.global_view(corpus)
    _emit(args, reports.optimize_text(gv, args.emit),
          reports.envelope_json("optimize", reports.optimize_body(gv, args.emit)))
    return EXIT_STRICT if args.strict and gv.conflicts else EXIT_OK


def _cmd_conflicts(args, corpus: Corpus) -> int:
    records = relations.find_conflicts(corpus, {r.id for r in corpus.requirements})
    _emit(args, reports.conflicts_text(records),
          reports.envelope_json("conflicts", reports.conflicts_body(records)))
    return EXIT_STRICT if args.strict and records else EXIT_OK


def _cmd_change(args, corpus: Corpus) -> int:
    cs = corpus_io.load_change_set(args.changes, corpus)
    new_corpus, report = apply_change_set(corpus, cs)
    hints = reuse_hints(report, corpus)
    if args.out:
        corpus_io.save_corpus(new_corpus, args.out)
    payload_text = reports.impact_text(report, hints)
    payload_json = reports.envelope_json("impact", reports.impact_body(report, hints))
    sys.stdout.write(payload_json if args.format == "json" else payload_text)
    return EXIT_OK


def _cmd_hierarchy(args, corpus: Corpus) -> int:
    findings = hierarchy.validate_hierarchy(corpus)
    effective = {
        j.id: sorted(hierarchy.effective_requirements(corpus, j.id))
        for j in corpus.jurisdictions
    }
    _emit(args, reports.hierarchy_text(findings, effective),
          reports.envelope_json("hierarchy", reports.hierarchy_body(findings, effective)))
    return EXIT_STRICT if args.strict and findings else EXIT_OK


def _cmd_rank(args, corpus: Corpus) -> int:
    alts = corpus_io.load_alternatives(args.alts)
    matrix = topsis.build_conflict_matrix(corpus, alts)
    ranking = topsis.rank_alternatives(matrix)
    _emit(args, reports.ranking_text(ranking),
          reports.envelope_json("ranking", reports.ranking_body(ranking)))
    return EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "partition": _cmd_partition,
    "scenario": _cmd_scenario,
    "optimize": _cmd_optimize,
    "conflicts": _cmd_conflicts,
    "change": _cmd_change,
    "hierarchy": _cmd_hierarchy,
    "rank": _cmd_rank,
}


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        corpus = corpus_io.load_corpus(args.corpus)
        return _COMMANDS[args.command](args, corpus)
    except IOFailure as exc:
        print(f"reqlattice: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ParseError, ValidationError, CycleError, DegenerateMatrixError) as exc:
        print(f"reqlattice: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ReqLatticeError as exc:
        print(f"reqlattice: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"reqlattice: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
