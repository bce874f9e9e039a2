"""Redundancy removal under the refinement order: strongest and baseline sets.

The strongest set keeps the maximal elements of the refinement closure (every
weaker, subsumed version is removed and its refining witness recorded); the
baseline keeps the minimal elements, the floor any compliant system must meet.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from reqlattice.model import Corpus, RequirementKind
from reqlattice.relations import ConflictRecord, find_conflicts, refinement_closure


@dataclass(frozen=True)
class OptimizedView:
    scope: str
    strongest: frozenset[str]
    baseline: frozenset[str]
    removed: dict[str, str]  # removed id -> witness refining id


def remove_redundant(ids: set[str] | frozenset[str], corpus: Corpus) -> tuple[frozenset[str], dict[str, str]]:
    """Maximal elements of the refinement closure restricted to ``ids``.

    The removed map records the lexicographically smallest refining witness
    for each dropped element, so reports are reproducible.
    """
    closure = refinement_closure(corpus.relations, set(ids))
    refined_by: dict[str, list[str]] = {}
    for strong, weak in closure:
        refined_by.setdefault(weak, []).append(strong)
    removed = {weak: min(strongs) for weak, strongs in refined_by.items()}
    strongest = frozenset(i for i in ids if i not in removed)
    return strongest, removed


def minimal_baseline(ids: set[str] | frozenset[str], corpus: Corpus) -> frozenset[str]:
    """Minimal elements of the refinement closure restricted to ``ids``."""
    closure = refinement_closure(corpus.relations, set(ids))
    has_weaker = {strong for strong, _weak in closure}
    return frozenset(i for i in ids if i not in has_weaker)


def optimize(ids: set[str] | frozenset[str], corpus: Corpus, scope: str) -> OptimizedView:
    strongest, removed = remove_redundant(ids, corpus)
    return OptimizedView(
        scope=scope,
        strongest=strongest,
        baseline=minimal_baseline(ids, corpus),
        removed=removed,
    )


@dataclass(frozen=True)
class GlobalView:
    per_jurisdiction: dict[str, dict[str, OptimizedView]]  # jid -> kind -> view
    global_per_kind: dict[str, OptimizedView]
    global_all: OptimizedView
    conflicts: list[ConflictRecord] = field(default_factory=list)


def global_view(corpus: Corpus) -> GlobalView:
    """Per-kind, per-jurisdiction and global optimized sets plus conflicts.

    The conflict list over the global union is what feeds the TOPSIS ranking.
    """
    per_jur: dict[str, dict[str, OptimizedView]] = {}
    for j in sorted(corpus.jurisdictions, key=lambda j: j.id):
        per_jur[j.id] = {}
        for kind in RequirementKind:
            ids = {r.id for r in corpus.requirements if r.jurisdiction == j.id and r.kind is kind}
            per_jur[j.id][kind.value] = optimize(ids, corpus, f"{kind.value}@{j.id}")

    global_per_kind: dict[str, OptimizedView] = {}
    for kind in RequirementKind:
        ids = {r.id for r in corpus.requirements if r.kind is kind}
        global_per_kind[kind.value] = optimize(ids, corpus, f"{kind.value}@global")

    all_ids = {r.id for r in corpus.requirements}
    return GlobalView(
        per_jurisdiction=per_jur,
        global_per_kind=global_per_kind,
        global_all=optimize(all_ids, corpus, "all@global"),
        conflicts=find_conflicts(corpus, all_ids),
    )


def conflict_requirement_ids(view: GlobalView) -> list[str]:
    """Sorted requirement ids involved in any global conflict."""
    ids = {i for record in view.conflicts for i in record.pair}
    return sorted(ids)
