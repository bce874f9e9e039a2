"""Change application and impact classification.

Each modify of a requirement lands in exactly one of four cases:

* ``1a`` — a jurisdiction-specific requirement changes and stays specific;
* ``1b`` — a specific requirement becomes identical to every other
  jurisdiction's counterpart and the concept is promoted to the general set;
* ``2a`` — a general requirement changes and every jurisdiction adopts the
  new version, so it stays general;
* ``2b`` — only some jurisdictions adopt the new version of a general
  requirement: the concept splits out of the general set, adopters get the
  new content (their components must change), keepers stay on the old one
  (their components are untouched).

Ops are applied sequentially; partitions are recomputed before classifying
each op, and the whole change set is atomic: any failure leaves the input
corpus untouched (it is immutable) and raises.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from reqlattice import model
from reqlattice.corpus_io import ChangeOp, ChangeSet, validate_change_set
from reqlattice.errors import MissingAdoptedByError, UnknownTargetError, ValidationError
from reqlattice.model import (
    Component,
    Corpus,
    RelationSet,
    Requirement,
    RequirementKind,
    SourceItem,
    SourceKind,
)
from reqlattice.partition import Partition, partition_requirements
from reqlattice.relations import refinement_closure

CASE_SPEC_STAYS_SPEC = "1a"
CASE_SPEC_TO_GENERAL = "1b"
CASE_GEN_STAYS_GEN = "2a"
CASE_GEN_SPLITS = "2b"
CASE_ADD = "ADD"
CASE_REMOVE = "REMOVE"
CASE_SOURCE_CHANGE = "SOURCE_CHANGE"


@dataclass(frozen=True)
class Migration:
    item_id: str
    from_set: str  # "general" | "specific:<jid>" | "-"
    to_set: str


@dataclass(frozen=True)
class OpRecord:
    op: str
    target: str
    case_code: str
    migrations: tuple[Migration, ...]
    affected: frozenset[str]
    component_impact: tuple[tuple[str, str], ...]  # (component id, mustChange|unchanged|reusable)
    counterparts: tuple[str, ...] = ()  # other-jurisdiction ids merged by a 1b promotion


@dataclass(frozen=True)
class ImpactReport:
    label: str
    per_op: tuple[OpRecord, ...]
    before_fingerprint: str
    after_fingerprint: str


@dataclass(frozen=True)
class ReuseHint:
    component_id: str
    owner_jurisdiction: str
    for_jurisdiction: str
    via_requirement: str


def _req_partitions(corpus: Corpus) -> dict[str, Partition]:
    return {kind.value: partition_requirements(corpus, kind) for kind in RequirementKind}


def _components_implementing(corpus: Corpus, rid: str) -> list[Component]:
    return sorted((c for c in corpus.components if rid in c.implements), key=lambda c: c.id)


def _set_name(part: Partition, rid: str) -> str:
    owner = part.owner_of(rid)
    return "general" if owner is None else f"specific:{owner}"


def _with_requirement(corpus: Corpus, updated: Requirement) -> Corpus:
    reqs = tuple(updated if r.id == updated.id else r for r in corpus.requirements)
    return replace(corpus, requirements=reqs)


def _apply_payload(r: Requirement, payload) -> Requirement:
    text = payload.text if payload.text is not None else r.text
    concept = payload.concept_key if payload.concept_key is not None else r.concept_key
    return replace(r, text=text, concept_key=concept, content_hash=model.content_hash(text))


def classify_change(
    corpus: Corpus, op: ChangeOp, partitions: dict[str, Partition]
) -> tuple[Corpus, OpRecord]:
    """Classify and apply one modify op targeting a requirement.

    Returns the updated corpus (not yet revalidated) and the per-op record.
    """
    rmap = corpus.requirement_map()
    target = rmap.get(op.target)
    if target is None:
        raise UnknownTargetError(op.target)
    part = partitions[target.kind.value]
    all_jids = frozenset(j.id for j in corpus.jurisdictions)
    new_target = _apply_payload(target, op.payload)

    if op.target in part.general:
        if op.adopted_by is None:
            raise MissingAdoptedByError(op.target)
        group = sorted(part.general_concepts[target.concept_key])
        by_jur = {rmap[rid].jurisdiction: rid for rid in group}

        if op.adopted_by == all_jids:
            # 2a: the new version stays general, every counterpart is updated
            out = corpus
            for rid in group:
                out = _with_requirement(out, _apply_payload(rmap[rid], op.payload))
            impact = tuple(
                (c.id, "mustChange")
                for rid in group for c in _components_implementing(corpus, rid)
            )
            record = OpRecord(
                op="modify", target=op.target, case_code=CASE_GEN_STAYS_GEN,
                migrations=(), affected=all_jids, component_impact=impact,
            )
            return out, record

        # 2b: the concept leaves the general set; adopters switch to the new
        # content, keepers stay on the old version untouched
        out = corpus
        migrations = []
        impact = []
        for jid in sorted(all_jids):
            rid = by_jur[jid]
            if jid in op.adopted_by:
                out = _with_requirement(out, _apply_payload(rmap[rid], op.payload))
                impact.extend((c.id, "mustChange") for c in _components_implementing(corpus, rid))
            else:
                impact.extend((c.id, "unchanged") for c in _components_implementing(corpus, rid))
            migrations.append(Migration(rid, "general", f"specific:{jid}"))
        record = OpRecord(
            op="modify", target=op.target, case_code=CASE_GEN_SPLITS,
            migrations=tuple(migrations), affected=frozenset(op.adopted_by),
            component_impact=tuple(impact),
        )
        return out, record

    # target sits in a specific set
    owner = part.owner_of(op.target)
    counterparts = []
    for jid in sorted(all_jids - {owner}):
        match = next(
            (r for r in corpus.requirements
             if r.jurisdiction == jid and r.kind is target.kind
             and r.concept_key == new_target.concept_key
             and r.content_hash == new_target.content_hash),
            None,
        )
        if match is None:
            counterparts = None
            break
        counterparts.append(match.id)

    out = _with_requirement(corpus, new_target)
    own_impact = tuple((c.id, "mustChange") for c in _components_implementing(corpus, op.target))

    if counterparts is None or len(all_jids) == 1:
        # 1a: still specific to its jurisdiction; nobody else is touched
        record = OpRecord(
            op="modify", target=op.target, case_code=CASE_SPEC_STAYS_SPEC,
            migrations=(), affected=frozenset({owner}), component_impact=own_impact,
        )
        return out, record

    # 1b: now identical everywhere; the concept joins the general set and the
    # counterparts' components become reuse candidates for the promoter
    after = _req_partitions(out)[target.kind.value]
    migrations = [
        Migration(rid, _set_name(part, rid), "general")
        for rid in sorted([op.target, *counterparts])
        if rid in after.general
    ]
    reuse = tuple(
        (c.id, "reusable")
        for rid in counterparts for c in _components_implementing(corpus, rid)
    )
    record = OpRecord(
        op="modify", target=op.target, case_code=CASE_SPEC_TO_GENERAL,
        migrations=tuple(migrations), affected=all_jids,
        component_impact=own_impact + reuse, counterparts=tuple(counterparts),
    )
    return out, record


def _apply_add(corpus: Corpus, op: ChangeOp) -> tuple[Corpus, OpRecord]:
    p = op.payload
    if p.role not in ("requirement", "source"):
        raise ValidationError("MISSING_FIELD", f"add op {op.target!r} payload needs role requirement/source")
    for name in ("kind", "jurisdiction", "text", "concept_key"):
        if getattr(p, name) is None:
            raise ValidationError("MISSING_FIELD", f"add op {op.target!r} payload lacks {name}")
    if p.role == "requirement":
        item = Requirement(
            id=op.target, kind=RequirementKind(p.kind), jurisdiction=p.jurisdiction,
            concept_key=p.concept_key, text=p.text,
            content_hash=model.content_hash(p.text), derived_from=p.derived_from,
        )
        out = replace(corpus, requirements=(*corpus.requirements, item))
    else:
        kind = SourceKind(p.kind)
        item = SourceItem(
            id=op.target, kind=kind, jurisdiction=p.jurisdiction,
            concept_key=p.concept_key, text=p.text,
            content_hash=model.content_hash(p.text),
            is_static=kind is SourceKind.CULTURAL,
        )
        out = replace(corpus, sources=(*corpus.sources, item))
    record = OpRecord(
        op="add", target=op.target, case_code=CASE_ADD, migrations=(),
        affected=frozenset({p.jurisdiction}), component_impact=(),
    )
    return out, record


def _apply_remove(corpus: Corpus, op: ChangeOp) -> tuple[Corpus, OpRecord]:
    """Drop the item plus the relation pairs and component links naming it.

    A requirement still deriving from a removed source is left dangling on
    purpose; revalidation rejects it so authors must update the elaboration.
    """
    rid = op.target
    item = corpus.item(rid)
    if item is None:
        raise UnknownTargetError(rid)
    relations = RelationSet(
        refines=frozenset(p for p in corpus.relations.refines if rid not in p),
        contradicts=frozenset(p for p in corpus.relations.contradicts if rid not in p),
    )
    components = tuple(
        replace(c, implements=frozenset(c.implements - {rid})) for c in corpus.components
    )
    out = replace(
        corpus,
        sources=tuple(s for s in corpus.sources if s.id != rid),
        requirements=tuple(r for r in corpus.requirements if r.id != rid),
        relations=relations,
        components=components,
    )
    impacted = tuple((c.id, "mustChange") for c in _components_implementing(corpus, rid))
    record = OpRecord(
        op="remove", target=rid, case_code=CASE_REMOVE, migrations=(),
        affected=frozenset({item.jurisdiction}), component_impact=impacted,
    )
    return out, record


def _apply_source_modify(corpus: Corpus, op: ChangeOp) -> tuple[Corpus, OpRecord]:
    smap = corpus.source_map()
    old = smap[op.target]
    text = op.payload.text if op.payload.text is not None else old.text
    concept = op.payload.concept_key if op.payload.concept_key is not None else old.concept_key
    updated = replace(old, text=text, concept_key=concept, content_hash=model.content_hash(text))
    out = replace(
        corpus,
        sources=tuple(updated if s.id == old.id else s for s in corpus.sources),
    )
    dependents = sorted(r.id for r in corpus.requirements if old.id in r.derived_from)
    impact = tuple(
        (c.id, "mustChange") for rid in dependents for c in _components_implementing(corpus, rid)
    )
    record = OpRecord(
        op="modify", target=op.target, case_code=CASE_SOURCE_CHANGE, migrations=(),
        affected=frozenset({old.jurisdiction}), component_impact=impact,
    )
    return out, record


def apply_change_set(corpus: Corpus, cs: ChangeSet) -> tuple[Corpus, ImpactReport]:
    validate_change_set(cs, corpus)
    before = model.corpus_fingerprint(corpus)
    current = corpus
    records: list[OpRecord] = []
    for op in cs.ops:
        if op.op == "add":
            current, record = _apply_add(current, op)
        elif op.op == "remove":
            current, record = _apply_remove(current, op)
        elif op.target in current.source_map():
            current, record = _apply_source_modify(current, op)
        else:
            partitions = _req_partitions(current)
            current, record = classify_change(current, op, partitions)
        model.validate_corpus(current)
        ids = {s.id for s in current.sources} | {r.id for r in current.requirements}
        refinement_closure(current.relations, ids)
        records.append(record)
    report = ImpactReport(
        label=cs.label,
        per_op=tuple(records),
        before_fingerprint=before,
        after_fingerprint=model.corpus_fingerprint(current),
    )
    return current, report


def reuse_hints(report: ImpactReport, corpus: Corpus) -> list[ReuseHint]:
    """Component reuse candidates surfaced by 1b promotions.

    ``corpus`` is the pre-change corpus the report lineage started from; it
    supplies component ownership for the merged counterparts.
    """
    rmap = corpus.requirement_map()
    hints: list[ReuseHint] = []
    for record in report.per_op:
        if record.case_code != CASE_SPEC_TO_GENERAL:
            continue
        promoter = rmap[record.target].jurisdiction if record.target in rmap else "?"
        for rid in record.counterparts:
            for comp in _components_implementing(corpus, rid):
                hints.append(ReuseHint(
                    component_id=comp.id,
                    owner_jurisdiction=rmap[rid].jurisdiction,
                    for_jurisdiction=promoter,
                    via_requirement=rid,
                ))
    hints.sort(key=lambda h: (h.component_id, h.via_requirement))
    return hints
