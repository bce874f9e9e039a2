"""Independent brute-force oracles and random input generators.

Everything here deliberately avoids the package's own algorithms: closures by
path enumeration, contradiction derivation by naive fixpoint iteration,
maximality by exhaustive pairwise comparison, partitions by a literal
per-concept check.
"""

from __future__ import annotations

import random
import string

from reqlattice import model
from reqlattice.model import (
    Corpus,
    Jurisdiction,
    Level,
    RelationSet,
    Requirement,
    RequirementKind,
    SourceItem,
    SourceKind,
)


def path_enumeration_closure(edges: set[tuple[str, str]], ids: set[str]) -> set[tuple[str, str]]:
    """Reachability by enumerating every simple path (exponential, tiny inputs)."""
    adjacency = {i: sorted(b for a, b in edges if a == i and b in ids) for i in ids}
    pairs: set[tuple[str, str]] = set()

    def walk(start: str, node: str, seen: frozenset[str]) -> None:
        for nxt in adjacency[node]:
            if nxt in seen:
                continue
            pairs.add((start, nxt))
            walk(start, nxt, seen | {nxt})

    for start in ids:
        walk(start, start, frozenset({start}))
    return pairs


def fixpoint_contradictions(
    refines: set[tuple[str, str]], contradicts: set[tuple[str, str]]
) -> set[frozenset[str]]:
    """Iterate the single-step strengthening rule to a fixed point."""
    current = {frozenset(p) for p in contradicts if len(frozenset(p)) == 2}
    while True:
        added = set()
        for pair in current:
            x, y = tuple(pair)
            for strong, weak in refines:
                if weak == x and strong != y:
                    added.add(frozenset((strong, y)))
                if weak == y and strong != x:
                    added.add(frozenset((strong, x)))
        if added <= current:
            return current
        current |= added


def brute_force_maximal(ids: set[str], closure: set[tuple[str, str]]) -> set[str]:
    """Elements no other element refines, by exhaustive pairwise comparison."""
    return {e for e in ids if not any((other, e) in closure for other in ids if other != e)}


def brute_force_minimal(ids: set[str], closure: set[tuple[str, str]]) -> set[str]:
    return {e for e in ids if not any((e, other) in closure for other in ids if other != e)}


def per_concept_partition(view: dict[str, list]) -> tuple[set[str], dict[str, set[str]]]:
    """Literal per-concept generality check: present everywhere, one hash."""
    concepts = {item.concept_key for items in view.values() for item in items}
    general: set[str] = set()
    specific: dict[str, set[str]] = {jid: set() for jid in view}
    for key in concepts:
        buckets = {jid: [i for i in items if i.concept_key == key] for jid, items in view.items()}
        hashes = {i.content_hash for items in buckets.values() for i in items}
        is_general = all(buckets[jid] for jid in view) and len(hashes) == 1
        for jid, items in buckets.items():
            for item in items:
                (general if is_general else specific[jid]).add(item.id)
    return general, specific


# ---------------------------------------------------------------------------
# random generators

def random_dag(rng: random.Random, n_nodes: int, edge_prob: float = 0.3):
    """Edges only from lower to higher label, hence acyclic."""
    ids = [f"n{i:02d}" for i in range(n_nodes)]
    edges = {
        (ids[i], ids[j])
        for i in range(n_nodes) for j in range(i + 1, n_nodes)
        if rng.random() < edge_prob
    }
    return set(ids), edges


def random_corpus(
    rng: random.Random,
    max_jurisdictions: int = 5,
    max_concepts: int = 30,
    hash_alphabet: int = 3,
    with_relations: bool = False,
) -> Corpus:
    """Corpus with randomized concept presence and content collisions.

    A small hash alphabet makes cross-jurisdiction identity (and hence
    general-set membership) common enough to exercise both partition sides.
    """
    n_jur = rng.randint(1, max_jurisdictions)
    jurisdictions = tuple(
        Jurisdiction(id=f"j{i}", name=f"Jurisdiction {i}", level=Level.NATIONAL)
        for i in range(n_jur)
    )
    n_concepts = rng.randint(1, max_concepts)
    concepts = [f"c{k:02d}" for k in range(n_concepts)]

    sources: list[SourceItem] = []
    requirements: list[Requirement] = []
    for key in concepts:
        # role/kind fixed per concept so cross-jurisdiction identity can occur
        as_source = rng.random() < 0.45
        skind = SourceKind.LEGAL if rng.random() < 0.5 else SourceKind.CULTURAL
        rkind = rng.choice(list(RequirementKind))
        for j in jurisdictions:
            if rng.random() < 0.3:
                continue  # concept absent here
            text = f"{key} variant {rng.randrange(hash_alphabet)}"
            if as_source:
                sources.append(SourceItem(
                    id=f"src-{j.id}-{key}", kind=skind, jurisdiction=j.id,
                    concept_key=key, text=text,
                    content_hash=model.content_hash(text),
                    is_static=skind is SourceKind.CULTURAL,
                ))
            else:
                requirements.append(Requirement(
                    id=f"req-{j.id}-{key}", kind=rkind, jurisdiction=j.id,
                    concept_key=key, text=text,
                    content_hash=model.content_hash(text),
                ))

    refines: set[tuple[str, str]] = set()
    contradicts: set[tuple[str, str]] = set()
    if with_relations and len(requirements) >= 2:
        by_kind: dict[RequirementKind, list[Requirement]] = {}
        for r in requirements:
            by_kind.setdefault(r.kind, []).append(r)
        for group in by_kind.values():
            group.sort(key=lambda r: r.id)
            for i in range(len(group)):
                for j in range(i + 1, len(group)):
                    roll = rng.random()
                    if roll < 0.05:
                        refines.add((group[i].id, group[j].id))
                    elif roll < 0.08:
                        contradicts.add((group[i].id, group[j].id))

    corpus = Corpus(
        jurisdictions=jurisdictions,
        sources=tuple(sources),
        requirements=tuple(requirements),
        relations=RelationSet(refines=frozenset(refines), contradicts=frozenset(contradicts)),
    )
    model.validate_corpus(corpus)
    return corpus


def random_label(rng: random.Random, length: int = 6) -> str:
    return "".join(rng.choice(string.ascii_lowercase) for _ in range(length))
