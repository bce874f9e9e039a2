"""Refinement closure, contradiction derivation, semantic identity, conflicts."""

from __future__ import annotations

from dataclasses import dataclass

from reqlattice.errors import CycleError, RoleMismatchError, UnknownIdError
from reqlattice.model import Corpus, RelationSet, Requirement, SourceItem


def refinement_closure(
    relations: RelationSet, ids: set[str] | frozenset[str]
) -> frozenset[tuple[str, str]]:
    """Transitive closure of ``refines`` restricted to ``ids``.

    Raises CycleError (with one witness cycle) if any element would end up
    refining itself.
    """
    edges: dict[str, set[str]] = {i: set() for i in ids}
    for a, b in relations.refines:
        if a in edges and b in edges:
            edges[a].add(b)

    # DFS cycle check with an explicit witness
    WHITE, GREY, BLACK = 0, 1, 2
    color = {i: WHITE for i in ids}
    stack: list[str] = []

    def visit(node: str) -> None:
        color[node] = GREY
        stack.append(node)
        for nxt in sorted(edges[node]):
            if color[nxt] == GREY:
                raise CycleError(stack[stack.index(nxt):])
            if color[nxt] == WHITE:
                visit(nxt)
        stack.pop()
        color[node] = BLACK

    for start in sorted(ids):
        if color[start] == WHITE:
            visit(start)

    closure: set[tuple[str, str]] = set()
    for start in ids:
        reachable: set[str] = set()
        frontier = list(edges[start])
        while frontier:
            node = frontier.pop()
            if node in reachable:
                continue
            reachable.add(node)
            frontier.extend(edges[node])
        closure.update((start, node) for node in reachable)
    return frozenset(closure)


def derive_contradictions(relations: RelationSet) -> frozenset[frozenset[str]]:
    """Contradiction pairs closed under refinement strengthening.

    If contr(x, y) holds and x' refines x, then contr(x', y): the stronger
    statement inherits every incompatibility of the weaker one it subsumes.
    Degenerate self-pairs (an element refining both sides) are dropped; the
    relation stays irreflexive.
    """
    ids = {i for pair in relations.refines for i in pair}
    ids |= {i for pair in relations.contradicts for i in pair}
    closure = refinement_closure(relations, ids)

    refiners: dict[str, set[str]] = {}
    for strong, weak in closure:
        refiners.setdefault(weak, set()).add(strong)

    derived: set[frozenset[str]] = set()
    for x, y in relations.contradicts:
        for a in {x} | refiners.get(x, set()):
            for b in {y} | refiners.get(y, set()):
                if a != b:
                    derived.add(frozenset((a, b)))
    return frozenset(derived)


def semantically_identical(
    a: Requirement | SourceItem, b: Requirement | SourceItem
) -> bool:
    """Same cross-jurisdiction concept and same content fingerprint.

    Jurisdiction is deliberately ignored: identity is what makes an item a
    candidate for the general set.
    """
    if a.role != b.role or a.kind != b.kind:
        raise RoleMismatchError(
            f"cannot compare {a.role}/{getattr(a.kind, 'value', a.kind)} "
            f"with {b.role}/{getattr(b.kind, 'value', b.kind)}"
        )
    return a.concept_key == b.concept_key and a.content_hash == b.content_hash


@dataclass(frozen=True)
class ConflictRecord:
    pair: tuple[str, str]  # sorted endpoints
    origin: str  # "explicit" | "derived"


def find_conflicts(corpus: Corpus, scope: set[str] | frozenset[str]) -> list[ConflictRecord]:
    """Every derived contradiction with both endpoints in ``scope``, sorted."""
    known = corpus.requirement_map()
    for rid in sorted(scope):
        if rid not in known:
            raise UnknownIdError(rid)
    explicit = {frozenset(p) for p in corpus.relations.contradicts}
    out = []
    for pair in derive_contradictions(corpus.relations):
        a, b = sorted(pair)
        if a in scope and b in scope:
            out.append(ConflictRecord((a, b), "explicit" if pair in explicit else "derived"))
    out.sort(key=lambda c: c.pair)
    return out
