"""Closeness-to-ideal ranking of candidate conflict resolutions.

Classical variant: vector normalization per criterion, weighted columns,
ideal/anti-ideal points from column extremes, Euclidean distances, closeness
``d- / (d+ + d-)``. Criteria whose column cannot discriminate (zero variance)
are dropped with a warning before ranking.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from reqlattice.corpus_io import AlternativesFile
from reqlattice.errors import DegenerateMatrixError, UnknownRequirementError
from reqlattice.model import Corpus
from reqlattice.optimize import conflict_requirement_ids, global_view


@dataclass(frozen=True)
class Criterion:
    id: str
    weight: float
    direction: str  # "benefit" | "cost"


@dataclass(frozen=True)
class DecisionMatrix:
    alternatives: tuple[str, ...]
    criteria: tuple[Criterion, ...]
    values: np.ndarray  # rows = alternatives, columns = criteria
    raw_weights: tuple[float, ...]  # as supplied, before normalization

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.alternatives), len(self.criteria)):
            raise ValueError("matrix shape does not match alternative/criterion counts")
        if not np.all(np.isfinite(values)):
            raise ValueError("matrix values must be finite")
        object.__setattr__(self, "values", values)


def make_matrix(
    alternatives: list[str],
    criteria: list[tuple[str, float, str]],
    values,
) -> DecisionMatrix:
    """Build a matrix, normalizing weights to sum to 1."""
    raw = [w for _, w, _ in criteria]
    if any(w < 0 for w in raw):
        raise ValueError("criterion weights must be nonnegative")
    total = sum(raw)
    if total <= 0:
        raise ValueError("criterion weights must not all be zero")
    crits = tuple(
        Criterion(cid, w / total, direction) for (cid, w, direction) in criteria
    )
    for c in crits:
        if c.direction not in ("benefit", "cost"):
            raise ValueError(f"criterion {c.id!r} direction must be benefit or cost")
    return DecisionMatrix(
        alternatives=tuple(alternatives),
        criteria=crits,
        values=np.asarray(values, dtype=float),
        raw_weights=tuple(raw),
    )


@dataclass(frozen=True)
class Ranking:
    entries: tuple[tuple[str, float], ...]  # (alternative id, closeness), best first
    dropped_criteria: tuple[str, ...]


def rank_alternatives(m: DecisionMatrix) -> Ranking:
    if len(m.alternatives) == 0 or len(m.criteria) == 0:
        raise DegenerateMatrixError("matrix has no alternatives or no criteria")
    if len(m.alternatives) == 1:
        # a single candidate is trivially the closest to the ideal
        return Ranking(entries=((m.alternatives[0], 1.0),), dropped_criteria=())

    values = m.values
    keep = [j for j in range(values.shape[1]) if np.ptp(values[:, j]) > 0.0]
    dropped = tuple(m.criteria[j].id for j in range(values.shape[1]) if j not in keep)
    if not keep:
        raise DegenerateMatrixError("every criterion column is constant; nothing discriminates")
    if dropped:
        warnings.warn(
            f"dropping zero-variance criteria: {', '.join(dropped)}",
            stacklevel=2,
        )

    values = values[:, keep]
    weights = np.array([m.criteria[j].weight for j in keep])
    weights = weights / weights.sum()
    benefit = np.array([m.criteria[j].direction == "benefit" for j in keep])

    norms = np.linalg.norm(values, axis=0)
    norms[norms == 0.0] = 1.0  # all-zero column is constant and already dropped
    weighted = values / norms * weights

    ideal = np.where(benefit, weighted.max(axis=0), weighted.min(axis=0))
    anti = np.where(benefit, weighted.min(axis=0), weighted.max(axis=0))
    d_plus = np.linalg.norm(weighted - ideal, axis=1)
    d_minus = np.linalg.norm(weighted - anti, axis=1)
    closeness = d_minus / (d_plus + d_minus)

    order = sorted(range(len(m.alternatives)), key=lambda i: (-closeness[i], m.alternatives[i]))
    entries = tuple((m.alternatives[i], float(closeness[i])) for i in order)
    return Ranking(entries=entries, dropped_criteria=dropped)


def build_conflict_matrix(corpus: Corpus, alts: AlternativesFile) -> DecisionMatrix:
    """Decision matrix over the corpus's conflicting requirements.

    Criteria are the requirements in the global conflict set (benefit
    direction; equal weights unless the alternatives file overrides them);
    values are each alternative's satisfaction scores, defaulting to 0.
    """
    conflict_ids = conflict_requirement_ids(global_view(corpus))
    conflict_set = set(conflict_ids)
    for alt in alts.alternatives:
        for rid in alt.satisfies:
            if rid not in conflict_set:
                raise UnknownRequirementError(rid)
    for rid in alts.weights:
        if rid not in conflict_set:
            raise UnknownRequirementError(rid)

    criteria = [(rid, alts.weights.get(rid, 1.0), "benefit") for rid in conflict_ids]
    if not criteria:
        # surfaced at rank time per the DegenerateMatrixError contract
        return DecisionMatrix(
            alternatives=tuple(a.id for a in alts.alternatives),
            criteria=(),
            values=np.zeros((len(alts.alternatives), 0)),
            raw_weights=(),
        )
    values = [
        [alt.satisfies.get(rid, 0.0) for rid in conflict_ids]
        for alt in alts.alternatives
    ]
    return make_matrix([a.id for a in alts.alternatives], criteria, values)
