"""Ranked retrieval over a case base plus per-attribute score decomposition.

Retrieval is an exhaustive linear scan: every case is scored with the global
similarity, the list is sorted by descending score (ties broken by ascending
case id so results are deterministic), truncated to k, and the surviving
entries get their explanation rows. Explanations are only materialized for
returned entries; k is small, scoring everything with a full decomposition
would waste memory.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SchemaViolationError, ValidationError
from .model import (
    AttributeDescriptor,
    Case,
    LocalSimilarityMeasure,
    SimilarityModel,
    check_conforms,
    local_similarity,
)


@dataclass(frozen=True)
class CaseBase:
    """Named, immutable collection of cases sharing one schema."""

    name: str
    schema: tuple[AttributeDescriptor, ...]
    cases: tuple[Case, ...]

    def __len__(self) -> int:
        return len(self.cases)

    def case(self, case_id: str) -> Case:
        for c in self.cases:
            if c.id == case_id:
                return c
        raise SchemaViolationError(f"no case with id {case_id!r} in case base {self.name!r}")


@dataclass(frozen=True)
class ExplanationRow:
    """Decomposition of one attribute's part in a global score.

    ``contribution = weight_normalized * local_sim``; for missing-resolution
    rows (either value absent) the three derived fields are ``None`` and the
    row is excluded from every sum.
    """

    attribute: str
    local_sim: float | None
    weight_raw: float
    weight_normalized: float | None
    contribution: float | None
    missing: bool


@dataclass(frozen=True)
class Explanation:
    """Per-attribute rows behind one query/case comparison."""

    rows: tuple[ExplanationRow, ...]

    @property
    def no_overlap(self) -> bool:
        """True when not a single attribute was resolvable."""
        return all(row.missing for row in self.rows)

    @property
    def score(self) -> float:
        """Sum of contributions over resolvable rows (the decomposed score)."""
        return sum(row.contribution for row in self.rows if row.contribution is not None)


@dataclass(frozen=True)
class RetrievalEntry:
    case_id: str
    score: float
    explanation: Explanation


@dataclass(frozen=True)
class RetrievalResult:
    query: Case
    model_version: int
    k: int
    entries: tuple[RetrievalEntry, ...]


def _scoring_plan(
    model: SimilarityModel,
) -> list[tuple[AttributeDescriptor, LocalSimilarityMeasure, float]]:
    """Resolve descriptor/measure/weight triples once per retrieval."""
    plan = []
    for descriptor in model.problem_attributes:
        plan.append(
            (
                descriptor,
                model.measure_for(descriptor.name),
                model.amalgamation.weights.get(descriptor.name, 0.0),
            )
        )
    return plan


def check_compatible(model: SimilarityModel, base: CaseBase) -> None:
    """Model and case base must agree on attribute names, kinds and roles.

    Ranges and symbol sets may differ: the model's descriptors govern the
    similarity computation, the case base keeps its load-time snapshot.
    """
    model_sig = [(d.name, d.kind, d.role) for d in model.schema]
    base_sig = [(d.name, d.kind, d.role) for d in base.schema]
    if model_sig != base_sig:
        raise ValidationError(
            f"case base {base.name!r} does not match the model schema "
            f"(model: {[s[0] for s in model_sig]}, case base: {[s[0] for s in base_sig]})"
        )


def retrieve(model: SimilarityModel, base: CaseBase, query: Case, k: int) -> RetrievalResult:
    """Score every case, return the top k with explanations attached.

    Deterministic for fixed inputs: the sort key is (-score, case id). An
    empty case base yields an empty result, not an error.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    check_compatible(model, base)
    check_conforms(model.schema, query.values, partial=True)

    plan = _scoring_plan(model)
    scored: list[tuple[float, str, Case]] = []
    for case in base.cases:
        scored.append((_score(plan, query, case), case.id, case))
    scored.sort(key=lambda item: (-item[0], item[1]))

    entries = tuple(
        RetrievalEntry(
            case_id=case_id,
            score=score,
            explanation=_explain(plan, query, case),
        )
        for score, case_id, case in scored[:k]
    )
    return RetrievalResult(query=query, model_version=model.version, k=k, entries=entries)


def explain(model: SimilarityModel, query: Case, case: Case) -> Explanation:
    """Decompose the comparison of ``query`` and ``case`` into attribute rows."""
    check_conforms(model.schema, query.values, partial=True)
    check_conforms(model.schema, case.values, partial=True)
    return _explain(_scoring_plan(model), query, case)


def _score(plan, query: Case, case: Case) -> float:
    numerator = 0.0
    denominator = 0.0
    for descriptor, measure, weight in plan:
        sim = local_similarity(measure, descriptor, query.get(descriptor.name), case.get(descriptor.name))
        if sim is None:
            continue
        numerator += weight * sim
        denominator += weight
    if denominator <= 0.0:
        return 0.0
    return numerator / denominator


def _explain(plan, query: Case, case: Case) -> Explanation:
    sims: list[float | None] = []
    weight_total = 0.0
    for descriptor, measure, weight in plan:
        sim = local_similarity(measure, descriptor, query.get(descriptor.name), case.get(descriptor.name))
        sims.append(sim)
        if sim is not None:
            weight_total += weight

    rows = []
    for (descriptor, _measure, weight), sim in zip(plan, sims):
        if sim is None or weight_total <= 0.0:
            # weight_total == 0 with resolved sims means every carried weight
            # was zero; the score is 0 by convention and no row contributes.
            rows.append(
                ExplanationRow(
                    attribute=descriptor.name,
                    local_sim=sim,
                    weight_raw=weight,
                    weight_normalized=None,
                    contribution=None,
                    missing=sim is None,
                )
            )
        else:
            normalized = weight / weight_total
            rows.append(
                ExplanationRow(
                    attribute=descriptor.name,
                    local_sim=sim,
                    weight_raw=weight,
                    weight_normalized=normalized,
                    contribution=normalized * sim,
                    missing=False,
                )
            )
    return Explanation(rows=tuple(rows))
