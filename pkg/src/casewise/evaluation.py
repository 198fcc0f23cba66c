"""Retrieval-as-classifier benchmarking: majority vote plus k-fold CV.

The classifier predicts the solution label of a query by majority vote over
the solution values of its k most similar cases. Cross-validation shuffles
the case base with a seeded RNG, splits it into near-equal folds (remainder
spread over the leading folds), holds each fold out once and classifies it
against the remaining cases. Everything is reproducible for a fixed seed.
"""

from __future__ import annotations

import random
import statistics
from dataclasses import dataclass
from typing import Mapping

from .errors import NoPredictionError, SchemaViolationError, ValidationError
from .model import AttributeRole, Case, SimilarityModel
from .retrieval import CaseBase, retrieve

DEFAULT_NEIGHBORS = 5


@dataclass(frozen=True)
class FoldResult:
    index: int
    test_size: int
    correct: int

    @property
    def accuracy(self) -> float:
        return self.correct / self.test_size


@dataclass(frozen=True)
class ConfusionCounts:
    true_positive: int
    false_positive: int
    false_negative: int
    true_negative: int


@dataclass(frozen=True)
class EvaluationReport:
    folds: int
    k: int
    seed: int
    model_version: int
    fold_results: tuple[FoldResult, ...]
    confusion: Mapping[str, ConfusionCounts]

    @property
    def fold_accuracies(self) -> tuple[float, ...]:
        return tuple(fold.accuracy for fold in self.fold_results)

    @property
    def mean_accuracy(self) -> float:
        return statistics.fmean(self.fold_accuracies)

    @property
    def stddev_accuracy(self) -> float:
        return statistics.pstdev(self.fold_accuracies)


def _solution_attribute(model: SimilarityModel) -> str:
    names = [d.name for d in model.schema if d.role is AttributeRole.SOLUTION]
    if len(names) != 1:
        raise ValidationError(
            f"classification needs exactly one solution attribute, model has {len(names)}"
        )
    return names[0]


def classify(model: SimilarityModel, base: CaseBase, query: Case, k: int = DEFAULT_NEIGHBORS) -> str:
    """Majority label among the k nearest cases.

    A tie between labels is broken in favor of the tied label whose
    representative ranks highest in the retrieval (for two labels that is
    exactly the label of the single most similar case).
    """
    if len(base) == 0:
        raise NoPredictionError("cannot classify against an empty case base")
    solution = _solution_attribute(model)
    result = retrieve(model, base, query, k)

    labels: list[str] = []
    for entry in result.entries:
        value = base.case(entry.case_id).values.get(solution)
        if value is None:
            raise SchemaViolationError(
                f"case {entry.case_id!r} has no value for solution attribute {solution!r}"
            )
        labels.append(str(value))

    counts: dict[str, int] = {}
    for label in labels:
        counts[label] = counts.get(label, 0) + 1
    best = max(counts.values())
    for label in labels:  # ranked order: first tied label wins
        if counts[label] == best:
            return label
    raise AssertionError("unreachable: retrieval returned entries but no label won")


def cross_validate(
    model: SimilarityModel,
    base: CaseBase,
    k: int = DEFAULT_NEIGHBORS,
    folds: int = 10,
    seed: int = 0,
) -> EvaluationReport:
    """Seeded k-fold cross-validation of the retrieval classifier."""
    if folds < 2:
        raise ValidationError(f"folds must be >= 2, got {folds}")
    if len(base) < folds:
        raise ValidationError(
            f"case base has {len(base)} cases, fewer than {folds} folds"
        )
    solution = _solution_attribute(model)

    order = list(range(len(base)))
    random.Random(seed).shuffle(order)
    fold_slices = _partition(order, folds)

    labels = sorted({str(c.values[solution]) for c in base.cases if c.values.get(solution) is not None})
    per_label = {label: {"tp": 0, "fp": 0, "fn": 0, "tn": 0} for label in labels}

    fold_results: list[FoldResult] = []
    for fold_index, test_indices in enumerate(fold_slices):
        test_set = set(test_indices)
        train_cases = tuple(c for i, c in enumerate(base.cases) if i not in test_set)
        train_base = CaseBase(name=base.name, schema=base.schema, cases=train_cases)

        correct = 0
        for i in test_indices:
            case = base.cases[i]
            actual = case.values.get(solution)
            if actual is None:
                raise SchemaViolationError(
                    f"case {case.id!r} has no value for solution attribute {solution!r}"
                )
            actual = str(actual)
            predicted = classify(model, train_base, case, k)
            if predicted == actual:
                correct += 1
            for label in labels:
                hit_actual = actual == label
                hit_predicted = predicted == label
                if hit_predicted and hit_actual:
                    per_label[label]["tp"] += 1
                elif hit_predicted:
                    per_label[label]["fp"] += 1
                elif hit_actual:
                    per_label[label]["fn"] += 1
                else:
                    per_label[label]["tn"] += 1
        fold_results.append(
            FoldResult(index=fold_index, test_size=len(test_indices), correct=correct)
        )

    confusion = {
        label: ConfusionCounts(
            true_positive=c["tp"],
            false_positive=c["fp"],
            false_negative=c["fn"],
            true_negative=c["tn"],
        )
        for label, c in per_label.items()
    }
    return EvaluationReport(
        folds=folds,
        k=k,
        seed=seed,
        model_version=model.version,
        fold_results=tuple(fold_results),
        confusion=confusion,
    )


def _partition(order: list[int], folds: int) -> list[list[int]]:
    """Near-equal contiguous slices; the remainder goes to the leading folds."""
    size, remainder = divmod(len(order), folds)
    slices = []
    start = 0
    for fold_index in range(folds):
        length = size + (1 if fold_index < remainder else 0)
        slices.append(order[start : start + length])
        start += length
    return slices
