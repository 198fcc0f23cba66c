"""Similarity model: attribute schema, local measures, global amalgamation.

The model follows the local-global principle: each problem attribute gets a
local similarity measure mapping a value pair to [0, 1], and an amalgamation
function (weighted sum, normalized by the weight total) combines the local
scores into one global score.

All model objects are immutable; edits go through the ``with_*`` helpers on
:class:`SimilarityModel`, which return a new snapshot with the version bumped.
Constructors deliberately accept invalid parameters (negative degrees,
out-of-range table entries, ...): :func:`validate_model` is the single
authority that turns broken invariants into :class:`Violation` records, so a
corrupted model file can be loaded, inspected and reported instead of blowing
up halfway through parsing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Mapping, Union

from .errors import ModelValidationError, SchemaViolationError, Violation

#: Values a case may hold: numeric, symbolic, or missing.
Value = Union[float, str, None]


class AttributeKind(str, Enum):
    NUMERIC = "numeric"
    SYMBOLIC = "symbolic"


class AttributeRole(str, Enum):
    PROBLEM = "problem"
    SOLUTION = "solution"


class AmalgamationMode(str, Enum):
    """Combination modes; only the weighted sum is implemented."""

    WEIGHTED_SUM = "weighted_sum"


@dataclass(frozen=True)
class AttributeDescriptor:
    """Schema entry for one case attribute.

    Numeric attributes carry a modeled value range, symbolic ones an ordered
    symbol set. Solution attributes never take part in similarity scoring.
    """

    name: str
    kind: AttributeKind
    role: AttributeRole = AttributeRole.PROBLEM
    minimum: float | None = None
    maximum: float | None = None
    symbols: tuple[str, ...] | None = None

    @property
    def span(self) -> float | None:
        if self.minimum is None or self.maximum is None:
            return None
        return self.maximum - self.minimum


@dataclass(frozen=True)
class PolynomialMeasure:
    """sim(q, c) = (1 - d)^degree with d = min(1, |q - c| / range).

    Distance is normalized by the descriptor range and clamped at 1, so
    values outside the modeled range degrade gracefully to similarity 0
    instead of erroring. degree = 1 is the linear special case; degree > 1
    bends the curve convex (fast drop), degree < 1 concave (tolerant).
    """

    attribute: str
    degree: float = 2.0


@dataclass(frozen=True)
class StepMeasure:
    """sim(q, c) = 1 if |q - c| <= threshold else 0 (threshold in raw units)."""

    attribute: str
    threshold: float = 0.0


@dataclass(frozen=True)
class TableMeasure:
    """Symbol-pair lookup table; entries[i][j] = sim(symbols[i], symbols[j]).

    The diagonal must be 1.0 and every entry must lie in [0, 1]. The table
    need not be symmetric: query symbol selects the row, case symbol the
    column.
    """

    attribute: str
    symbols: tuple[str, ...]
    entries: tuple[tuple[float, ...], ...]

    def lookup(self, q: str, c: str) -> float:
        for symbol in (q, c):
            if symbol not in self.symbols:
                message = (
                    f"symbol {symbol!r} not in similarity table for attribute {self.attribute!r}"
                )
                raise SchemaViolationError(
                    message,
                    [Violation(rule="unknown-symbol", attribute=self.attribute, message=message)],
                )
        return self.entries[self.symbols.index(q)][self.symbols.index(c)]


LocalSimilarityMeasure = Union[PolynomialMeasure, StepMeasure, TableMeasure]

#: Measure variants applicable to numeric attributes.
_NUMERIC_MEASURES = (PolynomialMeasure, StepMeasure)


@dataclass(frozen=True)
class AmalgamationFunction:
    """Per-attribute raw weights plus the combination mode.

    Weights are stored exactly as entered and normalized at evaluation time,
    so the engineer's values survive for display.
    """

    weights: Mapping[str, float]
    mode: AmalgamationMode = AmalgamationMode.WEIGHTED_SUM


@dataclass(frozen=True)
class Case:
    """One attribute-value record; ``None`` marks a missing value."""

    id: str
    values: Mapping[str, Value]

    def get(self, attribute: str) -> Value:
        return self.values.get(attribute)


@dataclass(frozen=True)
class SimilarityModel:
    """Versioned snapshot of schema, local measures and amalgamation."""

    schema: tuple[AttributeDescriptor, ...]
    measures: tuple[LocalSimilarityMeasure, ...]
    amalgamation: AmalgamationFunction
    version: int = 0

    @staticmethod
    def empty() -> "SimilarityModel":
        return SimilarityModel(
            schema=(),
            measures=(),
            amalgamation=AmalgamationFunction(weights={}),
            version=0,
        )

    @property
    def problem_attributes(self) -> tuple[AttributeDescriptor, ...]:
        return tuple(d for d in self.schema if d.role is AttributeRole.PROBLEM)

    @property
    def solution_attributes(self) -> tuple[AttributeDescriptor, ...]:
        return tuple(d for d in self.schema if d.role is AttributeRole.SOLUTION)

    def descriptor(self, name: str) -> AttributeDescriptor:
        for d in self.schema:
            if d.name == name:
                return d
        raise SchemaViolationError(f"unknown attribute {name!r}")

    def measure_for(self, name: str) -> LocalSimilarityMeasure:
        for m in self.measures:
            if m.attribute == name:
                return m
        raise ModelValidationError(f"no local similarity measure for attribute {name!r}")

    # -- copy-on-write edits -------------------------------------------------

    def with_measure(self, measure: LocalSimilarityMeasure) -> "SimilarityModel":
        """Replace (or add) the measure for ``measure.attribute``; bumps version."""
        kept = tuple(m for m in self.measures if m.attribute != measure.attribute)
        ordered = _order_measures(self.schema, kept + (measure,))
        return replace(self, measures=ordered, version=self.version + 1)

    def with_weights(self, weights: Mapping[str, float]) -> "SimilarityModel":
        amalgamation = replace(self.amalgamation, weights=dict(weights))
        return replace(self, amalgamation=amalgamation, version=self.version + 1)

    def with_schema(
        self,
        schema: tuple[AttributeDescriptor, ...],
        measures: tuple[LocalSimilarityMeasure, ...],
        weights: Mapping[str, float],
    ) -> "SimilarityModel":
        """Wholesale replacement (e.g. after ingesting a new dataset)."""
        return SimilarityModel(
            schema=schema,
            measures=_order_measures(schema, measures),
            amalgamation=AmalgamationFunction(weights=dict(weights)),
            version=self.version + 1,
        )


def _order_measures(
    schema: tuple[AttributeDescriptor, ...],
    measures: tuple[LocalSimilarityMeasure, ...],
) -> tuple[LocalSimilarityMeasure, ...]:
    """Keep measures in schema declaration order for stable serialization."""
    by_name = {m.attribute: m for m in measures}
    ordered = [by_name.pop(d.name) for d in schema if d.name in by_name]
    ordered.extend(by_name.values())  # orphans kept so validation can flag them
    return tuple(ordered)


def local_similarity(
    measure: LocalSimilarityMeasure,
    descriptor: AttributeDescriptor,
    q: Value,
    c: Value,
) -> float | None:
    """Similarity of a query/case value pair under one local measure.

    Returns ``None`` when either value is missing; the resolution policy
    (dropping the attribute from both sides of the weighted sum) lives in the
    amalgamation, not here.
    """
    if isinstance(measure, _NUMERIC_MEASURES):
        if descriptor.kind is not AttributeKind.NUMERIC:
            raise ModelValidationError(
                f"numeric measure attached to {descriptor.kind.value} attribute {descriptor.name!r}"
            )
    elif isinstance(measure, TableMeasure):
        if descriptor.kind is not AttributeKind.SYMBOLIC:
            raise ModelValidationError(
                f"table measure attached to {descriptor.kind.value} attribute {descriptor.name!r}"
            )
    else:
        raise ModelValidationError(f"unknown measure variant {type(measure).__name__}")

    if q is None or c is None:
        return None

    if isinstance(measure, TableMeasure):
        if not isinstance(q, str) or not isinstance(c, str):
            raise SchemaViolationError(
                f"attribute {descriptor.name!r} is symbolic but got a non-symbol value"
            )
        return measure.lookup(q, c)

    if isinstance(q, str) or isinstance(c, str):
        raise SchemaViolationError(
            f"attribute {descriptor.name!r} is numeric but got a non-numeric value"
        )

    distance = abs(float(q) - float(c))
    if isinstance(measure, StepMeasure):
        return 1.0 if distance <= measure.threshold else 0.0

    span = descriptor.span
    if span is None or span <= 0.0:
        # Degenerate modeled range: exact match or nothing.
        return 1.0 if distance == 0.0 else 0.0
    d = min(1.0, distance / span)
    return (1.0 - d) ** measure.degree


def global_similarity(model: SimilarityModel, query: Case, case: Case) -> float:
    """Weight-normalized weighted sum of the resolvable local similarities.

    Attributes whose local similarity is missing (either value absent) drop
    out of numerator and denominator alike, keeping scores comparable across
    queries of different completeness. Returns 0.0 when nothing overlaps;
    :func:`casewise.retrieval.explain` exposes that situation explicitly.
    """
    check_conforms(model.schema, query.values, partial=True)
    numerator = 0.0
    denominator = 0.0
    for descriptor in model.problem_attributes:
        weight = model.amalgamation.weights.get(descriptor.name, 0.0)
        sim = local_similarity(
            model.measure_for(descriptor.name),
            descriptor,
            query.get(descriptor.name),
            case.get(descriptor.name),
        )
        if sim is None:
            continue
        numerator += weight * sim
        denominator += weight
    if denominator <= 0.0:
        return 0.0
    return numerator / denominator


def check_conforms(
    schema: tuple[AttributeDescriptor, ...],
    values: Mapping[str, Value],
    partial: bool = False,
) -> None:
    """Raise :class:`SchemaViolationError` unless ``values`` fits ``schema``.

    ``partial`` permits absent keys (queries); cases must carry every schema
    attribute as a key. Numeric values may lie outside the modeled range
    (distance clamping handles that), but symbolic values must belong to the
    descriptor's symbol set. The raised error carries one violation per
    offending attribute so callers can point at the exact fields.
    """
    violations: list[Violation] = []
    known = {d.name: d for d in schema}
    for name in values:
        if name not in known:
            violations.append(
                Violation(
                    rule="unknown-attribute",
                    attribute=name,
                    message=f"unknown attribute {name!r}",
                )
            )
    for descriptor in schema:
        if descriptor.name not in values:
            if not partial:
                violations.append(
                    Violation(
                        rule="missing-attribute",
                        attribute=descriptor.name,
                        message=f"attribute {descriptor.name!r} absent from record",
                    )
                )
            continue
        value = values[descriptor.name]
        if value is None:
            continue
        if descriptor.kind is AttributeKind.NUMERIC:
            if isinstance(value, str) or not isinstance(value, (int, float)):
                violations.append(
                    Violation(
                        rule="type-mismatch",
                        attribute=descriptor.name,
                        message=f"attribute {descriptor.name!r} is numeric but got {value!r}",
                    )
                )
        else:
            if not isinstance(value, str):
                violations.append(
                    Violation(
                        rule="type-mismatch",
                        attribute=descriptor.name,
                        message=f"attribute {descriptor.name!r} is symbolic but got {value!r}",
                    )
                )
            elif descriptor.symbols is not None and value not in descriptor.symbols:
                violations.append(
                    Violation(
                        rule="unknown-symbol",
                        attribute=descriptor.name,
                        message=(
                            f"value {value!r} not in symbol set of attribute {descriptor.name!r}"
                        ),
                    )
                )
    if violations:
        raise SchemaViolationError(violations[0].message, violations)


def validate_model(model: SimilarityModel) -> list[Violation]:
    """Collect every broken invariant; an empty list means the model is sound.

    Violations are data, not errors: loading a broken model file succeeds and
    this function tells the caller exactly what is wrong with it.
    """
    violations: list[Violation] = []

    seen: set[str] = set()
    for descriptor in model.schema:
        if descriptor.name in seen:
            violations.append(
                Violation(
                    rule="duplicate-attribute",
                    attribute=descriptor.name,
                    message=f"attribute name {descriptor.name!r} declared more than once",
                )
            )
        seen.add(descriptor.name)
        if descriptor.kind is AttributeKind.NUMERIC:
            if descriptor.minimum is None or descriptor.maximum is None:
                violations.append(
                    Violation(
                        rule="missing-range",
                        attribute=descriptor.name,
                        message=f"numeric attribute {descriptor.name!r} has no value range",
                    )
                )
            elif not (
                math.isfinite(descriptor.minimum)
                and math.isfinite(descriptor.maximum)
                and descriptor.minimum <= descriptor.maximum
            ):
                violations.append(
                    Violation(
                        rule="invalid-range",
                        attribute=descriptor.name,
                        message=(
                            f"numeric attribute {descriptor.name!r} has invalid range "
                            f"[{descriptor.minimum}, {descriptor.maximum}]"
                        ),
                    )
                )
        else:
            if not descriptor.symbols:
                violations.append(
                    Violation(
                        rule="empty-symbols",
                        attribute=descriptor.name,
                        message=f"symbolic attribute {descriptor.name!r} has no symbols",
                    )
                )
            elif len(set(descriptor.symbols)) != len(descriptor.symbols):
                violations.append(
                    Violation(
                        rule="duplicate-symbols",
                        attribute=descriptor.name,
                        message=f"symbolic attribute {descriptor.name!r} repeats a symbol",
                    )
                )

    descriptors = {d.name: d for d in model.schema}
    problem_names = [d.name for d in model.problem_attributes]

    measured: set[str] = set()
    for measure in model.measures:
        name = measure.attribute
        if name in measured:
            violations.append(
                Violation(
                    rule="duplicate-measure",
                    attribute=name,
                    message=f"attribute {name!r} has more than one measure",
                )
            )
        measured.add(name)
        descriptor = descriptors.get(name)
        if descriptor is None or descriptor.role is AttributeRole.SOLUTION:
            violations.append(
                Violation(
                    rule="extra-measure",
                    attribute=name,
                    message=f"measure attached to non-problem attribute {name!r}",
                )
            )
            continue
        violations.extend(_validate_measure(measure, descriptor))

    for name in problem_names:
        if name not in measured:
            violations.append(
                Violation(
                    rule="missing-measure",
                    attribute=name,
                    message=f"problem attribute {name!r} has no local similarity measure",
                )
            )

    weights = model.amalgamation.weights
    for name in weights:
        if name not in problem_names:
            violations.append(
                Violation(
                    rule="extra-weight",
                    attribute=name,
                    message=f"weight attached to non-problem attribute {name!r}",
                )
            )
    for name in problem_names:
        if name not in weights:
            violations.append(
                Violation(
                    rule="missing-weight",
                    attribute=name,
                    message=f"problem attribute {name!r} has no amalgamation weight",
                )
            )
    for name, weight in weights.items():
        if not (isinstance(weight, (int, float)) and math.isfinite(weight) and weight >= 0.0):
            violations.append(
                Violation(
                    rule="negative-weight",
                    attribute=name,
                    message=f"weight for {name!r} must be a finite number >= 0, got {weight!r}",
                )
            )
    if problem_names and not any(
        isinstance(w, (int, float)) and math.isfinite(w) and w > 0.0 for w in weights.values()
    ):
        violations.append(
            Violation(
                rule="no-positive-weight",
                attribute=None,
                message="at least one amalgamation weight must be strictly positive",
            )
        )

    return violations


def _validate_measure(
    measure: LocalSimilarityMeasure, descriptor: AttributeDescriptor
) -> list[Violation]:
    name = descriptor.name
    violations: list[Violation] = []
    if isinstance(measure, _NUMERIC_MEASURES):
        if descriptor.kind is not AttributeKind.NUMERIC:
            return [
                Violation(
                    rule="measure-kind-mismatch",
                    attribute=name,
                    message=f"numeric measure on symbolic attribute {name!r}",
                )
            ]
        if isinstance(measure, PolynomialMeasure):
            if not (
                isinstance(measure.degree, (int, float))
                and math.isfinite(measure.degree)
                and measure.degree > 0.0
            ):
                violations.append(
                    Violation(
                        rule="invalid-degree",
                        attribute=name,
                        message=f"polynomial degree must be > 0, got {measure.degree!r}",
                    )
                )
            if (
                descriptor.minimum is not None
                and descriptor.maximum is not None
                and descriptor.minimum >= descriptor.maximum
            ):
                violations.append(
                    Violation(
                        rule="degenerate-range-measure",
                        attribute=name,
                        message=(
                            f"polynomial measure needs min < max on {name!r}; "
                            "use a step measure with threshold 0 for constant attributes"
                        ),
                    )
                )
        else:
            if not (
                isinstance(measure.threshold, (int, float))
                and math.isfinite(measure.threshold)
                and measure.threshold >= 0.0
            ):
                violations.append(
                    Violation(
                        rule="invalid-threshold",
                        attribute=name,
                        message=f"step threshold must be >= 0, got {measure.threshold!r}",
                    )
                )
    elif isinstance(measure, TableMeasure):
        if descriptor.kind is not AttributeKind.SYMBOLIC:
            return [
                Violation(
                    rule="measure-kind-mismatch",
                    attribute=name,
                    message=f"table measure on numeric attribute {name!r}",
                )
            ]
        if descriptor.symbols is not None and tuple(measure.symbols) != tuple(descriptor.symbols):
            violations.append(
                Violation(
                    rule="table-symbol-mismatch",
                    attribute=name,
                    message=f"table symbols differ from the symbol set of {name!r}",
                )
            )
        n = len(measure.symbols)
        if len(measure.entries) != n or any(len(row) != n for row in measure.entries):
            violations.append(
                Violation(
                    rule="table-shape",
                    attribute=name,
                    message=f"table for {name!r} is not {n}x{n}",
                )
            )
        else:
            for i, row in enumerate(measure.entries):
                for j, entry in enumerate(row):
                    if not (
                        isinstance(entry, (int, float))
                        and math.isfinite(entry)
                        and 0.0 <= entry <= 1.0
                    ):
                        violations.append(
                            Violation(
                                rule="table-entry-range",
                                attribute=name,
                                message=(
                                    f"table entry [{i}][{j}] for {name!r} must be in "
                                    f"[0, 1], got {entry!r}"
                                ),
                            )
                        )
                    elif i == j and entry != 1.0:
                        violations.append(
                            Violation(
                                rule="table-diagonal",
                                attribute=name,
                                message=f"table diagonal [{i}][{i}] for {name!r} must be 1.0",
                            )
                        )
    return violations
