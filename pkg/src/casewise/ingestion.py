"""Dataset loading, per-attribute distribution statistics, measure suggestion.

A delimited file becomes a case base in one pass: the header row names the
attributes, every data row becomes a case with a sequential id, and numeric
descriptor ranges are set to the observed extremes (after the optional
zero-to-missing conversion). Distribution summaries feed both the workbench
histograms and the data-driven starter measures.
"""

from __future__ import annotations

import csv
import io
import math
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Mapping, Union

from .errors import IngestionError, SchemaViolationError
from .model import (
    AttributeDescriptor,
    AttributeKind,
    AttributeRole,
    Case,
    LocalSimilarityMeasure,
    PolynomialMeasure,
    SimilarityModel,
    StepMeasure,
    TableMeasure,
    Value,
)
from .retrieval import CaseBase

#: Canonical header of the UCI Pima diabetes distribution, shipped as a
#: documented fixture (the dataset itself is fetched separately, see README).
PIMA_HEADER = (
    "Pregnancies",
    "Glucose",
    "BloodPressure",
    "SkinThickness",
    "Insulin",
    "BMI",
    "DiabetesPedigreeFunction",
    "Age",
    "Outcome",
)

#: Pima columns where a recorded 0 is physiologically impossible and really
#: means "not measured".
PIMA_ZERO_MISSING = ("Glucose", "BloodPressure", "SkinThickness", "Insulin", "BMI")

PIMA_SOLUTION = "Outcome"

DEFAULT_BINS = 20

DEFAULT_SUGGESTION_DEGREE = 2.0

Source = Union[str, Path, IO[bytes], IO[str]]


@dataclass(frozen=True)
class HistogramBin:
    lower: float
    upper: float
    count: int


@dataclass(frozen=True)
class DistributionSummary:
    """Distribution of one numeric attribute over a case base.

    ``count`` is the number of non-missing values; the histogram bins tile
    [minimum, maximum] with equal widths (last bin right-inclusive), so the
    bin counts add up to ``count``. With ``groups`` set, one histogram per
    distinct solution label shares the same bin edges.
    """

    attribute: str
    total: int
    count: int
    missing: int
    minimum: float | None
    maximum: float | None
    mean: float | None
    stddev: float | None
    bins: tuple[HistogramBin, ...]
    groups: Mapping[str, tuple[HistogramBin, ...]] | None = None


def convert_zero_missing(values: Mapping[str, Value], columns: Iterable[str]) -> dict[str, Value]:
    """Turn numeric zeros in the listed columns into missing values.

    Idempotent: zeros become ``None`` and ``None`` stays ``None``, so a second
    pass is the identity.
    """
    converted = dict(values)
    for column in columns:
        if column in converted and converted[column] == 0.0:
            converted[column] = None
    return converted


def load_csv(
    source: Source,
    solution: str,
    zero_missing: Iterable[str] = (),
    schema_hints: Mapping[str, AttributeKind] | None = None,
    name: str = "casebase",
) -> tuple[tuple[AttributeDescriptor, ...], CaseBase]:
    """Parse a comma-delimited, UTF-8, header-first file into a case base.

    Column kinds are inferred (numeric iff every non-empty cell parses as a
    decimal) unless overridden by ``schema_hints``. The solution column
    defaults to symbolic: its values are class labels, never distances. Empty
    cells are missing; ``zero_missing`` additionally converts recorded zeros
    in the named columns. Descriptor ranges and symbol sets come from the
    observed data after that conversion.
    """
    rows = _read_rows(source)
    header = rows[0]
    data_rows = rows[1:]

    if len(set(header)) != len(header):
        dupes = sorted({h for h in header if header.count(h) > 1})
        raise IngestionError(f"duplicate header names: {', '.join(dupes)}")
    if solution not in header:
        raise IngestionError(f"solution column {solution!r} not in header")
    if not data_rows:
        raise IngestionError("no data rows")

    hints = dict(schema_hints or {})
    zero_missing = tuple(zero_missing)
    for column in zero_missing:
        if column not in header:
            raise IngestionError(f"zero-missing column {column!r} not in header")

    kinds = {column: _infer_kind(column, data_rows, header, hints, solution) for column in header}

    id_width = len(str(len(data_rows)))
    cases: list[Case] = []
    for row_index, row in enumerate(data_rows, start=1):
        if len(row) != len(header):
            raise IngestionError(
                f"row {row_index} has {len(row)} fields, header has {len(header)}",
                row=row_index,
            )
        values: dict[str, Value] = {}
        for column, cell in zip(header, row):
            values[column] = _parse_cell(cell, kinds[column], row_index, column)
        values = convert_zero_missing(values, zero_missing)
        cases.append(Case(id=f"case-{row_index:0{id_width}d}", values=values))

    schema = tuple(
        _build_descriptor(column, kinds[column], solution, cases) for column in header
    )
    base = CaseBase(name=name, schema=schema, cases=tuple(cases))
    return schema, base


def _read_rows(source: Source) -> list[list[str]]:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as handle:
            rows = list(csv.reader(handle))
    else:
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
        rows = list(csv.reader(io.StringIO(text)))
    rows = [row for row in rows if row]  # drop blank lines
    if not rows:
        raise IngestionError("empty file")
    return rows


def _infer_kind(
    column: str,
    data_rows: list[list[str]],
    header: list[str],
    hints: Mapping[str, AttributeKind],
    solution: str,
) -> AttributeKind:
    if column in hints:
        return AttributeKind(hints[column])
    if column == solution:
        return AttributeKind.SYMBOLIC
    index = header.index(column)
    saw_value = False
    for row in data_rows:
        if index >= len(row):
            continue
        cell = row[index].strip()
        if not cell:
            continue
        saw_value = True
        try:
            float(cell)
        except ValueError:
            return AttributeKind.SYMBOLIC
    return AttributeKind.NUMERIC if saw_value else AttributeKind.SYMBOLIC


def _parse_cell(cell: str, kind: AttributeKind, row_index: int, column: str) -> Value:
    stripped = cell.strip()
    if not stripped:
        return None
    if kind is AttributeKind.NUMERIC:
        try:
            value = float(stripped)
        except ValueError:
            raise IngestionError(
                f"row {row_index}, column {column!r}: cannot parse {cell!r} as a number",
                row=row_index,
                column=column,
            ) from None
        if not math.isfinite(value):
            raise IngestionError(
                f"row {row_index}, column {column!r}: non-finite number {cell!r}",
                row=row_index,
                column=column,
            )
        return value
    return stripped


def _build_descriptor(
    column: str,
    kind: AttributeKind,
    solution: str,
    cases: list[Case],
) -> AttributeDescriptor:
    role = AttributeRole.SOLUTION if column == solution else AttributeRole.PROBLEM
    observed = [case.values[column] for case in cases if case.values[column] is not None]
    if kind is AttributeKind.NUMERIC:
        if not observed:
            raise IngestionError(
                f"column {column!r} has no usable values (all missing after conversion)",
                column=column,
            )
        return AttributeDescriptor(
            name=column,
            kind=kind,
            role=role,
            minimum=min(observed),
            maximum=max(observed),
        )
    if not observed:
        raise IngestionError(f"column {column!r} has no usable values", column=column)
    symbols = tuple(sorted({str(v) for v in observed}))
    return AttributeDescriptor(name=column, kind=kind, role=role, symbols=symbols)


def summarize(
    base: CaseBase,
    attribute: str,
    bins: int = DEFAULT_BINS,
    group_by_solution: bool = False,
) -> DistributionSummary:
    """Histogram and moments of one numeric attribute.

    ``group_by_solution`` adds one histogram per distinct solution label, all
    sharing the bin edges of the full distribution (the workbench overlays
    them to judge how separable the outcome is).
    """
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    descriptor = _find_descriptor(base, attribute)
    if descriptor.kind is not AttributeKind.NUMERIC:
        raise SchemaViolationError(
            f"attribute {attribute!r} is symbolic; summaries cover numeric attributes"
        )

    values: list[float] = []
    for case in base.cases:
        value = case.values.get(attribute)
        if value is not None:
            values.append(float(value))
    total = len(base.cases)
    count = len(values)
    missing = total - count

    if count == 0:
        return DistributionSummary(
            attribute=attribute,
            total=total,
            count=0,
            missing=missing,
            minimum=None,
            maximum=None,
            mean=None,
            stddev=None,
            bins=(),
            groups=None,
        )

    minimum = min(values)
    maximum = max(values)
    mean = statistics.fmean(values)
    stddev = statistics.pstdev(values)
    edges = _bin_edges(minimum, maximum, bins)
    histogram = _fill_bins(values, edges)

    groups: dict[str, tuple[HistogramBin, ...]] | None = None
    if group_by_solution:
        solution_names = [d.name for d in base.schema if d.role is AttributeRole.SOLUTION]
        if len(solution_names) != 1:
            raise SchemaViolationError(
                f"grouping needs exactly one solution attribute, found {len(solution_names)}"
            )
        solution = solution_names[0]
        by_label: dict[str, list[float]] = {}
        for case in base.cases:
            value = case.values.get(attribute)
            label = case.values.get(solution)
            if value is None or label is None:
                continue
            by_label.setdefault(str(label), []).append(float(value))
        groups = {
            label: _fill_bins(group_values, edges)
            for label, group_values in sorted(by_label.items())
        }

    return DistributionSummary(
        attribute=attribute,
        total=total,
        count=count,
        missing=missing,
        minimum=minimum,
        maximum=maximum,
        mean=mean,
        stddev=stddev,
        bins=histogram,
        groups=groups,
    )


def _find_descriptor(base: CaseBase, attribute: str) -> AttributeDescriptor:
    for descriptor in base.schema:
        if descriptor.name == attribute:
            return descriptor
    raise SchemaViolationError(f"unknown attribute {attribute!r}")


def _bin_edges(minimum: float, maximum: float, bins: int) -> list[float]:
    if maximum <= minimum:
        return [minimum, maximum]  # degenerate: a single [v, v] bin
    width = (maximum - minimum) / bins
    edges = [minimum + i * width for i in range(bins)]
    edges.append(maximum)  # exact upper edge, no float drift
    return edges


def _fill_bins(values: list[float], edges: list[float]) -> tuple[HistogramBin, ...]:
    n = len(edges) - 1
    counts = [0] * n
    lo, hi = edges[0], edges[-1]
    if hi <= lo:
        counts[0] = len(values)
    else:
        width = (hi - lo) / n
        for value in values:
            index = min(n - 1, int((value - lo) / width))
            # float division can land a value one bin off the half-open edges
            while index > 0 and value < edges[index]:
                index -= 1
            while index < n - 1 and value >= edges[index + 1]:
                index += 1
            counts[index] += 1
    return tuple(
        HistogramBin(lower=edges[i], upper=edges[i + 1], count=counts[i]) for i in range(n)
    )


def suggest_measure(summary: DistributionSummary) -> LocalSimilarityMeasure:
    """Data-driven starter measure for the summarized attribute.

    A degree-2 polynomial over the observed range is the default proposal; a
    constant attribute (min = max) falls back to an exact-match step measure.
    The suggestion is a starting point for the engineer, never auto-applied.
    """
    if summary.count == 0 or summary.minimum is None or summary.maximum is None:
        raise SchemaViolationError(
            f"attribute {summary.attribute!r} has no observed values to suggest from"
        )
    if summary.maximum <= summary.minimum:
        return StepMeasure(attribute=summary.attribute, threshold=0.0)
    return PolynomialMeasure(attribute=summary.attribute, degree=DEFAULT_SUGGESTION_DEGREE)


def starter_model(base: CaseBase) -> SimilarityModel:
    """Version-1 model over a freshly ingested case base.

    Numeric problem attributes get the suggested measure, symbolic ones an
    exact-match identity table, and every problem attribute weighs 1.0.
    """
    measures: list[LocalSimilarityMeasure] = []
    weights: dict[str, float] = {}
    for descriptor in base.schema:
        if descriptor.role is not AttributeRole.PROBLEM:
            continue
        weights[descriptor.name] = 1.0
        if descriptor.kind is AttributeKind.NUMERIC:
            measures.append(suggest_measure(summarize(base, descriptor.name, bins=1)))
        else:
            symbols = descriptor.symbols or ()
            measures.append(
                TableMeasure(
                    attribute=descriptor.name,
                    symbols=symbols,
                    entries=tuple(
                        tuple(1.0 if i == j else 0.0 for j in range(len(symbols)))
                        for i in range(len(symbols))
                    ),
                )
            )
    return SimilarityModel.empty().with_schema(base.schema, tuple(measures), weights)
