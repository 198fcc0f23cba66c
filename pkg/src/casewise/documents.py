"""Canonical structured documents for every engine artifact.

All artifacts share one document family: JSON with a ``kind`` discriminator,
2-space indentation, stable key order (semantic, not alphabetic) and a
trailing newline, so files diff cleanly and identical inputs serialize to
identical bytes. Model and case-base documents round-trip losslessly at full
float precision; derived documents (retrieval results, chart sets, curves)
carry their reals rounded to 6 decimals, display rounds further to 2.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from .charts import ChartRow, DecompositionChartSet
from .errors import DocumentError, Violation
from .evaluation import ConfusionCounts, EvaluationReport, FoldResult
from .ingestion import DistributionSummary, HistogramBin
from .model import (
    AmalgamationFunction,
    AmalgamationMode,
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
from .retrieval import (
    CaseBase,
    Explanation,
    ExplanationRow,
    RetrievalEntry,
    RetrievalResult,
)

Doc = dict[str, Any]


def dumps(doc: Doc) -> str:
    """Canonical text form: 2-space indent, insertion key order, newline-terminated."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def loads(text: str | bytes) -> Doc:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise DocumentError("document root must be an object")
    return doc


def _expect_kind(doc: Doc, kind: str) -> None:
    found = doc.get("kind")
    if found != kind:
        raise DocumentError(f"expected a {kind!r} document, found kind {found!r}")


def _require(doc: Mapping[str, Any], key: str, context: str) -> Any:
    if key not in doc:
        raise DocumentError(f"{context}: missing key {key!r}")
    return doc[key]


def _round6(value: float | None) -> float | None:
    return None if value is None else round(value, 6)


# -- similarity model ---------------------------------------------------------

MODEL_KIND = "similarity-model"


def descriptor_to_doc(descriptor: AttributeDescriptor) -> Doc:
    doc: Doc = {
        "name": descriptor.name,
        "kind": descriptor.kind.value,
        "role": descriptor.role.value,
    }
    if descriptor.kind is AttributeKind.NUMERIC:
        doc["min"] = descriptor.minimum
        doc["max"] = descriptor.maximum
    else:
        doc["symbols"] = list(descriptor.symbols or ())
    return doc


def descriptor_from_doc(doc: Mapping[str, Any]) -> AttributeDescriptor:
    name = _require(doc, "name", "attribute")
    try:
        kind = AttributeKind(_require(doc, "kind", f"attribute {name!r}"))
        role = AttributeRole(_require(doc, "role", f"attribute {name!r}"))
    except ValueError as exc:
        raise DocumentError(f"attribute {name!r}: {exc}") from None
    if kind is AttributeKind.NUMERIC:
        return AttributeDescriptor(
            name=name,
            kind=kind,
            role=role,
            minimum=doc.get("min"),
            maximum=doc.get("max"),
        )
    symbols = doc.get("symbols")
    if not isinstance(symbols, list):
        raise DocumentError(f"attribute {name!r}: symbolic attributes need a symbols list")
    return AttributeDescriptor(name=name, kind=kind, role=role, symbols=tuple(symbols))


def measure_to_doc(measure: LocalSimilarityMeasure) -> Doc:
    if isinstance(measure, PolynomialMeasure):
        return {"attribute": measure.attribute, "type": "polynomial", "degree": measure.degree}
    if isinstance(measure, StepMeasure):
        return {"attribute": measure.attribute, "type": "step", "threshold": measure.threshold}
    return {
        "attribute": measure.attribute,
        "type": "table",
        "symbols": list(measure.symbols),
        "entries": [list(row) for row in measure.entries],
    }


def measure_from_doc(doc: Mapping[str, Any]) -> LocalSimilarityMeasure:
    attribute = _require(doc, "attribute", "measure")
    variant = _require(doc, "type", f"measure for {attribute!r}")
    if variant == "polynomial":
        return PolynomialMeasure(attribute=attribute, degree=_require(doc, "degree", attribute))
    if variant == "step":
        return StepMeasure(attribute=attribute, threshold=_require(doc, "threshold", attribute))
    if variant == "table":
        entries = _require(doc, "entries", attribute)
        if not isinstance(entries, list):
            raise DocumentError(f"measure for {attribute!r}: entries must be a list of rows")
        return TableMeasure(
            attribute=attribute,
            symbols=tuple(_require(doc, "symbols", attribute)),
            entries=tuple(tuple(row) for row in entries),
        )
    raise DocumentError(f"measure for {attribute!r}: unknown type {variant!r}")


def model_to_doc(model: SimilarityModel) -> Doc:
    schema_order = [d.name for d in model.schema]
    weights = model.amalgamation.weights
    ordered_weights = {name: weights[name] for name in schema_order if name in weights}
    for name in sorted(set(weights) - set(ordered_weights)):
        ordered_weights[name] = weights[name]
    return {
        "kind": MODEL_KIND,
        "version": model.version,
        "schema": [descriptor_to_doc(d) for d in model.schema],
        "measures": [measure_to_doc(m) for m in model.measures],
        "amalgamation": {
            "mode": model.amalgamation.mode.value,
            "weights": ordered_weights,
        },
    }


def model_from_doc(doc: Mapping[str, Any]) -> SimilarityModel:
    _expect_kind(dict(doc), MODEL_KIND)
    amalgamation = _require(doc, "amalgamation", "model")
    try:
        mode = AmalgamationMode(_require(amalgamation, "mode", "amalgamation"))
    except ValueError as exc:
        raise DocumentError(str(exc)) from None
    return SimilarityModel(
        schema=tuple(descriptor_from_doc(d) for d in _require(doc, "schema", "model")),
        measures=tuple(measure_from_doc(m) for m in _require(doc, "measures", "model")),
        amalgamation=AmalgamationFunction(
            weights=dict(_require(amalgamation, "weights", "amalgamation")),
            mode=mode,
        ),
        version=_require(doc, "version", "model"),
    )


# -- case base and queries ----------------------------------------------------

CASEBASE_KIND = "case-base"
QUERY_KIND = "query"


def _values_doc(values: Mapping[str, Value], order: list[str]) -> Doc:
    doc = {name: values[name] for name in order if name in values}
    for name in sorted(set(values) - set(doc)):
        doc[name] = values[name]
    return doc


def casebase_to_doc(base: CaseBase) -> Doc:
    order = [d.name for d in base.schema]
    return {
        "kind": CASEBASE_KIND,
        "name": base.name,
        "schema": [descriptor_to_doc(d) for d in base.schema],
        "cases": [
            {"id": case.id, "values": _values_doc(case.values, order)} for case in base.cases
        ],
    }


def casebase_from_doc(doc: Mapping[str, Any]) -> CaseBase:
    _expect_kind(dict(doc), CASEBASE_KIND)
    cases = []
    seen: set[str] = set()
    for entry in _require(doc, "cases", "case base"):
        case_id = _require(entry, "id", "case")
        if case_id in seen:
            raise DocumentError(f"duplicate case id {case_id!r}")
        seen.add(case_id)
        cases.append(Case(id=case_id, values=dict(_require(entry, "values", case_id))))
    return CaseBase(
        name=_require(doc, "name", "case base"),
        schema=tuple(descriptor_from_doc(d) for d in _require(doc, "schema", "case base")),
        cases=tuple(cases),
    )


def query_to_doc(query: Case) -> Doc:
    return {"kind": QUERY_KIND, "values": dict(query.values)}


def query_from_doc(doc: Mapping[str, Any]) -> Case:
    _expect_kind(dict(doc), QUERY_KIND)
    return Case(id="query", values=dict(_require(doc, "values", "query")))


# -- retrieval results ----------------------------------------------------------

RESULT_KIND = "retrieval-result"


def explanation_to_doc(explanation: Explanation) -> Doc:
    return {
        "no_overlap": explanation.no_overlap,
        "rows": [
            {
                "attribute": row.attribute,
                "local_sim": _round6(row.local_sim),
                "weight_raw": _round6(row.weight_raw),
                "weight_normalized": _round6(row.weight_normalized),
                "contribution": _round6(row.contribution),
                "missing": row.missing,
            }
            for row in explanation.rows
        ],
    }


def explanation_from_doc(doc: Mapping[str, Any]) -> Explanation:
    rows = []
    for row in _require(doc, "rows", "explanation"):
        rows.append(
            ExplanationRow(
                attribute=_require(row, "attribute", "explanation row"),
                local_sim=row.get("local_sim"),
                weight_raw=_require(row, "weight_raw", "explanation row"),
                weight_normalized=row.get("weight_normalized"),
                contribution=row.get("contribution"),
                missing=_require(row, "missing", "explanation row"),
            )
        )
    return Explanation(rows=tuple(rows))


def result_to_doc(result: RetrievalResult, include_explanations: bool = True) -> Doc:
    entries = []
    for entry in result.entries:
        entry_doc: Doc = {"case_id": entry.case_id, "score": _round6(entry.score)}
        if include_explanations:
            entry_doc["explanation"] = explanation_to_doc(entry.explanation)
        entries.append(entry_doc)
    return {
        "kind": RESULT_KIND,
        "model_version": result.model_version,
        "k": result.k,
        "query": {"values": dict(result.query.values)},
        "entries": entries,
    }


def result_from_doc(doc: Mapping[str, Any]) -> RetrievalResult:
    _expect_kind(dict(doc), RESULT_KIND)
    entries = []
    for entry in _require(doc, "entries", "result"):
        if "explanation" not in entry:
            raise DocumentError(
                "result document has no explanations (was it produced without --explain?)"
            )
        entries.append(
            RetrievalEntry(
                case_id=_require(entry, "case_id", "entry"),
                score=_require(entry, "score", "entry"),
                explanation=explanation_from_doc(entry["explanation"]),
            )
        )
    query = _require(doc, "query", "result")
    return RetrievalResult(
        query=Case(id="query", values=dict(_require(query, "values", "query"))),
        model_version=_require(doc, "model_version", "result"),
        k=_require(doc, "k", "result"),
        entries=tuple(entries),
    )


# -- distribution summaries -----------------------------------------------------

SUMMARY_KIND = "distribution-summary"


def _bins_doc(bins: tuple[HistogramBin, ...]) -> list[Doc]:
    return [{"lower": b.lower, "upper": b.upper, "count": b.count} for b in bins]


def summary_to_doc(summary: DistributionSummary) -> Doc:
    doc: Doc = {
        "kind": SUMMARY_KIND,
        "attribute": summary.attribute,
        "total": summary.total,
        "count": summary.count,
        "missing": summary.missing,
        "min": summary.minimum,
        "max": summary.maximum,
        "mean": summary.mean,
        "stddev": summary.stddev,
        "bins": _bins_doc(summary.bins),
        "groups": None,
    }
    if summary.groups is not None:
        doc["groups"] = {label: _bins_doc(bins) for label, bins in summary.groups.items()}
    return doc


def _bins_from_doc(docs: list[Mapping[str, Any]]) -> tuple[HistogramBin, ...]:
    return tuple(
        HistogramBin(
            lower=_require(b, "lower", "bin"),
            upper=_require(b, "upper", "bin"),
            count=_require(b, "count", "bin"),
        )
        for b in docs
    )


def summary_from_doc(doc: Mapping[str, Any]) -> DistributionSummary:
    _expect_kind(dict(doc), SUMMARY_KIND)
    groups = doc.get("groups")
    return DistributionSummary(
        attribute=_require(doc, "attribute", "summary"),
        total=_require(doc, "total", "summary"),
        count=_require(doc, "count", "summary"),
        missing=_require(doc, "missing", "summary"),
        minimum=doc.get("min"),
        maximum=doc.get("max"),
        mean=doc.get("mean"),
        stddev=doc.get("stddev"),
        bins=_bins_from_doc(_require(doc, "bins", "summary")),
        groups=None if groups is None else {k: _bins_from_doc(v) for k, v in groups.items()},
    )


# -- evaluation reports -----------------------------------------------------------

REPORT_KIND = "evaluation-report"


def report_to_doc(report: EvaluationReport) -> Doc:
    return {
        "kind": REPORT_KIND,
        "folds": report.folds,
        "k": report.k,
        "seed": report.seed,
        "model_version": report.model_version,
        "fold_accuracies": list(report.fold_accuracies),
        "mean_accuracy": report.mean_accuracy,
        "stddev_accuracy": report.stddev_accuracy,
        "fold_results": [
            {"index": f.index, "test_size": f.test_size, "correct": f.correct}
            for f in report.fold_results
        ],
        "confusion": {
            label: {
                "true_positive": c.true_positive,
                "false_positive": c.false_positive,
                "false_negative": c.false_negative,
                "true_negative": c.true_negative,
            }
            for label, c in report.confusion.items()
        },
    }


def report_from_doc(doc: Mapping[str, Any]) -> EvaluationReport:
    _expect_kind(dict(doc), REPORT_KIND)
    return EvaluationReport(
        folds=_require(doc, "folds", "report"),
        k=_require(doc, "k", "report"),
        seed=_require(doc, "seed", "report"),
        model_version=_require(doc, "model_version", "report"),
        fold_results=tuple(
            FoldResult(
                index=_require(f, "index", "fold"),
                test_size=_require(f, "test_size", "fold"),
                correct=_require(f, "correct", "fold"),
            )
            for f in _require(doc, "fold_results", "report")
        ),
        confusion={
            label: ConfusionCounts(
                true_positive=_require(c, "true_positive", label),
                false_positive=_require(c, "false_positive", label),
                false_negative=_require(c, "false_negative", label),
                true_negative=_require(c, "true_negative", label),
            )
            for label, c in _require(doc, "confusion", "report").items()
        },
    )


# -- chart sets and measure previews ----------------------------------------------

CHART_SET_KIND = "decomposition-chart-set"
PREVIEW_KIND = "measure-preview"


def chart_set_to_doc(chart: DecompositionChartSet) -> Doc:
    rows = []
    for row in chart.rows:
        rows.append(
            {
                "rank": row.rank,
                "case_id": row.case_id,
                "score": _round6(row.score),
                "panels": {
                    "weighted_contribution": [_round6(v) for v in row.contributions],
                    "local_similarity": [_round6(v) for v in row.local_sims],
                    "weight": [_round6(v) for v in row.weights_raw],
                },
                "weights_normalized": [_round6(v) for v in row.weights_normalized],
            }
        )
    return {
        "kind": CHART_SET_KIND,
        "model_version": chart.model_version,
        "attributes": list(chart.attributes),
        "rows": rows,
    }


def chart_set_from_doc(doc: Mapping[str, Any]) -> DecompositionChartSet:
    _expect_kind(dict(doc), CHART_SET_KIND)
    rows = []
    for row in _require(doc, "rows", "chart set"):
        panels = _require(row, "panels", "chart row")
        rows.append(
            ChartRow(
                rank=_require(row, "rank", "chart row"),
                case_id=_require(row, "case_id", "chart row"),
                score=_require(row, "score", "chart row"),
                contributions=tuple(_require(panels, "weighted_contribution", "panels")),
                local_sims=tuple(_require(panels, "local_similarity", "panels")),
                weights_raw=tuple(_require(panels, "weight", "panels")),
                weights_normalized=tuple(_require(row, "weights_normalized", "chart row")),
            )
        )
    return DecompositionChartSet(
        attributes=tuple(_require(doc, "attributes", "chart set")),
        model_version=_require(doc, "model_version", "chart set"),
        rows=tuple(rows),
    )


def preview_to_doc(
    attribute: str, reference: float, points: tuple[tuple[float, float], ...]
) -> Doc:
    return {
        "kind": PREVIEW_KIND,
        "attribute": attribute,
        "reference": _round6(reference),
        "points": [
            {"value": _round6(value), "similarity": _round6(sim)} for value, sim in points
        ],
    }


# -- violations ---------------------------------------------------------------------

VIOLATIONS_KIND = "violations"


def violations_to_doc(violations: list[Violation]) -> Doc:
    return {
        "kind": VIOLATIONS_KIND,
        "violations": [v.to_doc() for v in violations],
    }
