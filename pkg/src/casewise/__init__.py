"""Explainable case-based-reasoning retrieval engine.

Similarity follows the local-global principle: per-attribute local measures
are combined by a weight-normalized weighted sum, and every retrieval score
can be decomposed into per-attribute contributions for inspection.
"""

from .errors import (
    DocumentError,
    EngineError,
    IngestionError,
    ModelValidationError,
    NoPredictionError,
    SchemaViolationError,
    ValidationError,
    Violation,
)
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
    global_similarity,
    local_similarity,
    validate_model,
)
from .retrieval import (
    CaseBase,
    Explanation,
    ExplanationRow,
    RetrievalEntry,
    RetrievalResult,
    explain,
    retrieve,
)
from .ingestion import (
    DistributionSummary,
    HistogramBin,
    PIMA_HEADER,
    PIMA_SOLUTION,
    PIMA_ZERO_MISSING,
    load_csv,
    starter_model,
    suggest_measure,
    summarize,
)
from .evaluation import EvaluationReport, classify, cross_validate
from .charts import (
    DecompositionChartSet,
    build_chart_set,
    measure_preview,
    render_charts,
)

__version__ = "0.1.0"

__all__ = [
    "AmalgamationFunction",
    "AmalgamationMode",
    "AttributeDescriptor",
    "AttributeKind",
    "AttributeRole",
    "Case",
    "CaseBase",
    "DecompositionChartSet",
    "DistributionSummary",
    "DocumentError",
    "EngineError",
    "EvaluationReport",
    "Explanation",
    "ExplanationRow",
    "HistogramBin",
    "IngestionError",
    "LocalSimilarityMeasure",
    "ModelValidationError",
    "NoPredictionError",
    "PIMA_HEADER",
    "PIMA_SOLUTION",
    "PIMA_ZERO_MISSING",
    "PolynomialMeasure",
    "RetrievalEntry",
    "RetrievalResult",
    "SchemaViolationError",
    "SimilarityModel",
    "StepMeasure",
    "TableMeasure",
    "ValidationError",
    "Violation",
    "build_chart_set",
    "classify",
    "cross_validate",
    "explain",
    "global_similarity",
    "load_csv",
    "local_similarity",
    "measure_preview",
    "render_charts",
    "retrieve",
    "starter_model",
    "suggest_measure",
    "summarize",
    "validate_model",
]
