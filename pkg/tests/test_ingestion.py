from __future__ import annotations

import io
import random

import pytest

from casewise import (
    AttributeKind,
    AttributeRole,
    IngestionError,
    PolynomialMeasure,
    SchemaViolationError,
    SimilarityModel,
    StepMeasure,
    load_csv,
    starter_model,
    suggest_measure,
    summarize,
    validate_model,
)
from casewise.ingestion import convert_zero_missing
from casewise.documents import casebase_from_doc, casebase_to_doc, dumps, loads



def load_text(text: str, solution: str, **kwargs):
    return load_csv(io.BytesIO(text.encode("utf-8")), solution=solution, **kwargs)


class TestLoadCsv:
    def test_demo_dataset_loads_with_pima_shape(self, diabetes_base):
        assert len(diabetes_base) == 768
        problems = [d for d in diabetes_base.schema if d.role is AttributeRole.PROBLEM]
        solutions = [d for d in diabetes_base.schema if d.role is AttributeRole.SOLUTION]
        assert len(problems) == 8
        assert [d.name for d in solutions] == ["Outcome"]
        assert solutions[0].symbols == ("0", "1")

    def test_case_count_matches_data_rows(self):
        schema, base = load_text("x,y\n1,a\n2,b\n3,a\n", solution="y")
        assert len(base) == 3
        assert [c.id for c in base.cases] == ["case-1", "case-2", "case-3"]

    def test_single_row_file_yields_degenerate_range(self):
        _schema, base = load_text("x,label\n5,yes\n", solution="label")
        descriptor = base.schema[0]
        assert (descriptor.minimum, descriptor.maximum) == (5.0, 5.0)
        assert len(base) == 1

    def test_zero_missing_converts_and_range_skips_zeros(self):
        text = "Glucose,Outcome\n0,0\n90,1\n120,0\n0,1\n150,1\n"
        _schema, base = load_text(text, solution="Outcome", zero_missing=("Glucose",))
        observed = [c.values["Glucose"] for c in base.cases]
        assert observed == [None, 90.0, 120.0, None, 150.0]
        descriptor = base.schema[0]
        # hand-filtered column scan: min/max over the non-zero cells
        assert (descriptor.minimum, descriptor.maximum) == (90.0, 150.0)

    def test_zero_missing_conversion_is_idempotent(self):
        values = {"a": 0.0, "b": None, "c": 3.0}
        once = convert_zero_missing(values, ("a", "b"))
        twice = convert_zero_missing(once, ("a", "b"))
        assert once == {"a": None, "b": None, "c": 3.0}
        assert twice == once

    def test_duplicate_header_rejected(self):
        with pytest.raises(IngestionError, match="duplicate header"):
            load_text("x,x,y\n1,2,3\n", solution="y")

    def test_empty_file_rejected(self):
        with pytest.raises(IngestionError, match="empty file"):
            load_text("", solution="y")

    def test_header_only_file_rejected(self):
        with pytest.raises(IngestionError, match="no data rows"):
            load_text("x,y\n", solution="y")

    def test_unparseable_hinted_numeric_cell_names_row_and_column(self):
        with pytest.raises(IngestionError, match="row 2.*'x'") as excinfo:
            load_text(
                "x,y\n1,a\noops,b\n",
                solution="y",
                schema_hints={"x": AttributeKind.NUMERIC},
            )
        assert excinfo.value.row == 2
        assert excinfo.value.column == "x"

    def test_unknown_solution_column_rejected(self):
        with pytest.raises(IngestionError, match="solution column"):
            load_text("x,y\n1,2\n", solution="z")

    def test_kind_inference_falls_back_to_symbolic(self):
        _schema, base = load_text("x,y\n1,a\ntwo,b\n", solution="y")
        assert base.schema[0].kind is AttributeKind.SYMBOLIC
        assert base.schema[0].symbols == ("1", "two")

    def test_empty_cells_are_missing(self):
        _schema, base = load_text("x,y\n1,a\n,b\n2,a\n", solution="y")
        assert [c.values["x"] for c in base.cases] == [1.0, None, 2.0]

    def test_solution_column_defaults_to_symbolic_labels(self):
        _schema, base = load_text("x,y\n1,0\n2,1\n", solution="y")
        solution = base.schema[1]
        assert solution.kind is AttributeKind.SYMBOLIC
        assert [c.values["y"] for c in base.cases] == ["0", "1"]

    def test_case_base_document_round_trip(self, diabetes_base):
        doc = dumps(casebase_to_doc(diabetes_base))
        again = casebase_from_doc(loads(doc))
        assert again == diabetes_base
        assert dumps(casebase_to_doc(again)) == doc


class TestSummarize:
    def test_constant_column_single_occupied_bin(self):
        _schema, base = load_text("x,y\n7,a\n7,b\n7,a\n", solution="y")
        summary = summarize(base, "x", bins=10)
        assert summary.stddev == 0.0
        assert len(summary.bins) == 1
        assert summary.bins[0].count == 3
        assert (summary.bins[0].lower, summary.bins[0].upper) == (7.0, 7.0)

    def test_two_bin_hand_binning(self):
        _schema, base = load_text("x,y\n1,a\n2,a\n3,a\n4,a\n", solution="y")
        summary = summarize(base, "x", bins=2)
        assert [(b.lower, b.upper, b.count) for b in summary.bins] == [
            (1.0, 2.5, 2),
            (2.5, 4.0, 2),
        ]

    def test_mass_conservation_with_missing(self):
        text = "x,y\n1,a\n,a\n3,b\n,b\n5,a\n"
        _schema, base = load_text(text, solution="y")
        summary = summarize(base, "x", bins=3)
        assert summary.total == 5
        assert summary.missing == 2
        assert sum(b.count for b in summary.bins) == summary.count == 3

    def test_grouped_histograms_share_edges_and_sum_to_count(self, diabetes_base):
        summary = summarize(diabetes_base, "Age", bins=12, group_by_solution=True)
        assert set(summary.groups) == {"0", "1"}
        for bins in summary.groups.values():
            assert [(b.lower, b.upper) for b in bins] == [
                (b.lower, b.upper) for b in summary.bins
            ]
        grouped_total = sum(b.count for bins in summary.groups.values() for b in bins)
        assert grouped_total == summary.count
        # oracle: direct column scan
        observed = sum(1 for c in diabetes_base.cases if c.values["Age"] is not None)
        assert summary.count == observed == 768 - summary.missing

    def test_unknown_attribute_rejected(self, diabetes_base):
        with pytest.raises(SchemaViolationError, match="unknown attribute"):
            summarize(diabetes_base, "Nope")

    def test_symbolic_attribute_rejected(self, diabetes_base):
        with pytest.raises(SchemaViolationError, match="symbolic"):
            summarize(diabetes_base, "Outcome")

    def test_bins_below_one_rejected(self, diabetes_base):
        with pytest.raises(ValueError):
            summarize(diabetes_base, "Age", bins=0)

    def test_mass_conservation_on_random_columns(self):
        rng = random.Random(614)
        for _ in range(30):
            n = rng.randint(1, 80)
            cells = []
            for _ in range(n):
                cells.append("" if rng.random() < 0.2 else f"{rng.uniform(-40, 40):.3f}")
            if all(c == "" for c in cells):
                cells[0] = "1.0"
            text = "x,y\n" + "\n".join(f"{c},lab" for c in cells) + "\n"
            _schema, base = load_text(text, solution="y")
            bins = rng.randint(1, 12)
            summary = summarize(base, "x", bins=bins)
            assert sum(b.count for b in summary.bins) + summary.missing == summary.total
            # bins tile [min, max] without gaps
            for left, right in zip(summary.bins, summary.bins[1:]):
                assert left.upper == right.lower
            if summary.count:
                assert summary.bins[0].lower == summary.minimum
                assert summary.bins[-1].upper == summary.maximum


class TestSuggestMeasure:
    def test_default_suggestion_is_degree_two_polynomial(self, diabetes_base):
        summary = summarize(diabetes_base, "Age", bins=5)
        measure = suggest_measure(summary)
        assert isinstance(measure, PolynomialMeasure)
        assert measure.attribute == "Age"
        assert measure.degree == 2.0

    def test_degenerate_range_falls_back_to_exact_match_step(self):
        _schema, base = load_text("x,y\n7,a\n7,b\n", solution="y")
        measure = suggest_measure(summarize(base, "x", bins=4))
        assert isinstance(measure, StepMeasure)
        assert measure.threshold == 0.0

    def test_suggestions_validate_when_installed(self):
        rng = random.Random(88)
        for _ in range(20):
            n = rng.randint(1, 30)
            constant = rng.random() < 0.3
            cells = ["5" for _ in range(n)] if constant else [
                f"{rng.uniform(0, 9):.2f}" for _ in range(n)
            ]
            text = "x,y\n" + "\n".join(f"{c},lab" for c in cells) + "\n"
            schema, base = load_text(text, solution="y")
            measure = suggest_measure(summarize(base, "x", bins=3))
            model = SimilarityModel.empty().with_schema(schema, (measure,), {"x": 1.0})
            assert validate_model(model) == []


class TestStarterModel:
    def test_starter_model_is_valid_and_complete(self, diabetes_base, diabetes_model):
        assert validate_model(diabetes_model) == []
        problem = [d.name for d in diabetes_model.problem_attributes]
        assert sorted(m.attribute for m in diabetes_model.measures) == sorted(problem)
        assert all(w == 1.0 for w in diabetes_model.amalgamation.weights.values())
        assert diabetes_model.version == 1
