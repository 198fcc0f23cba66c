from __future__ import annotations

import random

import pytest

from casewise import Case, DocumentError, cross_validate, retrieve, summarize
from casewise.charts import build_chart_set
from casewise.documents import (
    casebase_from_doc,
    casebase_to_doc,
    chart_set_from_doc,
    chart_set_to_doc,
    dumps,
    loads,
    model_from_doc,
    model_to_doc,
    query_from_doc,
    query_to_doc,
    report_from_doc,
    report_to_doc,
    result_from_doc,
    result_to_doc,
    summary_from_doc,
    summary_to_doc,
)

from builders import random_case, random_casebase, random_model


class TestModelDocuments:
    def test_round_trip_is_identity_and_fixed_point(self):
        rng = random.Random(2024)
        for _ in range(30):
            model = random_model(rng, with_solution=rng.random() < 0.5)
            text = dumps(model_to_doc(model))
            parsed = model_from_doc(loads(text))
            assert parsed == model
            assert dumps(model_to_doc(parsed)) == text

    def test_serialization_is_stable_and_diffable(self, diabetes_model):
        text = dumps(model_to_doc(diabetes_model))
        assert text == dumps(model_to_doc(diabetes_model))
        assert text.endswith("\n")
        assert '"kind": "similarity-model"' in text

    def test_wrong_kind_rejected(self, diabetes_model):
        doc = model_to_doc(diabetes_model)
        doc["kind"] = "case-base"
        with pytest.raises(DocumentError):
            model_from_doc(doc)

    def test_malformed_json_rejected(self):
        with pytest.raises(DocumentError):
            loads("{not json")

    def test_unknown_measure_type_rejected(self, diabetes_model):
        doc = model_to_doc(diabetes_model)
        doc["measures"][0]["type"] = "sigmoid"
        with pytest.raises(DocumentError):
            model_from_doc(doc)

    def test_invalid_parameters_survive_parsing_for_validation(self, diabetes_model):
        # broken values are validation's business, not the parser's
        doc = model_to_doc(diabetes_model)
        doc["measures"][0]["degree"] = -1.0
        parsed = model_from_doc(doc)
        assert parsed.measures[0].degree == -1.0


class TestCaseBaseAndQueryDocuments:
    def test_case_base_round_trip(self):
        rng = random.Random(77)
        model = random_model(rng, with_solution=True)
        base = random_casebase(rng, model, 15)
        text = dumps(casebase_to_doc(base))
        parsed = casebase_from_doc(loads(text))
        assert parsed == base
        assert dumps(casebase_to_doc(parsed)) == text

    def test_duplicate_case_ids_rejected(self):
        rng = random.Random(78)
        model = random_model(rng)
        base = random_casebase(rng, model, 3)
        doc = casebase_to_doc(base)
        doc["cases"].append(dict(doc["cases"][0]))
        with pytest.raises(DocumentError, match="duplicate case id"):
            casebase_from_doc(doc)

    def test_query_round_trip_keeps_missing_markers(self):
        query = Case("query", {"Age": 31.0, "BMI": None})
        parsed = query_from_doc(loads(dumps(query_to_doc(query))))
        assert parsed.values == {"Age": 31.0, "BMI": None}


class TestDerivedDocuments:
    def test_result_documents_round_to_six_decimals(self):
        rng = random.Random(5)
        model = random_model(rng)
        base = random_casebase(rng, model, 10)
        result = retrieve(model, base, random_case(rng, model, "q"), k=5)
        doc = result_to_doc(result)
        for entry in doc["entries"]:
            assert entry["score"] == round(entry["score"], 6)
            for row in entry["explanation"]["rows"]:
                for key in ("local_sim", "weight_normalized", "contribution"):
                    if row[key] is not None:
                        assert row[key] == round(row[key], 6)
        parsed = result_from_doc(doc)
        assert [e.case_id for e in parsed.entries] == [e.case_id for e in result.entries]

    def test_result_without_explanations_cannot_feed_charts(self):
        rng = random.Random(6)
        model = random_model(rng)
        base = random_casebase(rng, model, 4)
        result = retrieve(model, base, random_case(rng, model, "q"), k=2)
        doc = result_to_doc(result, include_explanations=False)
        assert "explanation" not in doc["entries"][0]
        with pytest.raises(DocumentError, match="explain"):
            result_from_doc(doc)

    def test_summary_round_trip(self, diabetes_base):
        summary = summarize(diabetes_base, "BMI", bins=7, group_by_solution=True)
        parsed = summary_from_doc(loads(dumps(summary_to_doc(summary))))
        assert parsed == summary

    def test_report_round_trip(self, diabetes_linear_model, diabetes_base):
        from casewise import CaseBase

        small = CaseBase(
            name="slice", schema=diabetes_base.schema, cases=diabetes_base.cases[:30]
        )
        report = cross_validate(diabetes_linear_model, small, k=3, folds=3, seed=1)
        parsed = report_from_doc(loads(dumps(report_to_doc(report))))
        assert parsed == report
        assert parsed.mean_accuracy == report.mean_accuracy

    def test_chart_set_round_trip_modulo_rounding(self):
        rng = random.Random(15)
        model = random_model(rng)
        base = random_casebase(rng, model, 8)
        chart = build_chart_set(retrieve(model, base, random_case(rng, model, "q"), k=4), top=3)
        doc = chart_set_to_doc(chart)
        parsed = chart_set_from_doc(loads(dumps(doc)))
        assert parsed.attributes == chart.attributes
        assert [r.case_id for r in parsed.rows] == [r.case_id for r in chart.rows]
        assert chart_set_to_doc(parsed) == doc
        assert set(doc["rows"][0]["panels"]) == {
            "weighted_contribution",
            "local_similarity",
            "weight",
        }
