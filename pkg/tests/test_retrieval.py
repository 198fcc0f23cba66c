from __future__ import annotations

import random

import pytest

from casewise import (
    AmalgamationFunction,
    AttributeDescriptor,
    AttributeKind,
    Case,
    CaseBase,
    PolynomialMeasure,
    SimilarityModel,
    ValidationError,
    explain,
    global_similarity,
    retrieve,
)
from casewise.documents import dumps, result_to_doc

from builders import random_case, random_casebase, random_model


def linear_model(weights: dict[str, float]) -> SimilarityModel:
    names = tuple(weights)
    schema = tuple(
        AttributeDescriptor(n, AttributeKind.NUMERIC, minimum=0.0, maximum=10.0) for n in names
    )
    measures = tuple(PolynomialMeasure(n, degree=1.0) for n in names)
    return SimilarityModel(
        schema=schema,
        measures=measures,
        amalgamation=AmalgamationFunction(weights=weights),
        version=3,
    )


def small_base(model: SimilarityModel, rows: dict[str, dict[str, float]]) -> CaseBase:
    cases = tuple(Case(id=case_id, values=values) for case_id, values in rows.items())
    return CaseBase(name="mini", schema=model.schema, cases=cases)


class TestRetrieve:
    def test_identical_case_ranks_first_with_full_score(self):
        model = linear_model({"A": 1.0, "B": 1.0})
        query = Case("q", {"A": 2.0, "B": 7.0})
        base = small_base(
            model,
            {
                "c1": {"A": 2.0, "B": 7.0},
                "c2": {"A": 9.0, "B": 1.0},
                "c3": {"A": 4.0, "B": 4.0},
            },
        )
        result = retrieve(model, base, query, k=3)
        assert result.entries[0].case_id == "c1"
        assert result.entries[0].score == pytest.approx(1.0)

    def test_three_case_ranking_matches_hand_computed_scores(self):
        model = linear_model({"A": 1.0, "B": 1.0})
        query = Case("q", {"A": 0.0, "B": 0.0})
        base = small_base(
            model,
            {
                "c1": {"A": 4.0, "B": 4.0},  # sims 0.6/0.6 -> 0.60
                "c2": {"A": 1.0, "B": 2.0},  # sims 0.9/0.8 -> 0.85
                "c3": {"A": 8.0, "B": 9.0},  # sims 0.2/0.1 -> 0.15
            },
        )
        expected = sorted(
            ((cid, global_similarity(model, query, base.case(cid))) for cid in ("c1", "c2", "c3")),
            key=lambda pair: (-pair[1], pair[0]),
        )
        result = retrieve(model, base, query, k=3)
        assert [e.case_id for e in result.entries] == [cid for cid, _ in expected]
        assert [e.case_id for e in result.entries] == ["c2", "c1", "c3"]
        assert result.entries[0].score == pytest.approx(0.85, abs=1e-12)

    def test_k_larger_than_base_returns_everything_sorted(self):
        model = linear_model({"A": 1.0})
        base = small_base(model, {"c1": {"A": 1.0}, "c2": {"A": 2.0}})
        result = retrieve(model, base, Case("q", {"A": 0.0}), k=10)
        assert len(result.entries) == 2
        scores = [e.score for e in result.entries]
        assert scores == sorted(scores, reverse=True)

    def test_empty_base_yields_empty_result(self):
        model = linear_model({"A": 1.0})
        base = CaseBase(name="empty", schema=model.schema, cases=())
        result = retrieve(model, base, Case("q", {"A": 0.0}), k=3)
        assert result.entries == ()

    def test_schema_mismatch_is_validation_error(self):
        model = linear_model({"A": 1.0})
        other = linear_model({"X": 1.0})
        base = small_base(other, {"c1": {"X": 1.0}})
        with pytest.raises(ValidationError):
            retrieve(model, base, Case("q", {"A": 0.0}), k=1)

    def test_k_below_one_rejected(self):
        model = linear_model({"A": 1.0})
        base = small_base(model, {"c1": {"A": 1.0}})
        with pytest.raises(ValueError):
            retrieve(model, base, Case("q", {"A": 0.0}), k=0)

    def test_ties_break_by_ascending_case_id(self):
        model = linear_model({"A": 1.0})
        base = small_base(model, {"z": {"A": 5.0}, "a": {"A": 5.0}, "m": {"A": 5.0}})
        result = retrieve(model, base, Case("q", {"A": 5.0}), k=3)
        assert [e.case_id for e in result.entries] == ["a", "m", "z"]

    def test_result_carries_model_version_and_query(self):
        model = linear_model({"A": 1.0})
        base = small_base(model, {"c1": {"A": 1.0}})
        query = Case("q", {"A": 0.5})
        result = retrieve(model, base, query, k=1)
        assert result.model_version == model.version == 3
        assert result.query is query

    def test_oracle_equivalence_on_random_bases(self):
        rng = random.Random(977)
        for _ in range(25):
            model = random_model(rng)
            base = random_casebase(rng, model, rng.randint(1, 60))
            query = random_case(rng, model, "q")
            result = retrieve(model, base, query, k=len(base))
            oracle = sorted(
                ((c.id, global_similarity(model, query, c)) for c in base.cases),
                key=lambda pair: (-pair[1], pair[0]),
            )
            assert [e.case_id for e in result.entries] == [cid for cid, _ in oracle]

    def test_truncation_matches_full_retrieval_prefix(self):
        rng = random.Random(31)
        for _ in range(10):
            model = random_model(rng)
            base = random_casebase(rng, model, 40)
            query = random_case(rng, model, "q")
            full = retrieve(model, base, query, k=len(base))
            for k in (1, 7, 40):
                assert [e.case_id for e in retrieve(model, base, query, k).entries] == [
                    e.case_id for e in full.entries[:k]
                ]

    def test_ranking_invariant_under_weight_scaling(self):
        rng = random.Random(5150)
        for _ in range(10):
            model = random_model(rng)
            base = random_casebase(rng, model, 30)
            query = random_case(rng, model, "q")
            reference = [e.case_id for e in retrieve(model, base, query, k=len(base)).entries]
            for scale in (0.01, 3.0, 1000.0):
                scaled = model.with_weights(
                    {n: w * scale for n, w in model.amalgamation.weights.items()}
                )
                assert [
                    e.case_id for e in retrieve(scaled, base, query, k=len(base)).entries
                ] == reference

    def test_two_runs_serialize_to_identical_bytes(self):
        rng = random.Random(8)
        model = random_model(rng)
        base = random_casebase(rng, model, 25)
        query = random_case(rng, model, "q")
        first = dumps(result_to_doc(retrieve(model, base, query, k=10)))
        second = dumps(result_to_doc(retrieve(model, base, query, k=10)))
        assert first == second

    def test_concurrent_retrieval_on_shared_snapshot(self):
        from concurrent.futures import ThreadPoolExecutor

        rng = random.Random(314)
        model = random_model(rng)
        base = random_casebase(rng, model, 60)
        query = random_case(rng, model, "q")
        expected = dumps(result_to_doc(retrieve(model, base, query, k=20)))
        with ThreadPoolExecutor(max_workers=8) as pool:
            futures = [
                pool.submit(lambda: dumps(result_to_doc(retrieve(model, base, query, k=20))))
                for _ in range(32)
            ]
            assert all(f.result() == expected for f in futures)


class TestExplain:
    def test_identical_pair_rows_sum_to_one(self):
        model = linear_model({"A": 2.0, "B": 3.0})
        case = Case("c", {"A": 4.0, "B": 9.0})
        explanation = explain(model, Case("q", dict(case.values)), case)
        for row in explanation.rows:
            assert row.local_sim == 1.0
            assert row.contribution == pytest.approx(row.weight_normalized)
        assert explanation.score == pytest.approx(1.0, abs=1e-12)

    def test_hand_computed_contributions(self):
        # weights {A:2, B:1, C:1}, locals {1.0, 0.5, 0.0}
        model = linear_model({"A": 2.0, "B": 1.0, "C": 1.0})
        query = Case("q", {"A": 0.0, "B": 0.0, "C": 0.0})
        case = Case("c", {"A": 0.0, "B": 5.0, "C": 10.0})
        explanation = explain(model, query, case)
        contributions = [row.contribution for row in explanation.rows]
        assert contributions == pytest.approx([0.5, 0.125, 0.0], abs=1e-12)
        assert explanation.score == pytest.approx(0.625, abs=1e-12)

    def test_missing_attribute_row_flagged_and_renormalized(self):
        model = linear_model({"A": 2.0, "B": 1.0, "C": 1.0})
        query = Case("q", {"A": 0.0, "B": None, "C": 0.0})
        case = Case("c", {"A": 0.0, "B": 5.0, "C": 10.0})
        explanation = explain(model, query, case)
        by_name = {row.attribute: row for row in explanation.rows}
        assert by_name["B"].missing
        assert by_name["B"].weight_normalized is None
        assert by_name["B"].contribution is None
        assert by_name["B"].weight_raw == 1.0
        resolved = [row for row in explanation.rows if not row.missing]
        assert sum(row.weight_normalized for row in resolved) == pytest.approx(1.0, abs=1e-12)
        assert explanation.score == pytest.approx(
            global_similarity(model, query, case), abs=1e-9
        )

    def test_no_overlap_flag(self):
        model = linear_model({"A": 1.0})
        explanation = explain(model, Case("q", {"A": None}), Case("c", {"A": 1.0}))
        assert explanation.no_overlap
        assert explanation.score == 0.0

    def test_zero_weight_attribute_contributes_nothing(self):
        weighted = linear_model({"A": 1.0, "B": 1.0})
        silenced = weighted.with_weights({"A": 1.0, "B": 0.0})
        query = Case("q", {"A": 2.0, "B": 0.0})
        case = Case("c", {"A": 4.0, "B": 9.0})
        explanation = explain(silenced, query, case)
        by_name = {row.attribute: row for row in explanation.rows}
        assert by_name["B"].contribution == 0.0
        assert by_name["B"].weight_raw == 0.0
        # the score now tracks A alone
        assert explanation.score == pytest.approx(
            global_similarity(silenced, query, Case("c", {"A": 4.0, "B": 2.0})), abs=1e-12
        )

    def test_decomposition_identity_on_random_triples(self):
        rng = random.Random(4242)
        for _ in range(200):
            model = random_model(rng)
            query = random_case(rng, model, "q")
            case = random_case(rng, model, "c")
            explanation = explain(model, query, case)
            assert explanation.score == pytest.approx(
                global_similarity(model, query, case), abs=1e-9
            )
            resolved = [r for r in explanation.rows if r.weight_normalized is not None]
            if resolved:
                assert sum(r.weight_normalized for r in resolved) == pytest.approx(
                    1.0, abs=1e-12
                )

    def test_retrieval_entries_carry_consistent_explanations(self):
        rng = random.Random(99)
        model = random_model(rng)
        base = random_casebase(rng, model, 20)
        query = random_case(rng, model, "q")
        for entry in retrieve(model, base, query, k=5).entries:
            assert entry.explanation.score == pytest.approx(entry.score, abs=1e-9)
