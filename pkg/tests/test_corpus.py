"""Tests for corpus ingestion, dataset statistics and Fleiss' kappa."""

from __future__ import annotations

import json
import random

import pytest
from fixtures import ACCEPTANCE_FIXTURES, ALL_FIXTURES, GSM8K_AGES

from rgraph.corpus import (
    OVERALL_LABEL,
    CorpusRecord,
    KappaResult,
    corpus_stats,
    fleiss_kappa,
    fleiss_kappa_details,
    ingest,
    ingest_lines,
    record_from_strings,
    render_stats,
    write_records,
)
from rgraph.errors import FileUnreadableError, InsufficientRatersError, SchemaError
from rgraph.scone import Drain, Mix, Pour, generate, generate_records
from rgraph.scone.worlds import AddBack, Appear, Delete, Leave, Move, Swap


def fixture_line(fx, **extra) -> str:
    obj = {"id": fx.name, "task": fx.task, "question": fx.question, "proof": fx.proof}
    obj.update(extra)
    return json.dumps(obj)


# ---------------------------------------------------------------------------
# Ingestion.
# ---------------------------------------------------------------------------


class TestIngest:
    def test_bundled_scenarios_all_load(self):
        report = ingest_lines([fixture_line(fx) for fx in ACCEPTANCE_FIXTURES])
        assert report.ok
        assert len(report.records) == 7
        assert [r.id for r in report.records] == [f.name for f in ACCEPTANCE_FIXTURES]

    def test_empty_input(self):
        report = ingest_lines([])
        assert report.records == () and report.errors == ()

    def test_blank_lines_skipped(self):
        report = ingest_lines(["", "   ", fixture_line(GSM8K_AGES), "\t"])
        assert report.ok
        assert len(report.records) == 1

    def test_invalid_json_collected_with_line_number(self):
        report = ingest_lines(
            [fixture_line(GSM8K_AGES), "{not json", fixture_line(ALL_FIXTURES[1])]
        )
        assert len(report.records) == 2
        assert len(report.errors) == 1
        assert report.errors[0].line_no == 2
        assert "invalid JSON" in report.errors[0].message

    def test_non_object_line(self):
        report = ingest_lines(["[1, 2, 3]"])
        assert "not a JSON object" in report.errors[0].message

    def test_missing_key(self):
        line = json.dumps({"id": "x", "task": "gsm8k", "question": "(1) q"})
        report = ingest_lines([line])
        assert "missing required key 'proof'" in report.errors[0].message

    def test_non_string_key(self):
        line = json.dumps(
            {"id": 7, "task": "gsm8k", "question": "(1) q", "proof": "p"}
        )
        report = ingest_lines([line])
        assert "'id' is not a string" in report.errors[0].message

    def test_empty_proof_rejected(self):
        line = json.dumps(
            {"id": "x", "task": "gsm8k", "question": "(1) q", "proof": "  "}
        )
        report = ingest_lines([line])
        assert "'proof' is empty" in report.errors[0].message

    def test_unknown_task(self):
        line = fixture_line(GSM8K_AGES).replace('"gsm8k"', '"sudoku"')
        report = ingest_lines([line])
        assert not report.records
        assert "sudoku" in report.errors[0].message

    def test_unparseable_gold_proof(self):
        fx = GSM8K_AGES
        line = json.dumps(
            {"id": "x", "task": fx.task, "question": fx.question, "proof": "nonsense"}
        )
        report = ingest_lines([line])
        assert "does not parse" in report.errors[0].message

    def test_cyclic_proof_fails_only_its_own_line(self):
        cyclic = json.dumps(
            {
                "id": "loop",
                "task": "gsm8k",
                "question": GSM8K_AGES.question,
                "proof": "(6) -> (5): needs the future.; (5) -> (6): The answer is 1;",
            }
        )
        report = ingest_lines([fixture_line(GSM8K_AGES), cyclic])
        assert len(report.records) == 1
        assert len(report.errors) == 1
        assert report.errors[0].line_no == 2

    def test_invalid_gold_graph_rejected(self):
        # Parses fine but the sink never states an answer.
        line = json.dumps(
            {
                "id": "x",
                "task": "gsm8k",
                "question": "(1) One. (2) How many?",
                "proof": "(1) -> (3): It is one.;",
            }
        )
        report = ingest_lines([line])
        assert "invalid" in report.errors[0].message

    def test_duplicate_ids_rejected_after_first(self):
        report = ingest_lines([fixture_line(GSM8K_AGES), fixture_line(GSM8K_AGES)])
        assert len(report.records) == 1
        assert report.errors[0].line_no == 2
        assert "duplicate" in report.errors[0].message

    def test_predicted_proof_carried_through(self):
        line = fixture_line(GSM8K_AGES, predicted_proof=GSM8K_AGES.proof)
        report = ingest_lines([line])
        assert report.records[0].predicted_proof == GSM8K_AGES.proof

    def test_predicted_proof_must_be_string(self):
        line = fixture_line(GSM8K_AGES, predicted_proof=42)
        report = ingest_lines([line])
        assert "'predicted_proof' is not a string" in report.errors[0].message

    def test_ingest_missing_file(self, tmp_path):
        with pytest.raises(FileUnreadableError):
            ingest(str(tmp_path / "nope.jsonl"))

    def test_write_then_ingest_is_lossless(self, tmp_path):
        records = generate_records(21, "scene", n_records=6, with_predictions=True)
        path = tmp_path / "corpus.jsonl"
        write_records(str(path), records)
        report = ingest(str(path))
        assert report.ok
        assert len(report.records) == 6
        for original, loaded in zip(records, report.records):
            assert loaded.id == original.id
            assert loaded.task == original.task
            assert loaded.gold.nodes == original.gold.nodes
            assert loaded.gold.edges == original.gold.edges
            assert loaded.predicted_proof == original.predicted_proof

    def test_rewrite_is_bit_exact(self, tmp_path):
        records = generate_records(5, "alchemy", n_records=4)
        first = tmp_path / "a.jsonl"
        second = tmp_path / "b.jsonl"
        write_records(str(first), records)
        write_records(str(second), ingest(str(first)).records)
        assert first.read_bytes() == second.read_bytes()


class TestRecordFromStrings:
    def test_builds_validated_record(self):
        record = record_from_strings(
            "ages", "gsm8k", GSM8K_AGES.question, GSM8K_AGES.proof
        )
        assert isinstance(record, CorpusRecord)
        assert record.task.name == "gsm8k"
        assert len(record.gold.step_ids) == 5

    def test_accepts_task_spec_object(self):
        record = record_from_strings(
            "ages", "gsm8k", GSM8K_AGES.question, GSM8K_AGES.proof
        )
        again = record_from_strings(
            "ages2", record.task, GSM8K_AGES.question, GSM8K_AGES.proof
        )
        assert again.task is record.task

    def test_invalid_gold_raises_schema_error(self):
        with pytest.raises(SchemaError) as err:
            record_from_strings(
                "x", "gsm8k", "(1) One. (2) How many?", "(1) -> (3): It is one.;"
            )
        assert "invalid" in err.value.message


# ---------------------------------------------------------------------------
# Dataset statistics.
# ---------------------------------------------------------------------------

STEPS_PER_ACTION = {
    Drain: 1,
    Mix: 1,
    Pour: 2,
    Appear: 1,
    Leave: 1,
    Move: 2,
    Swap: 2,
    Delete: 1,
    AddBack: 1,
}


def expected_step_count(trace) -> int:
    return sum(STEPS_PER_ACTION[type(a)] for a in trace.actions)


class TestCorpusStats:
    def test_single_fixture_counts(self):
        record = record_from_strings(
            "ages", "gsm8k", GSM8K_AGES.question, GSM8K_AGES.proof
        )
        stats = corpus_stats([record])
        assert stats.overall.n_questions == 1
        assert stats.overall.n_steps == 5
        assert stats.overall.mean_steps == 5.0
        assert [t.task for t in stats.per_task] == ["gsm8k"]

    def test_empty_corpus_zeroed(self):
        stats = corpus_stats([])
        assert stats.per_task == ()
        assert stats.overall.task == OVERALL_LABEL
        assert stats.overall.n_questions == 0
        assert stats.overall.n_steps == 0
        assert stats.overall.mean_steps == 0.0
        assert stats.overall.frac_in_degree_ge_2 == 0.0

    def test_generated_corpus_matches_closed_form(self):
        records = generate_records(31, "alchemy", n_records=40, n_actions=5)
        traces = [generate(31 + i, "alchemy", 5) for i in range(40)]
        expected_total = sum(expected_step_count(t) for t in traces)
        stats = corpus_stats(records)
        assert stats.overall.n_questions == 40
        assert stats.overall.n_steps == expected_total
        assert stats.overall.mean_steps == expected_total / 40
        # Every emitted step cites at least a prior state and the action.
        assert stats.overall.frac_in_degree_ge_2 == 1.0

    def test_in_degree_histogram_shape_for_generated_corpus(self):
        records = generate_records(13, "scene", n_records=30)
        hist = corpus_stats(records).overall.in_degree_histogram
        # Scene steps have 2 premises, except a move's destination step (3).
        assert set(hist) <= {2, 3}
        assert sum(hist.values()) == corpus_stats(records).overall.n_steps

    def test_histogram_mass_conservation(self):
        records = []
        for sub in ("alchemy", "scene", "tangrams"):
            records.extend(generate_records(17, sub, n_records=10))
        stats = corpus_stats(records)
        for task_stats in (*stats.per_task, stats.overall):
            assert sum(task_stats.step_histogram.values()) == task_stats.n_questions
            assert sum(task_stats.in_degree_histogram.values()) == task_stats.n_steps
            assert 0.0 <= task_stats.frac_over_10_steps <= 1.0
            assert 0.0 <= task_stats.frac_in_degree_ge_2 <= 1.0

    def test_task_breakdown_order_and_overall(self):
        records = generate_records(3, "tangrams", n_records=2)
        records += generate_records(3, "alchemy", n_records=2)
        stats = corpus_stats(records)
        assert [t.task for t in stats.per_task] == ["scone-alchemy", "scone-tangrams"]
        assert stats.overall.n_questions == 4

    def test_order_invariance(self):
        records = []
        for sub in ("alchemy", "scene", "tangrams"):
            records.extend(generate_records(29, sub, n_records=8))
        forward = corpus_stats(records)
        shuffled = list(records)
        random.Random(0).shuffle(shuffled)
        assert corpus_stats(shuffled).to_json() == forward.to_json()

    def test_frac_over_10_steps(self):
        long_records = generate_records(41, "alchemy", n_records=5, n_actions=12)
        stats = corpus_stats(long_records)
        assert stats.overall.frac_over_10_steps == 1.0

    def test_render_contains_sections_and_overall(self):
        records = generate_records(7, "scene", n_records=3)
        text = render_stats(corpus_stats(records))
        assert "[scone-scene]" in text
        assert f"[{OVERALL_LABEL}]" in text
        assert "mean steps per question:" in text
        assert "premises per step:" in text

    def test_render_caps_step_histogram_display(self):
        records = generate_records(19, "alchemy", n_records=3, n_actions=14)
        text = render_stats(corpus_stats(records))
        assert "15+" in text

    def test_render_caps_in_degree_display(self):
        question = " ".join(f"({i}) Fact {i}." for i in range(1, 9))
        question += " (9) How many?"
        premises = " & ".join(f"({i})" for i in range(1, 9))
        proof = f"{premises} -> (10): The answer is 1;"
        record = record_from_strings("wide", "gsm8k", question, proof)
        text = render_stats(corpus_stats([record]))
        assert "8+" in text

    def test_to_json_is_json_serializable(self):
        records = generate_records(2, "tangrams", n_records=3)
        payload = corpus_stats(records).to_json()
        assert json.loads(json.dumps(payload)) == payload
        assert payload["overall"]["questions"] == 3


# ---------------------------------------------------------------------------
# Fleiss' kappa.
# ---------------------------------------------------------------------------

# Published five-category worked example: 10 subjects, 14 raters each.
CLASSIC_TABLE = (
    (0, 0, 0, 0, 14),
    (0, 2, 6, 4, 2),
    (0, 0, 3, 5, 6),
    (0, 3, 9, 2, 0),
    (2, 2, 8, 1, 1),
    (7, 7, 0, 0, 0),
    (3, 2, 6, 3, 0),
    (2, 5, 3, 2, 2),
    (6, 5, 2, 1, 0),
    (0, 2, 2, 3, 7),
)

BINARY_TABLE = ((3, 0), (2, 1), (1, 2), (0, 3), (3, 0))


class TestFleissKappa:
    def test_classic_worked_example_to_4dp(self):
        result = fleiss_kappa_details(CLASSIC_TABLE)
        assert round(result.kappa, 4) == 0.2099
        assert round(result.observed_agreement, 3) == 0.378
        assert round(result.expected_agreement, 3) == 0.213
        assert not result.degenerate

    def test_binary_worked_example_to_4dp(self):
        result = fleiss_kappa_details(BINARY_TABLE)
        assert round(result.kappa, 4) == 0.4444  # exactly 4/9
        assert not result.degenerate

    def test_perfect_agreement_across_categories(self):
        result = fleiss_kappa_details(((4, 0), (0, 4), (4, 0)))
        assert result.kappa == 1.0
        assert not result.degenerate

    def test_single_category_throughout_is_degenerate(self):
        result = fleiss_kappa_details(((4, 0), (4, 0), (4, 0)))
        assert result == KappaResult(1.0, 1.0, 1.0, degenerate=True)

    def test_coin_flip_raters_drift_to_zero(self):
        rng = random.Random(2024)
        rows = []
        for _ in range(10_000):
            a, b = rng.randint(0, 1), rng.randint(0, 1)
            rows.append(((a == 0) + (b == 0), (a == 1) + (b == 1)))
        assert abs(fleiss_kappa(rows)) <= 0.05

    def test_convenience_wrapper_matches_details(self):
        assert fleiss_kappa(CLASSIC_TABLE) == fleiss_kappa_details(CLASSIC_TABLE).kappa

    def test_empty_table_rejected(self):
        with pytest.raises(InsufficientRatersError):
            fleiss_kappa_details(())

    def test_single_rater_rejected(self):
        with pytest.raises(InsufficientRatersError):
            fleiss_kappa_details(((1, 0), (0, 1)))

    def test_ragged_table_rejected(self):
        with pytest.raises(InsufficientRatersError):
            fleiss_kappa_details(((2, 1), (1, 1, 1)))

    def test_inconsistent_rater_count_rejected(self):
        with pytest.raises(InsufficientRatersError):
            fleiss_kappa_details(((2, 1), (2, 2)))

    def test_negative_count_rejected(self):
        with pytest.raises(InsufficientRatersError):
            fleiss_kappa_details(((4, -1), (2, 1)))

    def test_kappa_never_exceeds_one(self):
        rng = random.Random(8)
        for _ in range(200):
            n_raters = rng.randint(2, 6)
            rows = []
            for _ in range(rng.randint(1, 12)):
                left = rng.randint(0, n_raters)
                rows.append((left, n_raters - left))
            result = fleiss_kappa_details(rows)
            assert result.kappa <= 1.0 + 1e-12

    def test_kappa_is_one_iff_unanimous(self):
        rng = random.Random(9)
        for _ in range(200):
            n_raters = rng.randint(2, 6)
            rows = [
                (0, n_raters) if rng.random() < 0.5 else (n_raters, 0)
                for _ in range(rng.randint(1, 12))
            ]
            assert fleiss_kappa(rows) == 1.0
        mixed = ((3, 1), (0, 4), (4, 0))
        assert fleiss_kappa(mixed) < 1.0
