from __future__ import annotations

import dataclasses
import json

import pytest

from faqkit.config import RunConfig
from faqkit.corpus import OUT_OF_KB
from faqkit.generation import AnswerResult, fallback_result
from faqkit.harness import (
    EvalReport,
    RunArtifacts,
    SystemEval,
    SystemFiles,
    compare,
    emit_report,
    evaluate,
    load_artifacts,
    question_qrels,
    render_table,
    run_batch,
    system_label,
    write_question_qrels,
)
from faqkit.metrics import PRF, MetricRow, aggregate
from faqkit.ranking import write_trec_run, Ranking, ScoredPassage


@pytest.fixture(scope="module")
def ib_only_config():
    config = RunConfig.default()
    return dataclasses.replace(config, pipelines=("ib",))


@pytest.fixture(scope="module")
def ib_artifacts(tmp_path_factory, testbed, ib_only_config, engine):
    out = tmp_path_factory.mktemp("ib-run")
    return run_batch(testbed, ib_only_config, out, engine)


def test_run_batch_ib_answer_count(ib_artifacts, testbed):
    answers_file = ib_artifacts.systems[0].answers_file
    lines = [l for l in open(answers_file) if l.strip()]
    assert len(lines) == 106
    qids = {json.loads(l)["question_id"] for l in lines}
    assert qids == {q.id for q in testbed.questions}


def test_run_batch_writes_one_run_file_per_cutoff(tmp_path, testbed, engine, default_config):
    config = dataclasses.replace(default_config, pipelines=("rag-bm25",), cutoffs=(1, 3, 5))
    artifacts = run_batch(testbed, config, tmp_path / "runs", engine)
    assert [s.label for s in artifacts.systems] == ["rag-bm25@1", "rag-bm25@3", "rag-bm25@5"]
    for system in artifacts.systems:
        assert system.run_file.exists()
        assert system.answers_file.exists()


def test_run_batch_deterministic(tmp_path, testbed, engine, default_config):
    config = dataclasses.replace(default_config, pipelines=("ib", "rag-bm25"), cutoffs=(1, 3))
    a = run_batch(testbed, config, tmp_path / "a", engine)
    b = run_batch(testbed, config, tmp_path / "b", engine)
    for sa, sb in zip(a.systems, b.systems):
        assert sa.run_file.read_bytes() == sb.run_file.read_bytes()
        assert sa.answers_file.read_bytes() == sb.answers_file.read_bytes()


def test_run_batch_parallel_matches_serial(tmp_path, testbed, engine, default_config):
    serial = dataclasses.replace(default_config, pipelines=("rag-bm25",), cutoffs=(3,))
    parallel = dataclasses.replace(serial, workers=4)
    a = run_batch(testbed, serial, tmp_path / "serial", engine)
    b = run_batch(testbed, parallel, tmp_path / "parallel", engine)
    assert a.systems[0].run_file.read_bytes() == b.systems[0].run_file.read_bytes()
    assert a.systems[0].answers_file.read_bytes() == b.systems[0].answers_file.read_bytes()


def test_run_batch_records_partial_failures(tmp_path, testbed, engine, ib_only_config):
    class FlakyEngine:
        def answer(self, question, mode, cutoff):
            if question.id == "q002":
                raise RuntimeError("synthetic outage")
            return engine.answer(question, mode, cutoff)

    artifacts = run_batch(testbed, ib_only_config, tmp_path / "flaky", FlakyEngine())
    assert artifacts.failures["ib"] == 1
    records = [json.loads(l) for l in open(artifacts.systems[0].answers_file)]
    assert len(records) == 106  # batch completed despite the failure
    errored = [r for r in records if r.get("error")]
    assert len(errored) == 1 and errored[0]["question_id"] == "q002"
    # evaluation skips the errored row from means but keeps it in counts
    report = evaluate(artifacts, testbed, ib_only_config)
    assert report.systems[0].sections["known"].failures == 1
    assert report.systems[0].sections["known"].count == 84


def test_artifacts_manifest_round_trip(ib_artifacts):
    loaded = load_artifacts(ib_artifacts.out_dir)
    assert [s.label for s in loaded.systems] == [s.label for s in ib_artifacts.systems]
    assert loaded.failures == ib_artifacts.failures


def test_run_files_are_strict_trec(ib_artifacts, testbed, tmp_path, engine, default_config):
    config = dataclasses.replace(default_config, pipelines=("rag-bm25",), cutoffs=(5,))
    artifacts = run_batch(testbed, config, tmp_path / "trec", engine)
    qids = {q.id for q in testbed.questions}
    pids = set(testbed.passages.ids())
    for line in open(artifacts.systems[0].run_file):
        fields = line.split()
        assert len(fields) == 6
        qid, q0, pid, rank, score, tag = fields
        assert qid in qids and q0 == "Q0" and pid in pids
        int(rank)
        float(score)
        assert tag == config.run_tag


def test_question_qrels_expand_topics(testbed, tmp_path):
    expanded = question_qrels(testbed)
    known = [q for q in testbed.questions if q.qtype == "known"]
    # every known question inherits its topic's graded passages
    sample = known[0]
    mine = {j.passage_id: j.grade for j in expanded if j.topic == sample.id}
    assert mine == testbed.graded_passages(sample.topic)
    path = tmp_path / "qq.txt"
    write_question_qrels(testbed, path)
    assert len(open(path).readlines()) == len(expanded)


# ---------------------------------------------------------------- evaluate

def _write_answers(path, results):
    with open(path, "w", encoding="utf-8") as fh:
        for r in results:
            fh.write(json.dumps(r.to_dict()) + "\n")


def _synthetic_artifacts(tmp_path, testbed, perfect: bool) -> RunArtifacts:
    """Either a perfect system (gold text + ideal rankings) or all-fallback."""
    run_file = tmp_path / "sys.run"
    answers_file = tmp_path / "sys.answers.jsonl"
    rankings, results = [], []
    for q in testbed.questions:
        gold = testbed.gold_answer_for(q)
        graded = sorted(
            testbed.graded_passages(q.topic).items(), key=lambda kv: (-kv[1], kv[0])
        )
        if perfect and q.qtype != OUT_OF_KB:
            entries = tuple(
                ScoredPassage(pid, float(len(graded) - i)) for i, (pid, _) in enumerate(graded)
            )
            rankings.append(Ranking(q.id, entries[:5], cutoff=5))
            results.append(
                AnswerResult(q.id, gold.text, True, tuple(p for p, _ in graded), "rag-bm25", 5)
            )
        else:
            rankings.append(Ranking(q.id, (), cutoff=5))
            results.append(fallback_result(q.id, "rag-bm25", 5))
    write_trec_run(rankings, run_file, "synthetic")
    _write_answers(answers_file, results)
    return RunArtifacts(
        out_dir=tmp_path,
        systems=[SystemFiles("rag-bm25", 5, run_file, answers_file)],
        failures={"rag-bm25@5": 0},
    )


def test_evaluate_perfect_system(tmp_path, testbed, default_config):
    artifacts = _synthetic_artifacts(tmp_path, testbed, perfect=True)
    report = evaluate(artifacts, testbed, default_config)
    sections = report.systems[0].sections
    assert sections["known"].ndcg == pytest.approx(1.0)
    assert sections["known"].rouge1.f1 == pytest.approx(1.0)
    assert sections["known"].bertscore.f1 == pytest.approx(1.0, abs=1e-6)
    assert sections["inferred"].ndcg == pytest.approx(1.0)
    # fallback answers equal the out-of-KB gold answer exactly
    assert sections["out_of_kb"].unanswered_pct == pytest.approx(100.0)
    assert sections["out_of_kb"].rouge1.f1 == pytest.approx(1.0)


def test_evaluate_all_fallback_system(tmp_path, testbed, default_config):
    artifacts = _synthetic_artifacts(tmp_path, testbed, perfect=False)
    report = evaluate(artifacts, testbed, default_config)
    sections = report.systems[0].sections
    assert sections["out_of_kb"].unanswered_pct == pytest.approx(100.0)
    assert sections["known"].ndcg == pytest.approx(0.0)
    assert sections["known"].rouge1.f1 < 0.15


def test_evaluate_row_coverage(ib_artifacts, testbed, ib_only_config):
    report = evaluate(ib_artifacts, testbed, ib_only_config)
    assert len(report.systems[0].rows) == len(testbed.questions)


def test_evaluate_missing_answer_record_raises(tmp_path, testbed, default_config):
    artifacts = _synthetic_artifacts(tmp_path, testbed, perfect=False)
    # drop one record
    lines = open(artifacts.systems[0].answers_file).readlines()
    with open(artifacts.systems[0].answers_file, "w") as fh:
        fh.writelines(lines[1:])
    with pytest.raises(ValueError, match="q001"):
        evaluate(artifacts, testbed, default_config)


def test_eval_report_json_round_trip(tmp_path, ib_artifacts, testbed, ib_only_config):
    report = evaluate(ib_artifacts, testbed, ib_only_config)
    path = tmp_path / "report.json"
    report.save(path)
    loaded = EvalReport.load(path)
    assert loaded.to_dict() == report.to_dict()


# ----------------------------------------------------------------- compare

def _synthetic_report(fingerprint, label_value_pairs, n=20):
    """One report per call; each system has constant-ish known-rows scores."""
    systems = []
    for label, value in label_value_pairs:
        rows = []
        for i in range(n):
            # small deterministic wiggle so within-group variance is nonzero
            wiggle = 0.001 * (i % 5)
            rows.append(
                MetricRow(
                    question_id=f"q{i:03d}",
                    qtype="known",
                    ndcg=min(1.0, value + wiggle),
                    rouge1=PRF(value, value, min(1.0, value + wiggle)),
                    bertscore=PRF(value, value, min(1.0, value + wiggle)),
                    answered=True,
                )
            )
        pipeline, _, cutoff = label.partition("@")
        systems.append(
            SystemEval(
                pipeline=pipeline,
                cutoff=int(cutoff) if cutoff else None,
                rows=rows,
                sections=aggregate(rows),
            )
        )
    return EvalReport(
        collection_fingerprint=fingerprint,
        type_counts={"known": n, "inferred": 0, "out_of_kb": 0},
        embedder_id="hashed-ngram-256",
        ndcg_gain="linear",
        systems=systems,
    )


def test_compare_report_with_itself_yields_no_stars(ib_artifacts, testbed, ib_only_config):
    report = evaluate(ib_artifacts, testbed, ib_only_config)
    result = compare([report, report], alpha=0.01)
    for entry in result.entries.values():
        assert entry.starred == []
        assert all(not p.significant for p in entry.hsd.pairs)


def test_compare_seven_systems_has_21_pairs():
    labels = [("ib", 0.5), ("rag-bm25@1", 0.51), ("rag-bm25@3", 0.52), ("rag-bm25@5", 0.53),
              ("rag-dense@1", 0.54), ("rag-dense@3", 0.55), ("rag-dense@5", 0.56)]
    report = _synthetic_report("fp", labels)
    result = compare([report], alpha=0.01)
    entry = result.entries["known:ndcg"]
    assert len(entry.hsd.pairs) == 21


def test_compare_dominant_system_is_starred():
    report = _synthetic_report("fp", [("ib", 0.9), ("rag-bm25@1", 0.1), ("rag-dense@1", 0.12)])
    result = compare([report], alpha=0.01)
    assert result.entries["known:ndcg"].starred == ["ib"]


def test_compare_rejects_mismatched_collections():
    a = _synthetic_report("fp-a", [("ib", 0.5), ("rag-bm25@1", 0.6)])
    b = _synthetic_report("fp-b", [("rag-dense@1", 0.7)])
    with pytest.raises(ValueError, match="different collections"):
        compare([a, b])


def test_compare_requires_two_systems():
    report = _synthetic_report("fp", [("ib", 0.5)])
    with pytest.raises(ValueError, match="at least two systems"):
        compare([report])


def test_compare_rejects_mismatched_metric_options():
    a = _synthetic_report("fp", [("ib", 0.5)])
    b = _synthetic_report("fp", [("rag-bm25@1", 0.6)])
    b.embedder_id = "hashed-ngram-64"
    with pytest.raises(ValueError, match="metric options"):
        compare([a, b])


# ------------------------------------------------------------ emit_report

def test_emit_table_shape(testbed, default_config, engine, tmp_path):
    config = dataclasses.replace(default_config, cutoffs=(1, 3, 5))
    artifacts = run_batch(testbed, config, tmp_path / "full", engine)
    report = evaluate(artifacts, testbed, config)
    comparison = compare([report], alpha=0.01)
    table = emit_report(report, "table", comparison)
    lines = [l for l in table.splitlines() if l.strip()]
    # 2 header lines + separator + 7 system rows
    assert len(lines) == 3 + 7
    assert lines[0].count("|") == 3  # three question-type column groups
    assert "Known (84 questions)" in lines[0]
    assert "Inferred (12 questions)" in lines[0]
    assert "Out of KB (10 questions)" in lines[0]
    assert "*" in table  # IB is significantly better on out-of-KB metrics


def test_emit_json_round_trips_values(ib_artifacts, testbed, ib_only_config):
    report = evaluate(ib_artifacts, testbed, ib_only_config)
    payload = json.loads(emit_report(report, "json"))
    reloaded = EvalReport.from_dict(payload)
    assert render_table(reloaded) == render_table(report)


def test_emit_report_rejects_unknown_format(ib_artifacts, testbed, ib_only_config):
    report = evaluate(ib_artifacts, testbed, ib_only_config)
    with pytest.raises(ValueError):
        emit_report(report, "yaml")


def test_system_label():
    assert system_label("ib", None) == "ib"
    assert system_label("rag-bm25", 3) == "rag-bm25@3"
