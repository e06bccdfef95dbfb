"""Acceptance suite: one test per release criterion, at pinned tolerances.

Run with ``pytest tests/test_acceptance.py -s`` to see one PASS line per
criterion. Everything here runs offline against deterministic providers.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
import random
import time

import pytest

from faqkit.config import RunConfig
from faqkit.corpus import validate
from faqkit.dense import HashedNGramEmbedder
from faqkit.harness import compare, emit_report, evaluate, run_batch
from faqkit.lexical import bm25_score, build_index, search
from faqkit.corpus import Passage, PassageCorpus
from faqkit.metrics import bertscore, ndcg, rouge1
from faqkit.significance import pooled_mse, studentized_range_quantile

PASS = "ACCEPTANCE PASS:"


# ---------------------------------------------------------------------------
# Criterion 1: metric implementations match independent brute-force oracles
# on >= 1000 random small instances each, tolerance 1e-9 (1e-6 for bertscore
# with unit-norm embeddings), in under 60 seconds.
# ---------------------------------------------------------------------------

def _oracle_ndcg(ids, grades, cutoff):
    def dcg_of(seq):
        return sum(grades.get(p, 0) / math.log2(i + 2) for i, p in enumerate(seq[:cutoff]))

    judged = [p for p, g in grades.items() if g > 0]
    ideal = max(dcg_of(list(perm)) for perm in itertools.permutations(judged))
    return dcg_of(ids) / ideal


def _oracle_rouge1(cand, ref):
    remaining = list(ref)
    overlap = 0
    for token in cand:
        if token in remaining:
            remaining.remove(token)
            overlap += 1
    p = overlap / len(cand) if cand else 0.0
    r = overlap / len(ref)
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f1


def _oracle_bertscore(cand_vecs, ref_vecs):
    def cos(u, v):
        nu = math.sqrt(sum(x * x for x in u))
        nv = math.sqrt(sum(x * x for x in v))
        return sum(a * b for a, b in zip(u, v)) / (nu * nv) if nu and nv else 0.0

    p = sum(max(cos(c, r) for r in ref_vecs) for c in cand_vecs) / len(cand_vecs)
    r = sum(max(cos(c, r) for c in cand_vecs) for r in ref_vecs) / len(ref_vecs)
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f1


def _oracle_pooled_mse(groups):
    ss, n = 0.0, 0
    for values in groups.values():
        mean = sum(values) / len(values)
        ss += sum((v - mean) ** 2 for v in values)
        n += len(values)
    return ss / (n - len(groups)), n - len(groups)


def test_metric_oracles_brute_force_equivalence():
    started = time.monotonic()
    rng = random.Random(20240809)
    pool = [f"p{i}" for i in range(6)]
    words = ["ant", "bee", "cow", "doe", "elk", "fox", "gnu", "hen"]
    embedder = HashedNGramEmbedder(dim=32)

    for _ in range(1000):
        grades = {p: rng.choice([0, 1, 2]) for p in rng.sample(pool, rng.randint(1, 6))}
        if not any(g > 0 for g in grades.values()):
            grades[rng.choice(pool)] = 1
        ids = rng.sample(pool, rng.randint(0, 6))
        cutoff = rng.randint(1, 6)
        assert ndcg(ids, grades, cutoff) == pytest.approx(
            _oracle_ndcg(ids, grades, cutoff), abs=1e-9
        )

    for _ in range(1000):
        cand = [rng.choice(words) for _ in range(rng.randint(0, 12))]
        ref = [rng.choice(words) for _ in range(rng.randint(1, 12))]
        assert rouge1(" ".join(cand), " ".join(ref)) == pytest.approx(
            _oracle_rouge1(cand, ref), abs=1e-9
        )

    for _ in range(1000):
        cand = [rng.choice(words) for _ in range(rng.randint(1, 12))]
        ref = [rng.choice(words) for _ in range(rng.randint(1, 12))]
        expected = _oracle_bertscore(
            embedder.embed(cand).tolist(), embedder.embed(ref).tolist()
        )
        assert bertscore(" ".join(cand), " ".join(ref), embedder) == pytest.approx(
            expected, abs=1e-6
        )

    for _ in range(1000):
        groups = {
            f"g{i}": [rng.gauss(0, 1) for _ in range(rng.randint(2, 20))]
            for i in range(rng.randint(2, 5))
        }
        got = pooled_mse(groups)
        expected = _oracle_pooled_mse(groups)
        assert got[1] == expected[1]
        assert got[0] == pytest.approx(expected[0], abs=1e-9)

    elapsed = time.monotonic() - started
    assert elapsed < 60.0, f"oracle sweep took {elapsed:.1f}s"
    print(f"{PASS} metric oracles (4 x 1000 instances, {elapsed:.1f}s)")


# ---------------------------------------------------------------------------
# Criterion 2: the three-document BM25 worked example reproduces its
# hand-evaluated scores (tolerance 1e-3) and ranking.
# ---------------------------------------------------------------------------

def test_bm25_worked_example():
    corpus = PassageCorpus(
        [Passage("d1", "cat sat"), Passage("d2", "cat cat ran"), Passage("d3", "dog ran")]
    )
    index = build_index(corpus)
    s1 = bm25_score(index, ["cat"], "d1")
    s2 = bm25_score(index, ["cat"], "d2")
    assert s1 == pytest.approx(0.4992, abs=1e-3)
    assert s2 == pytest.approx(0.5982, abs=1e-3)
    assert search(index, "cat", cutoff=2).ids() == ["d2", "d1"]
    print(f"{PASS} BM25 fixture (0.4992 / 0.5982, ranking [d2, d1])")


# ---------------------------------------------------------------------------
# Criterion 3: studentized-range quantiles match published tables:
# q(0.05, 3, 10) within 0.01 of 3.88, and 20+ further cells within 0.02.
# ---------------------------------------------------------------------------

TABLE_CELLS = [
    (0.05, 2, 5, 3.64), (0.01, 2, 5, 5.70), (0.05, 3, 5, 4.60), (0.01, 3, 5, 6.98),
    (0.05, 4, 8, 4.53), (0.01, 4, 8, 6.20), (0.01, 3, 10, 5.27), (0.05, 5, 10, 4.65),
    (0.01, 5, 10, 6.14), (0.05, 6, 12, 4.75), (0.01, 6, 12, 6.10), (0.05, 7, 14, 4.83),
    (0.01, 7, 14, 6.08), (0.05, 8, 16, 4.90), (0.01, 8, 16, 6.08), (0.05, 9, 20, 4.90),
    (0.01, 9, 20, 5.97), (0.05, 10, 24, 4.92), (0.01, 10, 24, 5.92), (0.05, 2, 30, 2.89),
    (0.01, 2, 30, 3.89), (0.05, 4, 40, 3.79), (0.01, 4, 40, 4.70), (0.05, 5, 60, 3.98),
    (0.01, 5, 60, 4.82), (0.05, 6, 120, 4.10), (0.01, 6, 120, 4.87), (0.05, 3, 15, 3.67),
    (0.01, 3, 15, 4.84),
]


def test_studentized_range_against_published_tables():
    assert studentized_range_quantile(0.05, 3, 10) == pytest.approx(3.88, abs=0.01)
    assert len(TABLE_CELLS) >= 20
    for alpha, k, df, expected in TABLE_CELLS:
        got = studentized_range_quantile(alpha, k, df)
        assert got == pytest.approx(expected, abs=0.02), (alpha, k, df)
    print(f"{PASS} studentized-range quantiles (primary cell +-0.01, {len(TABLE_CELLS)} cells +-0.02)")


# ---------------------------------------------------------------------------
# Criterion 4: the bundled testbed has 120 passages, 106 questions split
# 84/12/10, and validates with zero invariant violations.
# ---------------------------------------------------------------------------

def test_testbed_integrity(testbed):
    assert len(testbed.passages) == 120
    assert len(testbed.questions) == 106
    counts = testbed.type_counts()
    assert counts == {"known": 84, "inferred": 12, "out_of_kb": 10}, counts
    report = validate(testbed)
    assert report.ok, report.violations
    print(f"{PASS} testbed integrity (120 passages, 106 questions, 84/12/10, 0 violations)")


# ---------------------------------------------------------------------------
# Criterion 5: RAG-BM25 NDCG on the bundled testbed within +-0.05 of the
# reference values 0.5119 / 0.4912 / 0.4733 at k = 1 / 3 / 5, in < 30 s.
# ---------------------------------------------------------------------------

RAG_BM25_NDCG_TARGETS = {1: 0.5119, 3: 0.4912, 5: 0.4733}


def test_rag_bm25_ndcg_reproduction(tmp_path, testbed, engine, default_config):
    started = time.monotonic()
    config = dataclasses.replace(default_config, pipelines=("rag-bm25",), cutoffs=(1, 3, 5))
    artifacts = run_batch(testbed, config, tmp_path / "runs", engine)
    report = evaluate(artifacts, testbed, config)
    observed = {}
    for cutoff, target in RAG_BM25_NDCG_TARGETS.items():
        section = report.system(f"rag-bm25@{cutoff}").sections["known"]
        observed[cutoff] = section.ndcg
        assert section.ndcg == pytest.approx(target, abs=0.05), (cutoff, section.ndcg)
    elapsed = time.monotonic() - started
    assert elapsed < 30.0, f"retrieval reproduction took {elapsed:.1f}s"
    summary = ", ".join(f"k={k}: {v:.4f}" for k, v in observed.items())
    print(f"{PASS} RAG-BM25 NDCG reproduction ({summary}; {elapsed:.1f}s)")


# ---------------------------------------------------------------------------
# Criterion 6: hallucination-risk contrast. The intent pipeline leaves at
# least 70% of out-of-KB questions unanswered at the default threshold,
# while RAG with the extractive generator (threshold 0) answers nearly all.
# ---------------------------------------------------------------------------

def test_out_of_kb_contrast(tmp_path, testbed, engine, default_config):
    config = dataclasses.replace(default_config, pipelines=("ib", "rag-bm25"), cutoffs=(1,))
    assert config.tau == 0.35
    assert config.generator.kind == "extractive" and config.generator.threshold == 0.0
    artifacts = run_batch(testbed, config, tmp_path / "oob", engine)
    report = evaluate(artifacts, testbed, config)
    ib_rate = report.system("ib").sections["out_of_kb"].unanswered_pct
    rag_rate = report.system("rag-bm25@1").sections["out_of_kb"].unanswered_pct
    assert ib_rate >= 70.0, ib_rate
    assert rag_rate <= 10.0, rag_rate
    print(f"{PASS} out-of-KB contrast (IB {ib_rate:.0f}% unanswered, RAG-BM25@1 {rag_rate:.0f}%)")


# ---------------------------------------------------------------------------
# Criterion 7: end-to-end determinism. Re-running batch answering with the
# deterministic providers produces byte-identical run and answer files.
# ---------------------------------------------------------------------------

def test_end_to_end_determinism(tmp_path):
    # two separate CLI processes, not just two in-process calls
    import subprocess
    import sys

    args = [
        sys.executable, "-m", "faqkit.cli", "run-batch",
        "--pipeline", "ib", "--pipeline", "rag-bm25",
        "--cutoff", "1", "--cutoff", "3", "--cutoff", "5",
    ]
    for out in ("one", "two"):
        proc = subprocess.run(
            args + ["--out", str(tmp_path / out)], capture_output=True, text=True
        )
        assert proc.returncode == 0, proc.stderr
    names = sorted(
        p.name for p in (tmp_path / "one").iterdir() if p.suffix in (".run", ".jsonl")
    )
    assert len(names) == 8  # (ib + 3 bm25 cutoffs) x (run file + answers file)
    for name in names:
        a = (tmp_path / "one" / name).read_bytes()
        b = (tmp_path / "two" / name).read_bytes()
        assert a == b, f"{name} differs between executions"
    print(f"{PASS} end-to-end determinism ({len(names)} files byte-identical across processes)")


# ---------------------------------------------------------------------------
# Criterion 8: evaluation + comparison over the 7 system configurations
# emits a report shaped like the reference table (7 rows, 3 question-type
# column groups, significance stars), and a system compared against itself
# earns no stars.
# ---------------------------------------------------------------------------

def test_report_shape_and_stars(tmp_path, testbed, engine, default_config):
    config = dataclasses.replace(
        default_config, pipelines=("ib", "rag-bm25", "rag-dense"), cutoffs=(1, 3, 5)
    )
    artifacts = run_batch(testbed, config, tmp_path / "full", engine)
    report = evaluate(artifacts, testbed, config)
    assert len(report.systems) == 7
    comparison = compare([report], alpha=config.alpha)
    table = emit_report(report, "table", comparison)
    lines = [l for l in table.splitlines() if l.strip()]
    assert len(lines) == 10  # 2 header rows + rule + 7 systems
    assert lines[0].count("|") == 3
    assert "*" in table

    self_comparison = compare([report, report], alpha=config.alpha)
    assert all(not entry.starred for entry in self_comparison.entries.values())
    starred_metrics = [key for key, e in comparison.entries.items() if e.starred]
    print(f"{PASS} table-shaped report (7 rows, 3 groups; stars on {starred_metrics}; self-compare clean)")


# ---------------------------------------------------------------------------
# Criterion 9: everything above runs with deterministic providers and no
# network access; the default configuration must not reference any endpoint.
# ---------------------------------------------------------------------------

def test_offline_defaults():
    config = RunConfig.default()
    assert config.dense.provider == "hashed-ngram"
    assert config.dense.endpoint is None
    assert config.generator.kind == "extractive"
    assert config.generator.endpoint is None
    assert config.metrics.bertscore_endpoint is None
    print(f"{PASS} offline defaults (deterministic providers only, no endpoints)")
