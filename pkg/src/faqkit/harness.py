"""Batch orchestration: run pipelines over a collection, score, and compare.

A batch run writes, per system (pipeline x cutoff):

* ``<label>.run`` - rankings in TREC run format, keyed by question id
  (question variations share a topic, so topic-keyed run files would
  collide; ``question_qrels`` expands the topic qrels to question level for
  third-party evaluators)
* ``<label>.answers.jsonl`` - one answer record per question
* ``manifest.json`` - config snapshot and file map
* ``timings.json`` - wall-clock stats (excluded from determinism claims)

With deterministic components (extractive generator, hashed n-gram
embeddings) re-running an identical config produces byte-identical run and
answer files.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from time import perf_counter
from typing import Sequence

from . import metrics as metrics_mod
from .config import RunConfig
from .corpus import (
    OUT_OF_KB,
    Question,
    RelevanceJudgment,
    TestCollection,
    save_qrels,
)
from .dense import HashedNGramEmbedder, RemoteEmbedder
from .engine import Engine
from .generation import AnswerResult
from .metrics import PRF, MetricRow, SectionAggregate, aggregate, ndcg
from .ranking import Ranking, read_trec_run, write_trec_run
from .significance import HsdResult, tukey_hsd


def system_label(pipeline: str, cutoff: int | None) -> str:
    return pipeline if cutoff is None else f"{pipeline}@{cutoff}"


def _file_stem(pipeline: str, cutoff: int | None) -> str:
    return pipeline if cutoff is None else f"{pipeline}.k{cutoff}"


@dataclass(frozen=True)
class SystemFiles:
    pipeline: str
    cutoff: int | None
    run_file: Path
    answers_file: Path

    @property
    def label(self) -> str:
        return system_label(self.pipeline, self.cutoff)


@dataclass
class RunArtifacts:
    out_dir: Path
    systems: list[SystemFiles]
    failures: dict[str, int]

    @property
    def manifest_path(self) -> Path:
        return self.out_dir / "manifest.json"


def _systems_for(config: RunConfig) -> list[tuple[str, int | None]]:
    systems: list[tuple[str, int | None]] = []
    for pipeline in config.pipelines:
        if pipeline == "ib":
            systems.append((pipeline, None))
        else:
            systems.extend((pipeline, cutoff) for cutoff in config.cutoffs)
    return systems


def _answer_one(
    engine: Engine, question: Question, pipeline: str, cutoff: int | None
) -> tuple[AnswerResult, Ranking]:
    effective_cutoff = cutoff if cutoff is not None else 1
    try:
        result, ranking, _ = engine.answer(question, pipeline, effective_cutoff)
        return result, ranking
    except Exception as exc:  # failures must not abort a 100+ question batch
        errored = AnswerResult(
            question_id=question.id,
            text="",
            answered=False,
            source_passage_ids=(),
            pipeline=pipeline,
            cutoff=cutoff,
            error=f"{type(exc).__name__}: {exc}",
        )
        return errored, Ranking(question_id=question.id, entries=(), cutoff=effective_cutoff)


def run_batch(
    collection: TestCollection,
    config: RunConfig,
    out_dir: str | Path,
    engine: Engine | None = None,
) -> RunArtifacts:
    """Run every configured system over the collection and write artifacts."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    engine = engine or Engine(collection, config)

    systems: list[SystemFiles] = []
    failures: dict[str, int] = {}
    timings: dict[str, dict[str, float]] = {}
    for pipeline, cutoff in _systems_for(config):
        label = system_label(pipeline, cutoff)
        started = perf_counter()
        if config.workers > 1:
            with ThreadPoolExecutor(max_workers=config.workers) as pool:
                outcomes = list(
                    pool.map(lambda q: _answer_one(engine, q, pipeline, cutoff), collection.questions)
                )
        else:
            outcomes = [_answer_one(engine, q, pipeline, cutoff) for q in collection.questions]
        elapsed = perf_counter() - started

        stem = _file_stem(pipeline, cutoff)
        run_file = out_dir / f"{stem}.run"
        answers_file = out_dir / f"{stem}.answers.jsonl"
        write_trec_run((ranking for _, ranking in outcomes), run_file, config.run_tag)
        with open(answers_file, "w", encoding="utf-8") as fh:
            for result, _ in outcomes:
                fh.write(json.dumps(result.to_dict(), ensure_ascii=False) + "\n")

        failures[label] = sum(1 for result, _ in outcomes if result.error is not None)
        timings[label] = {
            "total_s": elapsed,
            "per_question_ms": 1000.0 * elapsed / max(len(outcomes), 1),
        }
        systems.append(
            SystemFiles(pipeline=pipeline, cutoff=cutoff, run_file=run_file, answers_file=answers_file)
        )

    manifest = {
        "tag": config.run_tag,
        "collection": {
            "fingerprint": collection.fingerprint(),
            "counts": collection.type_counts(),
        },
        "config": config.to_dict(),
        "systems": [
            {
                "pipeline": s.pipeline,
                "cutoff": s.cutoff,
                "label": s.label,
                "run_file": s.run_file.name,
                "answers_file": s.answers_file.name,
            }
            for s in systems
        ],
        "failures": failures,
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(out_dir / "timings.json", "w", encoding="utf-8") as fh:
        json.dump(timings, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return RunArtifacts(out_dir=out_dir, systems=systems, failures=failures)


def load_artifacts(out_dir: str | Path) -> RunArtifacts:
    out_dir = Path(out_dir)
    with open(out_dir / "manifest.json", "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    systems = [
        SystemFiles(
            pipeline=entry["pipeline"],
            cutoff=entry["cutoff"],
            run_file=out_dir / entry["run_file"],
            answers_file=out_dir / entry["answers_file"],
        )
        for entry in manifest["systems"]
    ]
    return RunArtifacts(out_dir=out_dir, systems=systems, failures=manifest.get("failures", {}))


def question_qrels(collection: TestCollection) -> list[RelevanceJudgment]:
    """Topic qrels expanded to question ids, for standard TREC evaluators."""
    expanded = []
    for question in collection.questions:
        for pid, grade in sorted(collection.graded_passages(question.topic).items()):
            expanded.append(RelevanceJudgment(topic=question.id, passage_id=pid, grade=grade))
    return expanded


def write_question_qrels(collection: TestCollection, path: str | Path) -> None:
    save_qrels(question_qrels(collection), path)


@dataclass
class SystemEval:
    pipeline: str
    cutoff: int | None
    rows: list[MetricRow]
    sections: dict[str, SectionAggregate]

    @property
    def label(self) -> str:
        return system_label(self.pipeline, self.cutoff)

    def to_dict(self) -> dict:
        return {
            "pipeline": self.pipeline,
            "cutoff": self.cutoff,
            "rows": [r.to_dict() for r in self.rows],
            "sections": {k: v.to_dict() for k, v in self.sections.items()},
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "SystemEval":
        return cls(
            pipeline=obj["pipeline"],
            cutoff=obj["cutoff"],
            rows=[MetricRow.from_dict(r) for r in obj["rows"]],
            sections={k: SectionAggregate.from_dict(v) for k, v in obj["sections"].items()},
        )


@dataclass
class EvalReport:
    collection_fingerprint: str
    type_counts: dict[str, int]
    embedder_id: str
    ndcg_gain: str
    systems: list[SystemEval] = field(default_factory=list)

    def system(self, label: str) -> SystemEval:
        for s in self.systems:
            if s.label == label:
                return s
        raise KeyError(f"no system {label!r} in report")

    def to_dict(self) -> dict:
        return {
            "collection_fingerprint": self.collection_fingerprint,
            "type_counts": self.type_counts,
            "embedder_id": self.embedder_id,
            "ndcg_gain": self.ndcg_gain,
            "systems": [s.to_dict() for s in self.systems],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "EvalReport":
        return cls(
            collection_fingerprint=obj["collection_fingerprint"],
            type_counts=obj["type_counts"],
            embedder_id=obj["embedder_id"],
            ndcg_gain=obj["ndcg_gain"],
            systems=[SystemEval.from_dict(s) for s in obj["systems"]],
        )

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path: str | Path) -> "EvalReport":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _bertscore_embedder(config: RunConfig):
    if config.metrics.bertscore_endpoint:
        return RemoteEmbedder(config.metrics.bertscore_endpoint)
    return HashedNGramEmbedder(dim=config.metrics.bertscore_dim, config=config.tokenizer())


def evaluate(
    artifacts: RunArtifacts | str | Path,
    collection: TestCollection,
    config: RunConfig,
) -> EvalReport:
    """Score every system in the artifacts against the collection."""
    if not isinstance(artifacts, RunArtifacts):
        artifacts = load_artifacts(artifacts)
    tokenizer = config.tokenizer()
    embedder = _bertscore_embedder(config)
    report = EvalReport(
        collection_fingerprint=collection.fingerprint(),
        type_counts=collection.type_counts(),
        embedder_id=embedder.id,
        ndcg_gain=config.metrics.ndcg_gain,
    )
    zeros = PRF(0.0, 0.0, 0.0)
    for system in artifacts.systems:
        run = read_trec_run(system.run_file)
        answers: dict[str, AnswerResult] = {}
        with open(system.answers_file, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                record = AnswerResult.from_dict(json.loads(line))
                answers[record.question_id] = record

        rows: list[MetricRow] = []
        for question in collection.questions:
            if question.id not in answers:
                raise ValueError(
                    f"system {system.label!r} has no answer record for question {question.id!r}"
                )
            answer = answers[question.id]
            gold = collection.gold_answer_for(question)
            ndcg_cutoff = system.cutoff if system.cutoff is not None else 1
            if answer.error is not None:
                rows.append(
                    MetricRow(
                        question_id=question.id,
                        qtype=question.qtype,
                        ndcg=None if question.qtype == OUT_OF_KB else 0.0,
                        rouge1=zeros,
                        bertscore=zeros,
                        answered=False,
                        error=answer.error,
                    )
                )
                continue
            ranked_ids = [pid for pid, _, _ in run.get(question.id, [])]
            if question.qtype == OUT_OF_KB:
                ndcg_value = None
            else:
                grades = collection.graded_passages(question.topic)
                ndcg_value = ndcg(ranked_ids, grades, ndcg_cutoff, config.metrics.ndcg_gain)
            candidate = answer.text
            rouge = metrics_mod.rouge1(candidate, gold.text, tokenizer) if candidate.strip() else zeros
            bert = (
                metrics_mod.bertscore(candidate, gold.text, embedder, tokenizer)
                if candidate.strip()
                else zeros
            )
            rows.append(
                MetricRow(
                    question_id=question.id,
                    qtype=question.qtype,
                    ndcg=ndcg_value,
                    rouge1=rouge,
                    bertscore=bert,
                    answered=answer.answered,
                )
            )
        report.systems.append(
            SystemEval(
                pipeline=system.pipeline,
                cutoff=system.cutoff,
                rows=rows,
                sections=aggregate(rows),
            )
        )
    return report


# (question type, metric key) pairs compared and reported, in table order.
COMPARED_METRICS: tuple[tuple[str, str], ...] = (
    ("known", "ndcg"),
    ("known", "bertscore_f1"),
    ("known", "rouge1_f1"),
    ("inferred", "ndcg"),
    ("inferred", "bertscore_f1"),
    ("inferred", "rouge1_f1"),
    ("out_of_kb", "unanswered"),
    ("out_of_kb", "bertscore_f1"),
    ("out_of_kb", "rouge1_f1"),
)


def _row_value(row: MetricRow, metric: str) -> float | None:
    if row.error is not None:
        return None
    if metric == "ndcg":
        return row.ndcg
    if metric == "rouge1_f1":
        return row.rouge1.f1
    if metric == "bertscore_f1":
        return row.bertscore.f1
    if metric == "unanswered":
        # Higher is better: declining to answer an out-of-KB question is correct.
        return 0.0 if row.answered else 1.0
    raise ValueError(f"unknown metric {metric!r}")


@dataclass
class MetricComparison:
    qtype: str
    metric: str
    hsd: HsdResult
    starred: list[str]

    def to_dict(self) -> dict:
        return {
            "qtype": self.qtype,
            "metric": self.metric,
            "hsd": self.hsd.to_dict(),
            "starred": self.starred,
        }


@dataclass
class ComparisonResult:
    alpha: float
    entries: dict[str, MetricComparison]

    def starred(self, qtype: str, metric: str) -> list[str]:
        entry = self.entries.get(f"{qtype}:{metric}")
        return entry.starred if entry else []

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "entries": {k: v.to_dict() for k, v in self.entries.items()},
        }

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def compare(reports: Sequence[EvalReport], alpha: float = 0.01) -> ComparisonResult:
    """Tukey HSD across all systems found in the reports, per type and metric.

    A system is starred when it is significantly different from, and better
    than, every other system for that metric. Reports must describe the same
    collection.
    """
    if not reports:
        raise ValueError("compare needs at least one report")
    fingerprints = {r.collection_fingerprint for r in reports}
    if len(fingerprints) > 1:
        raise ValueError(f"reports cover different collections: {sorted(fingerprints)}")
    options = {(r.embedder_id, r.ndcg_gain) for r in reports}
    if len(options) > 1:
        raise ValueError(
            f"reports use different metric options (embedder, ndcg gain): {sorted(options)}"
        )

    systems: list[tuple[str, SystemEval]] = []
    seen_labels: dict[str, int] = {}
    for report in reports:
        for system in report.systems:
            count = seen_labels.get(system.label, 0)
            seen_labels[system.label] = count + 1
            label = system.label if count == 0 else f"{system.label}#{count + 1}"
            systems.append((label, system))
    if len(systems) < 2:
        raise ValueError("compare needs at least two systems across the reports")

    entries: dict[str, MetricComparison] = {}
    for qtype, metric in COMPARED_METRICS:
        groups: dict[str, list[float]] = {}
        for label, system in systems:
            values = [
                v
                for row in system.rows
                if row.qtype == qtype
                for v in [_row_value(row, metric)]
                if v is not None
            ]
            if len(values) >= 2:
                groups[label] = values
        if len(groups) < 2:
            continue
        hsd = tukey_hsd(groups, alpha)
        starred = []
        for label in groups:
            others = [other for other in groups if other != label]
            if others and all(
                hsd.pair(label, other).significant
                and hsd.means[label] > hsd.means[other]
                for other in others
            ):
                starred.append(label)
        entries[f"{qtype}:{metric}"] = MetricComparison(
            qtype=qtype, metric=metric, hsd=hsd, starred=starred
        )
    return ComparisonResult(alpha=alpha, entries=entries)


_QTYPE_TITLES = (("known", "Known"), ("inferred", "Inferred"), ("out_of_kb", "Out of KB"))


def _section_value(section: SectionAggregate | None, metric: str) -> float | None:
    if section is None:
        return None
    if metric == "ndcg":
        return section.ndcg
    if metric == "rouge1_f1":
        return section.rouge1.f1
    if metric == "bertscore_f1":
        return section.bertscore.f1
    if metric == "unanswered":
        return section.unanswered_pct
    raise ValueError(f"unknown metric {metric!r}")


def render_table(report: EvalReport, comparison: ComparisonResult | None = None) -> str:
    """Plain-text effectiveness table: one row per system, one column group
    per question type, stars marking systems significantly better than all
    others."""
    col_metrics = {
        "known": ("ndcg", "bertscore_f1", "rouge1_f1"),
        "inferred": ("ndcg", "bertscore_f1", "rouge1_f1"),
        "out_of_kb": ("unanswered", "bertscore_f1", "rouge1_f1"),
    }
    headers = {"ndcg": "NDCG", "bertscore_f1": "BERTScore", "rouge1_f1": "ROUGE-1", "unanswered": "%Unans"}

    lines = []
    group_titles = ["approach".ljust(14) + "k".rjust(3)]
    col_titles = [" " * 17]
    for qtype, title in _QTYPE_TITLES:
        count = report.type_counts.get(qtype, 0)
        cells = "  ".join(headers[m].rjust(9) for m in col_metrics[qtype])
        group_titles.append(f"{title} ({count} questions)".ljust(len(cells)))
        col_titles.append(cells)
    lines.append(" | ".join(group_titles))
    lines.append(" | ".join(col_titles))
    lines.append("-" * len(lines[1]))

    for system in report.systems:
        cutoff = "-" if system.cutoff is None else str(system.cutoff)
        row_cells = [system.pipeline.ljust(14) + cutoff.rjust(3)]
        for qtype, _ in _QTYPE_TITLES:
            section = system.sections.get(qtype)
            cells = []
            for metric in col_metrics[qtype]:
                value = _section_value(section, metric)
                if value is None:
                    cells.append("-".rjust(9))
                    continue
                star = ""
                if comparison is not None and system.label in comparison.starred(qtype, metric):
                    star = "*"
                text = f"{value:.1f}{star}" if metric == "unanswered" else f"{value:.4f}{star}"
                cells.append(text.rjust(9))
            row_cells.append("  ".join(cells))
        lines.append(" | ".join(row_cells))
    return "\n".join(lines) + "\n"


def emit_report(
    report: EvalReport,
    fmt: str = "table",
    comparison: ComparisonResult | None = None,
) -> str:
    """Render a report as machine-readable JSON or the effectiveness table."""
    if fmt == "json":
        payload = report.to_dict()
        if comparison is not None:
            payload["significance"] = comparison.to_dict()
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if fmt == "table":
        return render_table(report, comparison)
    raise ValueError(f"unknown format {fmt!r}, expected 'json' or 'table'")
