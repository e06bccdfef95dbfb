"""Retrieval and generation effectiveness measures.

NDCG uses linear gain (the relevance grade itself) with a ``1/log2(rank+1)``
discount from rank 1; the exponential ``2^grade - 1`` gain is selectable.
ROUGE-1 is clipped unigram overlap. BERTScore is greedy maximum cosine
matching between token embeddings, with no idf weighting and no baseline
rescaling, so scores are comparable only under the same embedder.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .corpus import OUT_OF_KB, QUESTION_TYPES
from .lexical import DEFAULT_TOKENIZER, TokenizerConfig, tokenize
from .ranking import Ranking

LINEAR = "linear"
EXPONENTIAL = "exponential"


class PRF(NamedTuple):
    precision: float
    recall: float
    f1: float


def _gain(grade: int, variant: str) -> float:
    if variant == LINEAR:
        return float(grade)
    if variant == EXPONENTIAL:
        return float(2**grade - 1)
    raise ValueError(f"unknown gain variant {variant!r}")


def dcg(grades: Sequence[int], cutoff: int, gain: str = LINEAR) -> float:
    return sum(
        _gain(g, gain) / math.log2(rank + 1)
        for rank, g in enumerate(grades[:cutoff], start=1)
    )


def ndcg(
    ranking: Ranking | Sequence[str],
    judgments: Mapping[str, int],
    cutoff: int,
    gain: str = LINEAR,
) -> float:
    """NDCG@cutoff of a ranking against a topic's graded judgments.

    Raises if the topic has no positively graded passage (an out-of-KB
    question routed here by mistake); an empty ranking scores 0.
    """
    positive = sorted((g for g in judgments.values() if g > 0), reverse=True)
    if not positive:
        raise ValueError("topic has no relevant passages; NDCG is undefined")
    ids = ranking.ids() if isinstance(ranking, Ranking) else list(ranking)
    actual = dcg([judgments.get(pid, 0) for pid in ids], cutoff, gain)
    ideal = dcg(positive, cutoff, gain)
    return actual / ideal


def rouge1(
    candidate: str,
    reference: str,
    config: TokenizerConfig = DEFAULT_TOKENIZER,
) -> PRF:
    """Unigram overlap with clipped counts; reference must be non-empty."""
    ref_tokens = tokenize(reference, config)
    if not ref_tokens:
        raise ValueError("reference text has no tokens")
    cand_tokens = tokenize(candidate, config)
    if not cand_tokens:
        return PRF(0.0, 0.0, 0.0)
    overlap_counts = Counter(cand_tokens) & Counter(ref_tokens)
    overlap = sum(overlap_counts.values())
    precision = overlap / len(cand_tokens)
    recall = overlap / len(ref_tokens)
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return PRF(precision, recall, f1)


def _unit_rows(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(norms > 0.0, matrix / norms, 0.0)


def bertscore(
    candidate: str,
    reference: str,
    embedder,
    config: TokenizerConfig = DEFAULT_TOKENIZER,
) -> PRF:
    """Greedy max-cosine token matching between candidate and reference.

    ``embedder.embed(tokens)`` must return one vector per token. Recall
    averages, over reference tokens, the best similarity to any candidate
    token; precision is the symmetric quantity.
    """
    cand_tokens = tokenize(candidate, config)
    ref_tokens = tokenize(reference, config)
    if not cand_tokens or not ref_tokens:
        raise ValueError("bertscore requires non-empty candidate and reference texts")
    cand = _unit_rows(np.asarray(embedder.embed(cand_tokens), dtype=np.float64))
    ref = _unit_rows(np.asarray(embedder.embed(ref_tokens), dtype=np.float64))
    sims = cand @ ref.T  # (n_cand, n_ref)
    precision = float(np.mean(np.max(sims, axis=1)))
    recall = float(np.mean(np.max(sims, axis=0)))
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return PRF(precision, recall, f1)


def unanswered_rate(results: Iterable) -> float:
    """Percentage of results the system declined to answer."""
    items = list(results)
    if not items:
        raise ValueError("unanswered_rate needs at least one result")
    declined = sum(1 for r in items if not r.answered)
    return 100.0 * declined / len(items)


@dataclass(frozen=True)
class MetricRow:
    question_id: str
    qtype: str
    ndcg: float | None  # absent for out-of-KB questions
    rouge1: PRF
    bertscore: PRF
    answered: bool
    error: str | None = None

    def __post_init__(self):
        if (self.qtype == OUT_OF_KB) == (self.ndcg is not None):
            raise ValueError("ndcg must be present exactly when the question is not out-of-KB")

    def to_dict(self) -> dict:
        return {
            "question_id": self.question_id,
            "qtype": self.qtype,
            "ndcg": self.ndcg,
            "rouge1": list(self.rouge1),
            "bertscore": list(self.bertscore),
            "answered": self.answered,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "MetricRow":
        return cls(
            question_id=obj["question_id"],
            qtype=obj["qtype"],
            ndcg=obj["ndcg"],
            rouge1=PRF(*obj["rouge1"]),
            bertscore=PRF(*obj["bertscore"]),
            answered=obj["answered"],
            error=obj.get("error"),
        )


@dataclass
class SectionAggregate:
    qtype: str
    count: int
    ndcg: float | None
    rouge1: PRF
    bertscore: PRF
    unanswered_pct: float | None
    failures: int = 0

    def to_dict(self) -> dict:
        return {
            "qtype": self.qtype,
            "count": self.count,
            "ndcg": self.ndcg,
            "rouge1": list(self.rouge1),
            "bertscore": list(self.bertscore),
            "unanswered_pct": self.unanswered_pct,
            "failures": self.failures,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "SectionAggregate":
        return cls(
            qtype=obj["qtype"],
            count=obj["count"],
            ndcg=obj["ndcg"],
            rouge1=PRF(*obj["rouge1"]),
            bertscore=PRF(*obj["bertscore"]),
            unanswered_pct=obj["unanswered_pct"],
            failures=obj.get("failures", 0),
        )


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values) if values else 0.0


def _mean_prf(values: Sequence[PRF]) -> PRF:
    return PRF(
        _mean([v.precision for v in values]),
        _mean([v.recall for v in values]),
        _mean([v.f1 for v in values]),
    )


def aggregate(rows: Sequence[MetricRow]) -> dict[str, SectionAggregate]:
    """Per-question-type arithmetic means over one pipeline+cutoff's rows.

    Rows flagged with an error (failed remote call) are excluded from the
    means but counted, so batch failures stay visible in reports.
    """
    sections: dict[str, SectionAggregate] = {}
    for qtype in QUESTION_TYPES:
        all_rows = [r for r in rows if r.qtype == qtype]
        if not all_rows:
            continue
        scored = [r for r in all_rows if r.error is None]
        ndcg_values = [r.ndcg for r in scored if r.ndcg is not None]
        sections[qtype] = SectionAggregate(
            qtype=qtype,
            count=len(all_rows),
            ndcg=_mean(ndcg_values) if qtype != OUT_OF_KB else None,
            rouge1=_mean_prf([r.rouge1 for r in scored]),
            bertscore=_mean_prf([r.bertscore for r in scored]),
            unanswered_pct=unanswered_rate(scored) if qtype == OUT_OF_KB and scored else None,
            failures=len(all_rows) - len(scored),
        )
    return sections
