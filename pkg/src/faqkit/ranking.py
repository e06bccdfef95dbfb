"""Scored, truncated passage rankings and TREC run-file serialization."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, TextIO


@dataclass(frozen=True)
class ScoredPassage:
    passage_id: str
    score: float


@dataclass(frozen=True)
class Ranking:
    """Ordered retrieval result for one question.

    Scores are non-increasing, ties are broken by ascending passage id, and
    the ranking never exceeds its cutoff. An empty ranking is legal and means
    "no answer found".
    """

    question_id: str
    entries: tuple[ScoredPassage, ...]
    cutoff: int

    def __post_init__(self):
        if self.cutoff < 1:
            raise ValueError(f"cutoff must be >= 1, got {self.cutoff}")
        if len(self.entries) > self.cutoff:
            raise ValueError(
                f"ranking for {self.question_id!r} has {len(self.entries)} entries, "
                f"cutoff is {self.cutoff}"
            )
        for a, b in zip(self.entries, self.entries[1:]):
            if b.score > a.score:
                raise ValueError("ranking scores must be non-increasing")
            if b.score == a.score and b.passage_id <= a.passage_id:
                raise ValueError("tied scores must be ordered by ascending passage id")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def is_empty(self) -> bool:
        return not self.entries

    def ids(self) -> list[str]:
        return [e.passage_id for e in self.entries]

    def truncated(self, k: int) -> "Ranking":
        return Ranking(question_id=self.question_id, entries=self.entries[:k], cutoff=k)


def rank_scored(
    question_id: str, scored: Iterable[tuple[str, float]], cutoff: int
) -> Ranking:
    """Build a Ranking from unsorted (passage_id, score) pairs."""
    ordered = sorted(scored, key=lambda item: (-item[1], item[0]))[:cutoff]
    return Ranking(
        question_id=question_id,
        entries=tuple(ScoredPassage(pid, score) for pid, score in ordered),
        cutoff=cutoff,
    )


def trec_lines(ranking: Ranking, tag: str) -> list[str]:
    """Render a ranking as TREC run lines: qid Q0 pid rank score tag."""
    return [
        f"{ranking.question_id} Q0 {e.passage_id} {rank} {e.score:.6f} {tag}"
        for rank, e in enumerate(ranking.entries, start=1)
    ]


def write_trec_run(rankings: Iterable[Ranking], out: str | Path | TextIO, tag: str) -> None:
    if hasattr(out, "write"):
        for ranking in rankings:
            for line in trec_lines(ranking, tag):
                out.write(line + "\n")
        return
    with open(out, "w", encoding="utf-8") as fh:
        write_trec_run(rankings, fh, tag)


def read_trec_run(path: str | Path) -> dict[str, list[tuple[str, int, float]]]:
    """Parse a TREC run file into qid -> [(passage_id, rank, score)] in rank order."""
    by_qid: dict[str, list[tuple[str, int, float]]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 6:
                raise ValueError(f"{path}:{lineno}: expected 6 fields, got {len(parts)}")
            qid, _q0, pid, rank_str, score_str, _tag = parts
            by_qid.setdefault(qid, []).append((pid, int(rank_str), float(score_str)))
    for entries in by_qid.values():
        entries.sort(key=lambda item: item[1])
    return by_qid
