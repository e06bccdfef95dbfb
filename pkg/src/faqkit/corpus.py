"""Knowledge-base and test-collection data model, loading, and validation.

File formats (one JSON object per line unless noted):

* passages:  ``{"id": str, "text": str, "topic": str?}``
* questions: ``{"id": str, "text": str, "type": "known"|"inferred"|"out_of_kb",
  "topic": str, "gold_answer_id": str}``
* answers:   ``{"id": str, "text": str, "source_passages": [str]}``
* qrels: TREC format, whitespace separated: ``<topic> 0 <passage_id> <grade>``

Collections are immutable after loading and safe to share across threads.
"""

from __future__ import annotations

import json
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

FALLBACK_ANSWER = "I'm sorry, I don't have an answer."

KNOWN = "known"
INFERRED = "inferred"
OUT_OF_KB = "out_of_kb"
QUESTION_TYPES = (KNOWN, INFERRED, OUT_OF_KB)

GRADE_HIGH = 2
GRADE_PARTIAL = 1


class CorpusError(ValueError):
    """Malformed or internally inconsistent collection files."""


@dataclass(frozen=True)
class Passage:
    id: str
    text: str
    topic: str | None = None


@dataclass(frozen=True)
class Question:
    id: str
    text: str
    qtype: str
    topic: str
    gold_answer_id: str


@dataclass(frozen=True)
class GoldAnswer:
    id: str
    text: str
    source_passage_ids: tuple[str, ...]


@dataclass(frozen=True)
class RelevanceJudgment:
    topic: str
    passage_id: str
    grade: int


class PassageCorpus:
    """Ordered collection of passages with unique ids."""

    def __init__(self, passages: Iterable[Passage]):
        self._passages: list[Passage] = list(passages)
        self._by_id: dict[str, Passage] = {}
        for p in self._passages:
            if p.id in self._by_id:
                raise CorpusError(f"duplicate passage id {p.id!r}")
            self._by_id[p.id] = p

    def __len__(self) -> int:
        return len(self._passages)

    def __iter__(self) -> Iterator[Passage]:
        return iter(self._passages)

    def __contains__(self, passage_id: str) -> bool:
        return passage_id in self._by_id

    def get(self, passage_id: str) -> Passage:
        try:
            return self._by_id[passage_id]
        except KeyError:
            raise CorpusError(f"unknown passage id {passage_id!r}") from None

    def ids(self) -> list[str]:
        return [p.id for p in self._passages]


@dataclass
class TestCollection:
    passages: PassageCorpus
    questions: list[Question]
    gold_answers: dict[str, GoldAnswer]
    judgments: list[RelevanceJudgment]

    def questions_of_type(self, qtype: str) -> list[Question]:
        return [q for q in self.questions if q.qtype == qtype]

    def type_counts(self) -> dict[str, int]:
        counts = Counter(q.qtype for q in self.questions)
        return {t: counts.get(t, 0) for t in QUESTION_TYPES}

    def topics(self) -> list[str]:
        seen: dict[str, None] = {}
        for q in self.questions:
            seen.setdefault(q.topic, None)
        return list(seen)

    def topic_qtype(self, topic: str) -> str | None:
        for q in self.questions:
            if q.topic == topic:
                return q.qtype
        return None

    def graded_passages(self, topic: str) -> dict[str, int]:
        """Positive relevance grades for a topic, keyed by passage id."""
        return {
            j.passage_id: j.grade
            for j in self.judgments
            if j.topic == topic and j.grade > 0
        }

    def gold_answer_for(self, question: Question) -> GoldAnswer:
        try:
            return self.gold_answers[question.gold_answer_id]
        except KeyError:
            raise CorpusError(
                f"question {question.id!r} references unknown gold answer "
                f"{question.gold_answer_id!r}"
            ) from None

    def fingerprint(self) -> str:
        """Stable identity used to refuse cross-collection comparisons."""
        import hashlib

        h = hashlib.sha256()
        for q in self.questions:
            h.update(f"{q.id}\x1f{q.qtype}\x1f{q.topic}\n".encode("utf-8"))
        for pid in self.passages.ids():
            h.update(pid.encode("utf-8") + b"\n")
        return h.hexdigest()[:16]


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _read_jsonl(path: str | Path) -> Iterator[tuple[int, dict]]:
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}:{lineno}: malformed JSON ({exc.msg})") from exc
            if not isinstance(obj, dict):
                raise CorpusError(f"{path}:{lineno}: expected a JSON object")
            yield lineno, obj


def _require(obj: dict, key: str, path: str | Path, lineno: int) -> object:
    if key not in obj:
        raise CorpusError(f"{path}:{lineno}: missing field {key!r}")
    return obj[key]


def load_corpus(path: str | Path) -> PassageCorpus:
    """Load a passages file. Order is preserved; duplicate ids are an error."""
    passages = []
    seen: set[str] = set()
    for lineno, obj in _read_jsonl(path):
        pid = str(_require(obj, "id", path, lineno))
        text = str(_require(obj, "text", path, lineno))
        if pid in seen:
            raise CorpusError(f"{path}:{lineno}: duplicate passage id {pid!r}")
        seen.add(pid)
        passages.append(Passage(id=pid, text=text, topic=obj.get("topic")))
    return PassageCorpus(passages)


def load_questions(path: str | Path) -> list[Question]:
    questions = []
    seen: set[str] = set()
    for lineno, obj in _read_jsonl(path):
        qid = str(_require(obj, "id", path, lineno))
        qtype = str(_require(obj, "type", path, lineno))
        if qtype not in QUESTION_TYPES:
            raise CorpusError(
                f"{path}:{lineno}: unknown question type {qtype!r} "
                f"(expected one of {', '.join(QUESTION_TYPES)})"
            )
        if qid in seen:
            raise CorpusError(f"{path}:{lineno}: duplicate question id {qid!r}")
        seen.add(qid)
        questions.append(
            Question(
                id=qid,
                text=str(_require(obj, "text", path, lineno)),
                qtype=qtype,
                topic=str(_require(obj, "topic", path, lineno)),
                gold_answer_id=str(_require(obj, "gold_answer_id", path, lineno)),
            )
        )
    return questions


def load_answers(path: str | Path) -> dict[str, GoldAnswer]:
    answers: dict[str, GoldAnswer] = {}
    for lineno, obj in _read_jsonl(path):
        aid = str(_require(obj, "id", path, lineno))
        if aid in answers:
            raise CorpusError(f"{path}:{lineno}: duplicate answer id {aid!r}")
        sources = _require(obj, "source_passages", path, lineno)
        if not isinstance(sources, list):
            raise CorpusError(f"{path}:{lineno}: source_passages must be a list")
        answers[aid] = GoldAnswer(
            id=aid,
            text=str(_require(obj, "text", path, lineno)),
            source_passage_ids=tuple(str(s) for s in sources),
        )
    return answers


def load_qrels(path: str | Path) -> list[RelevanceJudgment]:
    judgments = []
    seen: set[tuple[str, str]] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 4:
                raise CorpusError(
                    f"{path}:{lineno}: expected 4 whitespace-separated fields, got {len(parts)}"
                )
            topic, _iteration, passage_id, grade_str = parts
            try:
                grade = int(grade_str)
            except ValueError:
                raise CorpusError(f"{path}:{lineno}: grade {grade_str!r} is not an integer") from None
            if grade not in (0, 1, 2):
                raise CorpusError(f"{path}:{lineno}: grade must be 0, 1 or 2, got {grade}")
            key = (topic, passage_id)
            if key in seen:
                raise CorpusError(
                    f"{path}:{lineno}: duplicate judgment for topic {topic!r}, passage {passage_id!r}"
                )
            seen.add(key)
            judgments.append(RelevanceJudgment(topic=topic, passage_id=passage_id, grade=grade))
    return judgments


def load_test_collection(
    corpus_path: str | Path,
    questions_path: str | Path,
    answers_path: str | Path,
    qrels_path: str | Path,
) -> TestCollection:
    """Load and cross-link the four collection files.

    Dangling references are a hard error naming every unresolved id. Softer
    invariant violations (see :func:`validate`) are logged as warnings, not
    raised, so a drifted collection can still be inspected.
    """
    corpus = load_corpus(corpus_path)
    questions = load_questions(questions_path)
    answers = load_answers(answers_path)
    judgments = load_qrels(qrels_path)

    dangling: list[str] = []
    known_topics = {q.topic for q in questions}
    for q in questions:
        if q.gold_answer_id not in answers:
            dangling.append(f"question {q.id!r} -> answer {q.gold_answer_id!r}")
    for a in answers.values():
        for pid in a.source_passage_ids:
            if pid not in corpus:
                dangling.append(f"answer {a.id!r} -> passage {pid!r}")
    for j in judgments:
        if j.passage_id not in corpus:
            dangling.append(f"qrels topic {j.topic!r} -> passage {j.passage_id!r}")
        if j.topic not in known_topics:
            dangling.append(f"qrels -> topic {j.topic!r} (no such question topic)")
    if dangling:
        raise CorpusError("dangling references: " + "; ".join(sorted(set(dangling))))

    collection = TestCollection(
        passages=corpus, questions=questions, gold_answers=answers, judgments=judgments
    )
    report = validate(collection)
    for violation in report.violations:
        logging.getLogger(__name__).warning("collection invariant violated: %s", violation)
    return collection


def validate(collection: TestCollection) -> ValidationReport:
    """Check every collection invariant; violations are report entries."""
    report = ValidationReport()
    add = report.violations.append

    for p in collection.passages:
        if not p.text.strip():
            add(f"passage {p.id!r} has empty text")

    topic_types: dict[str, set[str]] = defaultdict(set)
    for q in collection.questions:
        topic_types[q.topic].add(q.qtype)
        if q.qtype not in QUESTION_TYPES:
            add(f"question {q.id!r} has unknown type {q.qtype!r}")
        if q.gold_answer_id not in collection.gold_answers:
            add(f"question {q.id!r} references missing answer {q.gold_answer_id!r}")
    for topic, types in topic_types.items():
        if len(types) > 1:
            add(f"topic {topic!r} mixes question types {sorted(types)}")

    # Gold-answer shape depends on the type of the questions referencing it.
    answer_types: dict[str, set[str]] = defaultdict(set)
    for q in collection.questions:
        answer_types[q.gold_answer_id].add(q.qtype)
    for aid, types in answer_types.items():
        answer = collection.gold_answers.get(aid)
        if answer is None:
            continue
        if len(types) > 1:
            add(f"answer {aid!r} is shared across question types {sorted(types)}")
            continue
        qtype = next(iter(types))
        if qtype == KNOWN:
            if len(answer.source_passage_ids) != 1:
                add(
                    f"known answer {aid!r} must cite exactly one source passage, "
                    f"has {len(answer.source_passage_ids)}"
                )
            else:
                pid = answer.source_passage_ids[0]
                if pid in collection.passages and collection.passages.get(pid).text != answer.text:
                    add(f"known answer {aid!r} text differs from its source passage {pid!r}")
        elif qtype == INFERRED:
            if len(answer.source_passage_ids) < 2:
                add(f"inferred answer {aid!r} must cite at least two source passages")
        elif qtype == OUT_OF_KB:
            if answer.source_passage_ids:
                add(f"out-of-kb answer {aid!r} must cite no source passages")
            if answer.text != FALLBACK_ANSWER:
                add(f"out-of-kb answer {aid!r} text must be the fallback message")

    seen_pairs: set[tuple[str, str]] = set()
    for j in collection.judgments:
        if j.grade not in (0, 1, 2):
            add(f"judgment ({j.topic!r}, {j.passage_id!r}) has grade {j.grade} outside 0..2")
        key = (j.topic, j.passage_id)
        if key in seen_pairs:
            add(f"duplicate judgment for topic {j.topic!r}, passage {j.passage_id!r}")
        seen_pairs.add(key)
        if j.passage_id not in collection.passages:
            add(f"judgment for topic {j.topic!r} references missing passage {j.passage_id!r}")

    for topic in collection.topics():
        qtype = collection.topic_qtype(topic)
        graded = collection.graded_passages(topic)
        if qtype == OUT_OF_KB and graded:
            add(f"out-of-kb topic {topic!r} has {len(graded)} positively judged passages")
        if qtype == KNOWN and GRADE_HIGH not in graded.values():
            add(f"known topic {topic!r} has no grade-2 judgment")

    return report


def save_corpus(corpus: PassageCorpus, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in corpus:
            obj: dict[str, object] = {"id": p.id, "text": p.text}
            if p.topic is not None:
                obj["topic"] = p.topic
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def save_questions(questions: Iterable[Question], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for q in questions:
            fh.write(
                json.dumps(
                    {
                        "id": q.id,
                        "text": q.text,
                        "type": q.qtype,
                        "topic": q.topic,
                        "gold_answer_id": q.gold_answer_id,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def save_answers(answers: dict[str, GoldAnswer], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for a in answers.values():
            fh.write(
                json.dumps(
                    {
                        "id": a.id,
                        "text": a.text,
                        "source_passages": list(a.source_passage_ids),
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def save_qrels(judgments: Iterable[RelevanceJudgment], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for j in judgments:
            fh.write(f"{j.topic} 0 {j.passage_id} {j.grade}\n")


def save_test_collection(collection: TestCollection, directory: str | Path) -> dict[str, Path]:
    """Write the four collection files into a directory; returns their paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {
        "passages": directory / "passages.jsonl",
        "questions": directory / "questions.jsonl",
        "answers": directory / "answers.jsonl",
        "qrels": directory / "qrels.txt",
    }
    save_corpus(collection.passages, paths["passages"])
    save_questions(collection.questions, paths["questions"])
    save_answers(collection.gold_answers, paths["answers"])
    save_qrels(collection.judgments, paths["qrels"])
    return paths
