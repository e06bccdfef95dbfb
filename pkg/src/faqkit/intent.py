"""Intent-based answering: paraphrase-augmented intents with thresholded matching.

Each FAQ entry (a "known" topic) becomes one intent whose training utterances
are the canonical question plus up to five selected paraphrase variations,
all acronym-normalized. Matching is cosine similarity over TF-IDF unigram
vectors of the training utterances: a deterministic, dependency-free stand-in
for a hosted NLU service. Utterances below the confidence threshold fall
back to "no answer", which is what keeps this pipeline honest on questions
the FAQ cannot answer.
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .corpus import FALLBACK_ANSWER, KNOWN, Question, TestCollection
from .generation import AnswerResult, fallback_result
from .lexical import DEFAULT_TOKENIZER, TokenizerConfig, tokenize
from .ranking import Ranking, ScoredPassage

DEFAULT_ACRONYMS = {
    "CS": "Computer Science",
    "SE": "Software Engineering",
    "AI": "Artificial Intelligence",
    "ML": "Machine Learning",
    "IT": "Information Technology",
    "WAM": "Weighted Average Mark",
}

PARAPHRASE_PROMPT = "generate up to eight paraphrases of the following question: {question}"

MIN_VARIATION_TOKENS = 3
MAX_VARIATION_TOKENS = 40


def normalize_acronyms(text: str, acronym_map: Mapping[str, str] | None = None) -> str:
    """Replace whole-word acronym occurrences; idempotent for sane maps."""
    mapping = DEFAULT_ACRONYMS if acronym_map is None else acronym_map
    for acronym, expansion in mapping.items():
        text = re.sub(rf"\b{re.escape(acronym)}\b", expansion, text)
    return text


def load_acronyms(path: str | Path) -> dict[str, str]:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


_LIST_PREFIX = re.compile(r"^\s*(?:[-*•]|\d+[.)])\s*")


def generate_paraphrases(llm_client, question: str, max_n: int = 8) -> list[str]:
    """Ask an LLM for question paraphrases; dedupe and drop echoes of the input.

    ``llm_client`` needs a ``chat(content) -> str`` method. An empty
    generation yields an empty list; the caller decides what to do then.
    """
    raw = llm_client.chat(PARAPHRASE_PROMPT.format(question=question))
    seen: set[str] = {question.strip().casefold()}
    variations: list[str] = []
    for line in raw.splitlines():
        candidate = _LIST_PREFIX.sub("", line).strip()
        if not candidate:
            continue
        key = candidate.casefold()
        if key in seen:
            continue
        seen.add(key)
        variations.append(candidate)
        if len(variations) >= max_n:
            break
    return variations


def select_variations(
    variations: Sequence[str],
    keep: int = 5,
    *,
    canonical: str | None = None,
    acronym_map: Mapping[str, str] | None = None,
) -> list[str]:
    """First ``keep`` variations that survive the length and identity filters.

    The token-length bounds and the not-equal-to-canonical check are an
    automatic stand-in for manually inspecting generated paraphrases; tune
    or replace them when a human curation step is available.
    """
    canonical_norm = (
        normalize_acronyms(canonical, acronym_map).strip().casefold() if canonical else None
    )
    selected: list[str] = []
    for variation in variations:
        n_tokens = len(tokenize(variation))
        if not MIN_VARIATION_TOKENS <= n_tokens <= MAX_VARIATION_TOKENS:
            continue
        normalized = normalize_acronyms(variation, acronym_map).strip().casefold()
        if canonical_norm is not None and normalized == canonical_norm:
            continue
        selected.append(variation)
        if len(selected) >= keep:
            break
    return selected


@dataclass(frozen=True)
class Intent:
    id: str
    training_utterances: tuple[str, ...]
    response_text: str
    response_passage_id: str


@dataclass(frozen=True)
class MatcherConfig:
    tau: float = 0.35

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"tau must be in [0, 1], got {self.tau}")


@dataclass(frozen=True)
class IntentDecision:
    matched: str | None
    confidence: float


class IntentModel:
    """Immutable intent matcher; safe for concurrent classification."""

    def __init__(
        self,
        intents: Sequence[Intent],
        config: MatcherConfig = MatcherConfig(),
        fallback_text: str = FALLBACK_ANSWER,
        acronym_map: Mapping[str, str] | None = None,
        tokenizer: TokenizerConfig = DEFAULT_TOKENIZER,
    ):
        ids = [i.id for i in intents]
        if len(set(ids)) != len(ids):
            raise ValueError("intent ids must be unique")
        self.intents = tuple(sorted(intents, key=lambda i: i.id))
        self.config = config
        self.fallback_text = fallback_text
        self.acronym_map = dict(DEFAULT_ACRONYMS if acronym_map is None else acronym_map)
        self.tokenizer = tokenizer
        self._by_id = {i.id: i for i in self.intents}

        # TF-IDF statistics over all training utterances.
        docs: list[tuple[str, list[str]]] = []  # (intent id, tokens)
        for intent in self.intents:
            for utterance in intent.training_utterances:
                docs.append((intent.id, self._tokens(utterance)))
        n_docs = len(docs)
        df: Counter[str] = Counter()
        for _, tokens in docs:
            df.update(set(tokens))
        # No +1 smoothing term: words shared by every utterance carry no signal,
        # which keeps stray function-word overlap from crossing the threshold.
        self._idf = {t: math.log((1 + n_docs) / (1 + d)) for t, d in df.items()}
        # Out-of-vocabulary query terms get the df=0 idf: they match nothing
        # but still enlarge the query norm, deflating similarity for
        # questions mostly about things no intent covers.
        self._oov_idf = math.log(1 + n_docs)
        self._utterance_vectors = [
            (intent_id, self._vectorize(tokens)) for intent_id, tokens in docs
        ]

    def _tokens(self, utterance: str) -> list[str]:
        return tokenize(normalize_acronyms(utterance, self.acronym_map), self.tokenizer)

    def _vectorize(self, tokens: list[str]) -> dict[str, float]:
        weights = {
            t: count * self._idf.get(t, self._oov_idf) for t, count in Counter(tokens).items()
        }
        norm = math.sqrt(sum(w * w for w in weights.values()))
        if norm == 0.0:
            return {}
        return {t: w / norm for t, w in weights.items() if w != 0.0}

    def similarity(self, utterance: str) -> list[tuple[str, float]]:
        query = self._vectorize(self._tokens(utterance))
        scores: list[tuple[str, float]] = []
        for intent_id, vec in self._utterance_vectors:
            if len(query) > len(vec):
                small, large = vec, query
            else:
                small, large = query, vec
            sim = sum(w * large.get(t, 0.0) for t, w in small.items())
            scores.append((intent_id, min(1.0, max(0.0, sim))))
        return scores

    def intent(self, intent_id: str) -> Intent:
        return self._by_id[intent_id]

    def to_jsonl(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for intent in self.intents:
                fh.write(
                    json.dumps(
                        {
                            "id": intent.id,
                            "utterances": list(intent.training_utterances),
                            "response_text": intent.response_text,
                            "response_passage_id": intent.response_passage_id,
                        },
                        ensure_ascii=False,
                    )
                    + "\n"
                )

    @classmethod
    def from_jsonl(
        cls,
        path: str | Path,
        config: MatcherConfig = MatcherConfig(),
        **kwargs,
    ) -> "IntentModel":
        intents = []
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                obj = json.loads(line)
                intents.append(
                    Intent(
                        id=obj["id"],
                        training_utterances=tuple(obj["utterances"]),
                        response_text=obj["response_text"],
                        response_passage_id=obj["response_passage_id"],
                    )
                )
        return cls(intents, config=config, **kwargs)


def load_paraphrases(path: str | Path) -> dict[str, list[str]]:
    """Paraphrase file: one JSON object per line {"topic": str, "variations": [str]}."""
    by_topic: dict[str, list[str]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            by_topic[obj["topic"]] = list(obj["variations"])
    return by_topic


def build_intent_model(
    collection: TestCollection,
    variations_per_topic: Mapping[str, Sequence[str]] | None = None,
    config: MatcherConfig = MatcherConfig(),
    *,
    acronym_map: Mapping[str, str] | None = None,
    fallback_text: str = FALLBACK_ANSWER,
    keep: int = 5,
) -> IntentModel:
    """One intent per known topic: canonical question plus selected variations.

    Only known topics have a single direct answer passage, so only they
    become intents; inferred and out-of-KB questions must flow to fallback.
    """
    if not collection.questions:
        raise ValueError("collection has no questions")
    variations_per_topic = variations_per_topic or {}
    intents: list[Intent] = []
    seen_topics: set[str] = set()
    for question in collection.questions:
        if question.qtype != KNOWN or question.topic in seen_topics:
            continue
        seen_topics.add(question.topic)
        answer = collection.gold_answer_for(question)
        if len(answer.source_passage_ids) != 1:
            raise ValueError(
                f"known topic {question.topic!r} needs exactly one answer passage, "
                f"gold answer {answer.id!r} has {len(answer.source_passage_ids)}"
            )
        canonical = question.text
        chosen = select_variations(
            variations_per_topic.get(question.topic, ()),
            keep=keep,
            canonical=canonical,
            acronym_map=acronym_map,
        )
        utterances = [normalize_acronyms(canonical, acronym_map)]
        utterances.extend(normalize_acronyms(v, acronym_map) for v in chosen)
        intents.append(
            Intent(
                id=question.topic,
                training_utterances=tuple(utterances),
                response_text=answer.text,
                response_passage_id=answer.source_passage_ids[0],
            )
        )
    if not intents:
        raise ValueError("collection has no known topics to build intents from")
    return IntentModel(
        intents, config=config, fallback_text=fallback_text, acronym_map=acronym_map
    )


def classify(model: IntentModel, utterance: str) -> IntentDecision:
    """Best-matching intent by maximum utterance similarity, or fallback.

    Confidence is the maximum similarity over all training utterances; ties
    break by ascending intent id, which the sorted intent order guarantees.
    """
    best_id: str | None = None
    best_score = -1.0
    for intent_id, score in model.similarity(utterance):
        if score > best_score:
            best_id, best_score = intent_id, score
    confidence = max(best_score, 0.0)
    if confidence < model.config.tau:
        return IntentDecision(matched=None, confidence=confidence)
    return IntentDecision(matched=best_id, confidence=confidence)


def answer_ib(model: IntentModel, question: str | Question) -> tuple[AnswerResult, Ranking]:
    """Answer via intent matching; fallback yields an empty ranking."""
    if isinstance(question, Question):
        question_text, question_id = question.text, question.id
    else:
        question_text, question_id = question, "adhoc"
    decision = classify(model, question_text)
    if decision.matched is None:
        result = fallback_result(question_id, "ib", cutoff=None)
        return result, Ranking(question_id=question_id, entries=(), cutoff=1)
    intent = model.intent(decision.matched)
    ranking = Ranking(
        question_id=question_id,
        entries=(ScoredPassage(intent.response_passage_id, decision.confidence),),
        cutoff=1,
    )
    result = AnswerResult(
        question_id=question_id,
        text=intent.response_text,
        answered=True,
        source_passage_ids=(intent.response_passage_id,),
        pipeline="ib",
        cutoff=None,
    )
    return result, ranking
