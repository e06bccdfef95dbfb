"""Prompt construction, answer generation, and unanswerable-question detection.

Prompt layout: the instruction template, a blank line, the question on its
own line, then each retrieved passage on its own line prefixed ``- `` in
rank order.

Two generator clients share one interface. ``RemoteChatGenerator`` speaks a
chat-completions style JSON protocol and is used with a hosted model. The
``ExtractiveGenerator`` is a deterministic stand-in: it returns the top
retrieved passages verbatim (concatenated in rank order, space separated,
truncated to a character budget) or ``NA`` when the ranking is empty or the
top score falls below its threshold. That makes the full pipeline runnable
and testable with no model hosting.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

import httpx

from .corpus import FALLBACK_ANSWER, PassageCorpus, Question
from .ranking import Ranking
from .remote import post_json

PROMPT_TEMPLATE = (
    "Generate an answer to be synthesized with text-to-speech for a virtual "
    "assistant, the answer should be based on the retrieved documents for the "
    "following question. If the retrieved documents are not related to the "
    "question, then answer NA."
)

DEFAULT_REFUSAL_PATTERNS = (
    r"^n/a$",
    r"^i(?:'m| am) sorry,? i (?:don't|do not) have an answer\b",
    r"^(?:sorry,? )?(?:i )?(?:don't|do not) know\b",
)


@dataclass(frozen=True)
class PromptPassage:
    passage_id: str
    text: str
    score: float


@dataclass(frozen=True)
class Prompt:
    text: str
    question_id: str
    passage_ids: tuple[str, ...]
    passages: tuple[PromptPassage, ...]


def build_prompt(question: str | Question, ranking: Ranking, corpus: PassageCorpus) -> Prompt:
    """Render the generation prompt for a question and its retrieved passages."""
    if isinstance(question, Question):
        question_text, question_id = question.text, question.id
    else:
        question_text, question_id = question, ranking.question_id
    passages = tuple(
        PromptPassage(e.passage_id, corpus.get(e.passage_id).text, e.score)
        for e in ranking.entries
    )
    lines = [PROMPT_TEMPLATE, "", question_text]
    lines.extend(f"- {p.text}" for p in passages)
    return Prompt(
        text="\n".join(lines),
        question_id=question_id,
        passage_ids=tuple(p.passage_id for p in passages),
        passages=passages,
    )


def detect_na(raw_text: str, refusal_patterns: tuple[str, ...] = DEFAULT_REFUSAL_PATTERNS) -> bool:
    """True when the generator declined to answer.

    Covers a bare ``NA`` (any case), ``NA`` followed by punctuation, and a
    configurable list of refusal regexes matched against the trimmed text.
    """
    text = raw_text.strip()
    if text.upper() == "NA":
        return True
    if re.match(r"^NA[\s]*[.,;:!?]", text, flags=re.IGNORECASE):
        return True
    return any(re.match(p, text, flags=re.IGNORECASE) for p in refusal_patterns)


class ExtractiveGenerator:
    """Deterministic generator: pure function of (ranking, corpus, threshold)."""

    kind = "extractive"

    def __init__(self, threshold: float = 0.0, char_budget: int = 1200):
        self.threshold = threshold
        self.char_budget = char_budget

    def generate(self, prompt: Prompt) -> str:
        if not prompt.passages or prompt.passages[0].score < self.threshold:
            return "NA"
        joined = " ".join(p.text for p in prompt.passages)
        return joined[: self.char_budget]


class RemoteChatGenerator:
    """Chat-completions style client; temperature defaults to 0 for reproducibility."""

    kind = "remote-chat"

    def __init__(
        self,
        endpoint: str,
        *,
        temperature: float = 0.0,
        max_tokens: int = 256,
        timeout: float = 60.0,
        retries: int = 3,
        headers: dict[str, str] | None = None,
        client: httpx.Client | None = None,
    ):
        self.endpoint = endpoint
        self.temperature = temperature
        self.max_tokens = max_tokens
        self._timeout = timeout
        self._retries = retries
        self._headers = headers
        self._client = client

    def chat(self, content: str) -> str:
        body = post_json(
            self.endpoint,
            {
                "messages": [{"role": "user", "content": content}],
                "temperature": self.temperature,
                "max_tokens": self.max_tokens,
            },
            timeout=self._timeout,
            retries=self._retries,
            headers=self._headers,
            client=self._client,
        )
        try:
            return str(body["choices"][0]["message"]["content"])
        except (KeyError, IndexError, TypeError):
            raise ValueError(f"malformed chat response from {self.endpoint}: {body!r}") from None

    def generate(self, prompt: Prompt) -> str:
        text = self.chat(prompt.text)
        return text if text.strip() else "NA"


GeneratorClient = ExtractiveGenerator | RemoteChatGenerator


def generate(client, prompt: Prompt) -> str:
    return client.generate(prompt)


@dataclass(frozen=True)
class AnswerResult:
    """Final system response for one question."""

    question_id: str
    text: str
    answered: bool
    source_passage_ids: tuple[str, ...]
    pipeline: str  # "ib" | "rag-bm25" | "rag-dense"
    cutoff: int | None = None
    error: str | None = None

    def __post_init__(self):
        if self.error is None and self.answered == (self.text == FALLBACK_ANSWER):
            raise ValueError("answered must be false exactly when text is the fallback message")

    def to_dict(self) -> dict:
        obj = {
            "question_id": self.question_id,
            "pipeline": self.pipeline,
            "cutoff": self.cutoff,
            "text": self.text,
            "answered": self.answered,
            "source_passages": list(self.source_passage_ids),
        }
        if self.error is not None:
            obj["error"] = self.error
        return obj

    @classmethod
    def from_dict(cls, obj: dict) -> "AnswerResult":
        return cls(
            question_id=obj["question_id"],
            text=obj["text"],
            answered=obj["answered"],
            source_passage_ids=tuple(obj.get("source_passages", ())),
            pipeline=obj["pipeline"],
            cutoff=obj.get("cutoff"),
            error=obj.get("error"),
        )


def fallback_result(question_id: str, pipeline: str, cutoff: int | None = None) -> AnswerResult:
    return AnswerResult(
        question_id=question_id,
        text=FALLBACK_ANSWER,
        answered=False,
        source_passage_ids=(),
        pipeline=pipeline,
        cutoff=cutoff,
    )


Retriever = Callable[[str, int, str], Ranking]  # (query_text, cutoff, question_id) -> Ranking


def answer_rag(
    retriever: Retriever,
    client,
    question: str | Question,
    cutoff: int,
    *,
    corpus: PassageCorpus,
    pipeline: str,
    refusal_patterns: tuple[str, ...] = DEFAULT_REFUSAL_PATTERNS,
) -> tuple[AnswerResult, Ranking]:
    """Retrieve, prompt, generate; fall back when the generator answers NA.

    The provenance ids are always a subset of the retrieved ranking; the
    fallback text is byte-identical to the out-of-KB gold answer so that
    unanswered responses can be counted exactly.
    """
    if isinstance(question, Question):
        question_text, question_id = question.text, question.id
    else:
        question_text, question_id = question, "adhoc"
    ranking = retriever(question_text, cutoff, question_id)
    prompt = build_prompt(question_text if not isinstance(question, Question) else question, ranking, corpus)
    if ranking.is_empty:
        return fallback_result(question_id, pipeline, cutoff), ranking
    text = generate(client, prompt)
    if detect_na(text, refusal_patterns):
        return fallback_result(question_id, pipeline, cutoff), ranking
    result = AnswerResult(
        question_id=question_id,
        text=text,
        answered=True,
        source_passage_ids=prompt.passage_ids,
        pipeline=pipeline,
        cutoff=cutoff,
    )
    return result, ranking
