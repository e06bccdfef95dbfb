"""Shared answering engine: one assembly of collection, indexes, and models.

The CLI batch harness and the HTTP chat service both delegate here, so the
two surfaces can never drift apart. All engine state is immutable after
construction; concurrent answering is safe.
"""

from __future__ import annotations

import time

import httpx

from . import dense, intent, lexical
from .config import RunConfig
from .corpus import Question, TestCollection, load_test_collection
from .generation import (
    AnswerResult,
    ExtractiveGenerator,
    RemoteChatGenerator,
    answer_rag,
)
from .ranking import Ranking


class Engine:
    def __init__(self, collection: TestCollection, config: RunConfig):
        self.collection = collection
        self.config = config
        self.tokenizer = config.tokenizer()
        self.index = lexical.build_index(collection.passages, self.tokenizer)

        if config.dense.provider == "remote":
            if not config.dense.endpoint:
                raise ValueError("dense.provider is 'remote' but no endpoint is configured")
            self.embedder: dense.EmbeddingProvider = dense.RemoteEmbedder(
                config.dense.endpoint, dim=config.dense.dim
            )
        else:
            self.embedder = dense.HashedNGramEmbedder(dim=config.dense.dim, config=self.tokenizer)
        self.store = dense.build_store(
            collection.passages, self.embedder, config.dense.resolved_similarity()
        )

        acronyms = (
            intent.load_acronyms(config.data.acronyms)
            if config.data.acronyms and config.data.acronyms.exists()
            else None
        )
        paraphrases = (
            intent.load_paraphrases(config.data.paraphrases)
            if config.data.paraphrases and config.data.paraphrases.exists()
            else {}
        )
        self.intent_model = intent.build_intent_model(
            collection,
            paraphrases,
            config=intent.MatcherConfig(tau=config.tau),
            acronym_map=acronyms,
        )

        if config.generator.kind == "remote-chat":
            if not config.generator.endpoint:
                raise ValueError("generator.kind is 'remote-chat' but no endpoint is configured")
            self.generator = RemoteChatGenerator(
                config.generator.endpoint,
                temperature=config.generator.temperature,
                max_tokens=config.generator.max_tokens,
                headers=config.generator.headers(),
            )
        else:
            self.generator = ExtractiveGenerator(
                threshold=config.generator.threshold,
                char_budget=config.generator.char_budget,
            )

    @classmethod
    def from_config(cls, config: RunConfig) -> "Engine":
        collection = load_test_collection(
            config.data.passages, config.data.questions, config.data.answers, config.data.qrels
        )
        return cls(collection, config)

    @property
    def modes(self) -> tuple[str, ...]:
        return self.config.pipelines

    @property
    def cutoffs(self) -> tuple[int, ...]:
        return self.config.cutoffs

    def retriever(self, mode: str):
        if mode == "rag-bm25":
            def bm25_retrieve(text: str, cutoff: int, question_id: str) -> Ranking:
                return lexical.search(
                    self.index, text, cutoff, self.config.bm25, self.tokenizer, question_id
                )

            return bm25_retrieve
        if mode == "rag-dense":
            def dense_retrieve(text: str, cutoff: int, question_id: str) -> Ranking:
                return dense.dense_search(self.store, self.embedder, text, cutoff, question_id)

            return dense_retrieve
        raise ValueError(f"no retriever for mode {mode!r}")

    def answer(
        self, question: str | Question, mode: str, cutoff: int
    ) -> tuple[AnswerResult, Ranking, dict[str, float]]:
        """Route a question through one pipeline; timings are in milliseconds."""
        if mode not in self.modes:
            raise ValueError(f"unknown mode {mode!r}, expected one of {self.modes}")
        if mode == "ib":
            started = time.perf_counter()
            result, ranking = intent.answer_ib(self.intent_model, question)
            elapsed = (time.perf_counter() - started) * 1000.0
            return result, ranking, {"retrieval_ms": elapsed, "generation_ms": 0.0}
        if cutoff not in self.cutoffs:
            raise ValueError(f"cutoff {cutoff} not in configured set {self.cutoffs}")

        retrieve = self.retriever(mode)
        timings: dict[str, float] = {}

        def timed_retrieve(text: str, k: int, question_id: str) -> Ranking:
            started = time.perf_counter()
            ranking = retrieve(text, k, question_id)
            timings["retrieval_ms"] = (time.perf_counter() - started) * 1000.0
            return ranking

        started = time.perf_counter()
        result, ranking = answer_rag(
            timed_retrieve,
            self.generator,
            question,
            cutoff,
            corpus=self.collection.passages,
            pipeline=mode,
        )
        total = (time.perf_counter() - started) * 1000.0
        timings["generation_ms"] = max(total - timings.get("retrieval_ms", 0.0), 0.0)
        return result, ranking, timings

    def remote_endpoints(self) -> dict[str, str]:
        endpoints = {}
        if self.config.dense.provider == "remote" and self.config.dense.endpoint:
            endpoints["embedder"] = self.config.dense.endpoint
        if self.config.generator.kind == "remote-chat" and self.config.generator.endpoint:
            endpoints["generator"] = self.config.generator.endpoint
        return endpoints

    def probe_remotes(self, timeout: float = 2.0) -> dict[str, bool]:
        """Reachability of configured remote endpoints (connection-level only)."""
        status = {}
        for name, url in self.remote_endpoints().items():
            try:
                httpx.head(url, timeout=timeout)
                status[name] = True
            except httpx.HTTPError:
                status[name] = False
        return status
