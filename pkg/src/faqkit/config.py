"""Run configuration: one JSON file drives the CLI, harness, and service.

Every component is deterministic under the default config (extractive
generator, hashed n-gram embeddings, bundled testbed), so batch runs are
reproducible byte for byte. Endpoint credentials come from environment
variables named in the config, never from the file itself.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .lexical import Bm25Params, TokenizerConfig

PIPELINES = ("ib", "rag-bm25", "rag-dense")
DEFAULT_CUTOFFS = (1, 3, 5)


@dataclass
class DataPaths:
    passages: Path
    questions: Path
    answers: Path
    qrels: Path
    acronyms: Path | None = None
    paraphrases: Path | None = None


@dataclass
class DenseConfig:
    provider: str = "hashed-ngram"  # or "remote"
    dim: int = 256
    # None picks the provider convention: dot product for remote embeddings,
    # cosine for the hashed n-gram provider.
    similarity: str | None = None
    endpoint: str | None = None

    def resolved_similarity(self) -> str:
        if self.similarity is not None:
            return self.similarity
        return "dot" if self.provider == "remote" else "cosine"


@dataclass
class GeneratorConfig:
    kind: str = "extractive"  # or "remote-chat"
    threshold: float = 0.0
    char_budget: int = 1200
    endpoint: str | None = None
    temperature: float = 0.0
    max_tokens: int = 256
    api_key_env: str | None = None

    def headers(self) -> dict[str, str] | None:
        if self.api_key_env and os.environ.get(self.api_key_env):
            return {"Authorization": f"Bearer {os.environ[self.api_key_env]}"}
        return None


@dataclass
class MetricsConfig:
    ndcg_gain: str = "linear"
    bertscore_dim: int = 256
    bertscore_endpoint: str | None = None


@dataclass
class RunConfig:
    data: DataPaths
    pipelines: tuple[str, ...] = PIPELINES
    cutoffs: tuple[int, ...] = DEFAULT_CUTOFFS
    bm25: Bm25Params = field(default_factory=Bm25Params)
    stopwords: tuple[str, ...] | None = None
    tau: float = 0.35
    dense: DenseConfig = field(default_factory=DenseConfig)
    generator: GeneratorConfig = field(default_factory=GeneratorConfig)
    metrics: MetricsConfig = field(default_factory=MetricsConfig)
    alpha: float = 0.01
    workers: int = 1
    run_tag: str = "faqkit"

    def __post_init__(self):
        if not self.cutoffs or any(c < 1 for c in self.cutoffs):
            raise ValueError(f"cutoffs must be non-empty and >= 1, got {self.cutoffs}")
        for p in self.pipelines:
            if p not in PIPELINES:
                raise ValueError(f"unknown pipeline {p!r}, expected one of {PIPELINES}")

    def tokenizer(self) -> TokenizerConfig:
        stopwords = frozenset(self.stopwords) if self.stopwords else None
        return TokenizerConfig(stopwords=stopwords)

    def to_dict(self) -> dict:
        return {
            "data": {
                "passages": str(self.data.passages),
                "questions": str(self.data.questions),
                "answers": str(self.data.answers),
                "qrels": str(self.data.qrels),
                "acronyms": str(self.data.acronyms) if self.data.acronyms else None,
                "paraphrases": str(self.data.paraphrases) if self.data.paraphrases else None,
            },
            "pipelines": list(self.pipelines),
            "cutoffs": list(self.cutoffs),
            "bm25": {"k1": self.bm25.k1, "b": self.bm25.b},
            "stopwords": list(self.stopwords) if self.stopwords else None,
            "intent": {"tau": self.tau},
            "dense": {
                "provider": self.dense.provider,
                "dim": self.dense.dim,
                "similarity": self.dense.similarity,
                "endpoint": self.dense.endpoint,
            },
            "generator": {
                "kind": self.generator.kind,
                "threshold": self.generator.threshold,
                "char_budget": self.generator.char_budget,
                "endpoint": self.generator.endpoint,
                "temperature": self.generator.temperature,
                "max_tokens": self.generator.max_tokens,
                "api_key_env": self.generator.api_key_env,
            },
            "metrics": {
                "ndcg_gain": self.metrics.ndcg_gain,
                "bertscore_dim": self.metrics.bertscore_dim,
                "bertscore_endpoint": self.metrics.bertscore_endpoint,
            },
            "alpha": self.alpha,
            "workers": self.workers,
            "run_tag": self.run_tag,
        }

    @classmethod
    def from_dict(cls, obj: dict, base_dir: Path | None = None) -> "RunConfig":
        def _path(value: str | None) -> Path | None:
            if value is None:
                return None
            p = Path(value)
            if base_dir is not None and not p.is_absolute():
                p = base_dir / p
            return p

        data_obj = obj.get("data") or {}
        if data_obj.get("passages"):
            data = DataPaths(
                passages=_path(data_obj["passages"]),
                questions=_path(data_obj["questions"]),
                answers=_path(data_obj["answers"]),
                qrels=_path(data_obj["qrels"]),
                acronyms=_path(data_obj.get("acronyms")),
                paraphrases=_path(data_obj.get("paraphrases")),
            )
        else:
            from .datasets import testbed_data_paths

            data = testbed_data_paths()

        bm25_obj = obj.get("bm25") or {}
        dense_obj = obj.get("dense") or {}
        gen_obj = obj.get("generator") or {}
        metrics_obj = obj.get("metrics") or {}
        return cls(
            data=data,
            pipelines=tuple(obj.get("pipelines", PIPELINES)),
            cutoffs=tuple(obj.get("cutoffs", DEFAULT_CUTOFFS)),
            bm25=Bm25Params(k1=bm25_obj.get("k1", 1.2), b=bm25_obj.get("b", 0.75)),
            stopwords=tuple(obj["stopwords"]) if obj.get("stopwords") else None,
            tau=(obj.get("intent") or {}).get("tau", 0.35),
            dense=DenseConfig(
                provider=dense_obj.get("provider", "hashed-ngram"),
                dim=dense_obj.get("dim", 256),
                similarity=dense_obj.get("similarity"),
                endpoint=dense_obj.get("endpoint"),
            ),
            generator=GeneratorConfig(
                kind=gen_obj.get("kind", "extractive"),
                threshold=gen_obj.get("threshold", 0.0),
                char_budget=gen_obj.get("char_budget", 1200),
                endpoint=gen_obj.get("endpoint"),
                temperature=gen_obj.get("temperature", 0.0),
                max_tokens=gen_obj.get("max_tokens", 256),
                api_key_env=gen_obj.get("api_key_env"),
            ),
            metrics=MetricsConfig(
                ndcg_gain=metrics_obj.get("ndcg_gain", "linear"),
                bertscore_dim=metrics_obj.get("bertscore_dim", 256),
                bertscore_endpoint=metrics_obj.get("bertscore_endpoint"),
            ),
            alpha=obj.get("alpha", 0.01),
            workers=obj.get("workers", 1),
            run_tag=obj.get("run_tag", "faqkit"),
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        path = Path(path)
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh), base_dir=path.parent)

    @classmethod
    def default(cls) -> "RunConfig":
        return cls.from_dict({})
