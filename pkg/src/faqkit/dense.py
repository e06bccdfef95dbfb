"""Embedding-based exact nearest-neighbor retrieval with pluggable providers.

Two providers: a remote JSON endpoint (``POST {"texts": [...]}`` returning
``{"vectors": [[...]], "dim": n}``), and a fully deterministic local one that
hashes character trigrams of each token into a fixed-width, L2-normalized
vector. The local provider keeps the whole retrieval stack runnable and
testable with no model hosting.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from typing import Protocol, Sequence

import httpx
import numpy as np

from .corpus import PassageCorpus
from .lexical import DEFAULT_TOKENIZER, TokenizerConfig, tokenize
from .ranking import Ranking, rank_scored
from .remote import TransportError, post_json

DOT = "dot"
COSINE = "cosine"


class EmbeddingProvider(Protocol):
    id: str
    dim: int

    def embed(self, texts: Sequence[str]) -> np.ndarray: ...


class HashedNGramEmbedder:
    """Deterministic bag-of-character-trigrams embedding.

    Each token is padded with ``#`` boundary markers, its trigrams hashed
    (CRC-32) into ``dim`` buckets, and the count vector L2-normalized. The
    embedding is a pure function of the token character n-grams, so repeated
    calls and separate processes agree exactly.
    """

    def __init__(self, dim: int = 256, ngram: int = 3, config: TokenizerConfig = DEFAULT_TOKENIZER):
        if dim < 1:
            raise ValueError(f"dim must be >= 1, got {dim}")
        self.dim = dim
        self.ngram = ngram
        self.config = config
        self.id = f"hashed-ngram-{dim}"

    def _ngrams(self, text: str) -> list[str]:
        grams: list[str] = []
        for token in tokenize(text, self.config):
            padded = f"#{token}#"
            if len(padded) < self.ngram:
                grams.append(padded)
                continue
            grams.extend(padded[i : i + self.ngram] for i in range(len(padded) - self.ngram + 1))
        return grams

    def embed_one(self, text: str) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=np.float64)
        grams = self._ngrams(text) or ["<empty>"]
        for gram in grams:
            vec[zlib.crc32(gram.encode("utf-8")) % self.dim] += 1.0
        return vec / np.linalg.norm(vec)

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        if not texts:
            raise ValueError("texts must be non-empty")
        return np.stack([self.embed_one(t) for t in texts])


class RemoteEmbedder:
    """Client for the embedding wire protocol; dimension checked per call."""

    def __init__(
        self,
        endpoint: str,
        dim: int | None = None,
        *,
        timeout: float = 30.0,
        retries: int = 3,
        client: httpx.Client | None = None,
    ):
        self.endpoint = endpoint
        self.dim = dim or 0
        self.id = f"remote:{endpoint}"
        self._timeout = timeout
        self._retries = retries
        self._client = client

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        if not texts:
            raise ValueError("texts must be non-empty")
        body = post_json(
            self.endpoint,
            {"texts": list(texts)},
            timeout=self._timeout,
            retries=self._retries,
            client=self._client,
        )
        vectors = body.get("vectors")
        dim = body.get("dim")
        if not isinstance(vectors, list) or not isinstance(dim, int):
            raise TransportError(f"malformed embedding response from {self.endpoint}")
        if len(vectors) != len(texts):
            raise ValueError(
                f"embedding count mismatch: sent {len(texts)} texts, got {len(vectors)} vectors"
            )
        matrix = np.asarray(vectors, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[1] != dim:
            raise ValueError(f"embedding dimension mismatch: header says {dim}, got {matrix.shape}")
        if self.dim and dim != self.dim:
            raise ValueError(f"expected dimension {self.dim}, endpoint returned {dim}")
        if not np.all(np.isfinite(matrix)):
            raise ValueError("embedding response contains non-finite values")
        self.dim = dim
        return matrix


def embed(provider: EmbeddingProvider, texts: Sequence[str]) -> np.ndarray:
    """One vector per text, order preserved."""
    return provider.embed(texts)


@dataclass
class VectorStore:
    passage_ids: list[str]
    matrix: np.ndarray  # shape (n_passages, dim)
    similarity: str

    def __post_init__(self):
        if self.similarity not in (DOT, COSINE):
            raise ValueError(f"similarity must be 'dot' or 'cosine', got {self.similarity!r}")
        if len(self.passage_ids) != self.matrix.shape[0]:
            raise ValueError("one vector per passage required")

    def __len__(self) -> int:
        return len(self.passage_ids)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[1])

    def save(self, path) -> None:
        np.savez(
            path,
            ids=np.array(self.passage_ids),
            matrix=self.matrix,
            similarity=np.array(self.similarity),
        )

    @classmethod
    def load(cls, path) -> "VectorStore":
        with np.load(path, allow_pickle=False) as data:
            return cls(
                passage_ids=[str(i) for i in data["ids"]],
                matrix=data["matrix"],
                similarity=str(data["similarity"]),
            )


def build_store(
    corpus: PassageCorpus, provider: EmbeddingProvider, similarity: str = COSINE
) -> VectorStore:
    if len(corpus) == 0:
        raise ValueError("cannot embed an empty corpus")
    texts = [p.text for p in corpus]
    matrix = provider.embed(texts)
    if not np.all(np.isfinite(matrix)):
        raise ValueError("provider produced non-finite vectors")
    return VectorStore(passage_ids=corpus.ids(), matrix=matrix, similarity=similarity)


def similarity_scores(store: VectorStore, query_vector: np.ndarray) -> np.ndarray:
    """Similarity of the query vector against every stored passage vector."""
    q = np.asarray(query_vector, dtype=np.float64)
    if store.similarity == DOT:
        return store.matrix @ q
    qnorm = np.linalg.norm(q)
    pnorms = np.linalg.norm(store.matrix, axis=1)
    denom = pnorms * qnorm
    with np.errstate(divide="ignore", invalid="ignore"):
        sims = np.where(denom > 0.0, (store.matrix @ q) / denom, 0.0)
    return sims


def rank_vector(store: VectorStore, query_vector: np.ndarray, cutoff: int, question_id: str = "adhoc") -> Ranking:
    sims = similarity_scores(store, query_vector)
    return rank_scored(question_id, zip(store.passage_ids, sims.tolist()), cutoff)


def dense_search(
    store: VectorStore,
    provider: EmbeddingProvider,
    query_text: str,
    cutoff: int,
    question_id: str = "adhoc",
) -> Ranking:
    """Exact top-``cutoff`` by similarity. Never empty unless the store is."""
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")
    query_vector = provider.embed([query_text])[0]
    return rank_vector(store, query_vector, cutoff, question_id)
