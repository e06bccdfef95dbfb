"""Tokenization, inverted index, and Okapi BM25 ranking over a passage corpus.

The scorer sums, over the query token sequence (duplicates count twice),

    idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len / avglen))

with the non-negative idf variant ``ln(1 + (N - df + 0.5) / (df + 0.5))``,
which avoids negative contributions from terms appearing in more than half
of a small corpus.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable

from .corpus import PassageCorpus
from .ranking import Ranking, rank_scored

_WORD = re.compile(r"[^\W_]+", re.UNICODE)


@dataclass(frozen=True)
class TokenizerConfig:
    """Deterministic tokenizer settings: same text always yields same tokens."""

    lowercase: bool = True
    stopwords: frozenset[str] | None = None
    stemmer: Callable[[str], str] | None = None


DEFAULT_TOKENIZER = TokenizerConfig()


def tokenize(text: str, config: TokenizerConfig = DEFAULT_TOKENIZER) -> list[str]:
    tokens = _WORD.findall(text)
    if config.lowercase:
        tokens = [t.lower() for t in tokens]
    if config.stopwords:
        tokens = [t for t in tokens if t not in config.stopwords]
    if config.stemmer is not None:
        tokens = [config.stemmer(t) for t in tokens]
    return tokens


@dataclass(frozen=True)
class Bm25Params:
    k1: float = 1.2
    b: float = 0.75

    def __post_init__(self):
        if self.k1 < 0:
            raise ValueError(f"k1 must be >= 0, got {self.k1}")
        if not 0.0 <= self.b <= 1.0:
            raise ValueError(f"b must be in [0, 1], got {self.b}")


DEFAULT_BM25 = Bm25Params()


class InvertedIndex:
    """Term postings plus the document statistics BM25 needs.

    Postings lists are sorted by passage id; the index is immutable after
    construction and safe for concurrent searches.
    """

    def __init__(
        self,
        postings: dict[str, list[tuple[str, int]]],
        doc_lengths: dict[str, int],
        config: TokenizerConfig,
    ):
        self.postings = {t: sorted(plist) for t, plist in postings.items()}
        self.doc_lengths = dict(doc_lengths)
        self.doc_count = len(self.doc_lengths)
        total = sum(self.doc_lengths.values())
        self.avg_doc_length = total / self.doc_count if self.doc_count else 0.0
        self.config = config
        self._tf: dict[str, dict[str, int]] = {}
        for term, plist in self.postings.items():
            for pid, tf in plist:
                self._tf.setdefault(pid, {})[term] = tf

    def to_dict(self) -> dict:
        return {
            "postings": {t: [[pid, tf] for pid, tf in plist] for t, plist in self.postings.items()},
            "doc_lengths": self.doc_lengths,
            "lowercase": self.config.lowercase,
            "stopwords": sorted(self.config.stopwords) if self.config.stopwords else None,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "InvertedIndex":
        config = TokenizerConfig(
            lowercase=obj.get("lowercase", True),
            stopwords=frozenset(obj["stopwords"]) if obj.get("stopwords") else None,
        )
        postings = {
            t: [(pid, int(tf)) for pid, tf in plist] for t, plist in obj["postings"].items()
        }
        return cls(postings, obj["doc_lengths"], config)

    def df(self, term: str) -> int:
        return len(self.postings.get(term, ()))

    def idf(self, term: str) -> float:
        df = self.df(term)
        if df == 0:
            return 0.0
        return math.log(1.0 + (self.doc_count - df + 0.5) / (df + 0.5))

    def term_frequency(self, term: str, passage_id: str) -> int:
        return self._tf.get(passage_id, {}).get(term, 0)


def build_index(corpus: PassageCorpus, config: TokenizerConfig = DEFAULT_TOKENIZER) -> InvertedIndex:
    if len(corpus) == 0:
        raise ValueError("cannot index an empty corpus")
    postings: dict[str, list[tuple[str, int]]] = {}
    doc_lengths: dict[str, int] = {}
    for passage in corpus:
        tokens = tokenize(passage.text, config)
        doc_lengths[passage.id] = len(tokens)
        for term, tf in Counter(tokens).items():
            postings.setdefault(term, []).append((passage.id, tf))
    return InvertedIndex(postings, doc_lengths, config)


def bm25_score(
    index: InvertedIndex,
    query_tokens: Iterable[str],
    passage_id: str,
    params: Bm25Params = DEFAULT_BM25,
) -> float:
    if passage_id not in index.doc_lengths:
        raise ValueError(f"unknown passage id {passage_id!r}")
    length = index.doc_lengths[passage_id]
    norm = 1.0 - params.b + params.b * (length / index.avg_doc_length)
    score = 0.0
    for term in query_tokens:
        tf = index.term_frequency(term, passage_id)
        if tf == 0:
            continue
        score += index.idf(term) * tf * (params.k1 + 1.0) / (tf + params.k1 * norm)
    return score


def search(
    index: InvertedIndex,
    query_text: str,
    cutoff: int,
    params: Bm25Params = DEFAULT_BM25,
    config: TokenizerConfig | None = None,
    question_id: str = "adhoc",
) -> Ranking:
    """Rank the top-``cutoff`` passages for a query.

    Passages matching no query term are excluded, so the ranking may be
    shorter than the cutoff or empty. Ties break by ascending passage id.
    """
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")
    config = config or index.config
    query_tokens = tokenize(query_text, config)
    scores: dict[str, float] = {}
    for term, count in Counter(query_tokens).items():
        plist = index.postings.get(term)
        if not plist:
            continue
        idf = index.idf(term)
        for pid, tf in plist:
            length = index.doc_lengths[pid]
            norm = 1.0 - params.b + params.b * (length / index.avg_doc_length)
            contribution = idf * tf * (params.k1 + 1.0) / (tf + params.k1 * norm)
            scores[pid] = scores.get(pid, 0.0) + count * contribution
    return rank_scored(question_id, scores.items(), cutoff)
