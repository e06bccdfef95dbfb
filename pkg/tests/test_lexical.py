from __future__ import annotations

import math
import random

import pytest

from faqkit.lexical import (
    Bm25Params,
    TokenizerConfig,
    bm25_score,
    build_index,
    search,
    tokenize,
)
from faqkit.corpus import Passage, PassageCorpus
from faqkit.ranking import Ranking, ScoredPassage, read_trec_run, trec_lines, write_trec_run


# ---------------------------------------------------------------- tokenizer

@pytest.mark.parametrize(
    ("text", "expected"),
    [
        ("Is the transfer automatic?", ["is", "the", "transfer", "automatic"]),
        ("", []),
        ("CS/SE degrees", ["cs", "se", "degrees"]),
        ("snake_case stays split", ["snake", "case", "stays", "split"]),
    ],
)
def test_tokenize(text, expected):
    assert tokenize(text) == expected


def test_tokenize_stopwords_and_stemmer():
    config = TokenizerConfig(stopwords=frozenset({"the"}), stemmer=lambda t: t.rstrip("s"))
    assert tokenize("The cats sat", config) == ["cat", "sat"]


def test_tokenize_deterministic():
    text = "Déjà vu: Ünïcode words, 42 times!"
    assert tokenize(text) == tokenize(text)


# ------------------------------------------------------------------- index

def test_build_index_statistics(tiny_corpus):
    index = build_index(tiny_corpus)
    assert index.doc_count == 3
    assert index.avg_doc_length == pytest.approx(7 / 3)
    assert index.doc_lengths == {"d1": 2, "d2": 3, "d3": 2}
    assert "zebra" not in index.postings


def test_build_index_empty_corpus_raises():
    with pytest.raises(ValueError):
        build_index(PassageCorpus([]))


def test_index_testbed_doc_count(testbed):
    index = build_index(testbed.passages)
    assert index.doc_count == 120


def test_postings_sorted_by_passage_id(testbed):
    index = build_index(testbed.passages)
    for plist in index.postings.values():
        assert plist == sorted(plist)


def test_index_round_trips_through_dict(tiny_corpus):
    index = build_index(tiny_corpus)
    clone = type(index).from_dict(index.to_dict())
    assert clone.postings == index.postings
    assert clone.avg_doc_length == index.avg_doc_length


# -------------------------------------------------------------------- bm25
# Hand-evaluated fixture, k1=1.2, b=0.75, idf = ln(1 + (N-df+0.5)/(df+0.5)):
#   "cat": df=2, idf = ln(1.6) = 0.470004
#   d1: tf=1, len=2, avg=7/3 -> denom = 1 + 1.2*(0.25 + 0.75*6/7) = 2.071429
#       score = 0.470004 * 2.2 / 2.071429 = 0.499177
#   d2: tf=2, len=3 -> denom = 2 + 1.2*(0.25 + 0.75*9/7) = 3.457143
#       score = 0.470004 * 4.4 / 3.457143 = 0.598188

def test_bm25_fixture_scores(tiny_corpus):
    index = build_index(tiny_corpus)
    assert bm25_score(index, ["cat"], "d1") == pytest.approx(0.4992, abs=1e-3)
    assert bm25_score(index, ["cat"], "d2") == pytest.approx(0.5982, abs=1e-3)


def test_bm25_absent_term_scores_zero(tiny_corpus):
    index = build_index(tiny_corpus)
    for doc in ("d1", "d2", "d3"):
        assert bm25_score(index, ["zebra"], doc) == 0.0


def test_bm25_unknown_passage_raises(tiny_corpus):
    index = build_index(tiny_corpus)
    with pytest.raises(ValueError):
        bm25_score(index, ["cat"], "d99")


def test_bm25_params_validation():
    with pytest.raises(ValueError):
        Bm25Params(k1=-0.1)
    with pytest.raises(ValueError):
        Bm25Params(b=1.5)
    assert Bm25Params() == Bm25Params(k1=1.2, b=0.75)


# ------------------------------------------------------------------ search

def test_search_ranks_d2_above_d1(tiny_corpus):
    index = build_index(tiny_corpus)
    ranking = search(index, "cat", cutoff=2)
    assert ranking.ids() == ["d2", "d1"]


def test_search_unmatched_query_is_empty(tiny_corpus):
    index = build_index(tiny_corpus)
    ranking = search(index, "zebra", cutoff=5)
    assert ranking.is_empty


def test_search_cutoff_one_returns_argmax(tiny_corpus):
    index = build_index(tiny_corpus)
    full = search(index, "cat ran", cutoff=3)
    top = search(index, "cat ran", cutoff=1)
    assert top.ids() == full.ids()[:1]


def test_search_rejects_bad_cutoff(tiny_corpus):
    index = build_index(tiny_corpus)
    with pytest.raises(ValueError):
        search(index, "cat", cutoff=0)


def test_search_deterministic_with_ties():
    corpus = PassageCorpus(
        [Passage("b", "apple"), Passage("a", "apple"), Passage("c", "apple")]
    )
    index = build_index(corpus)
    first = search(index, "apple", cutoff=3)
    for _ in range(5):
        again = search(index, "apple", cutoff=3)
        assert again.entries == first.entries
    assert first.ids() == ["a", "b", "c"]  # ties break by ascending id


def test_tf_monotonicity():
    # raising a query term's tf in one passage never decreases its score
    base = PassageCorpus(
        [Passage("x", "cat dog bird fish"), Passage("y", "dog bird fish frog")]
    )
    more = PassageCorpus(
        [Passage("x", "cat cat dog bird"), Passage("y", "dog bird fish frog")]
    )
    # same length and df for "cat"; only tf changes 1 -> 2
    s1 = bm25_score(build_index(base), ["cat"], "x")
    s2 = bm25_score(build_index(more), ["cat"], "x")
    assert s2 > s1


# ------------------------------------------- brute-force oracle equivalence

def brute_force_bm25(docs: dict[str, list[str]], query: list[str], pid: str, k1: float, b: float) -> float:
    """Straight evaluation of the scoring formula from raw token lists."""
    n = len(docs)
    avg = sum(len(toks) for toks in docs.values()) / n
    score = 0.0
    for term in query:
        df = sum(1 for toks in docs.values() if term in toks)
        if df == 0 or term not in docs[pid]:
            continue
        idf = math.log(1 + (n - df + 0.5) / (df + 0.5))
        tf = docs[pid].count(term)
        score += idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len(docs[pid]) / avg))
    return score


def test_bm25_matches_brute_force_on_random_corpora():
    rng = random.Random(20240809)
    vocab = ["ant", "bee", "cow", "dog", "elk", "fox", "gnu", "hen"]
    for _ in range(300):
        n_docs = rng.randint(2, 10)
        docs = {
            f"p{i}": [rng.choice(vocab) for _ in range(rng.randint(1, 12))]
            for i in range(n_docs)
        }
        corpus = PassageCorpus([Passage(pid, " ".join(toks)) for pid, toks in docs.items()])
        params = Bm25Params(k1=rng.uniform(0.0, 2.0), b=rng.uniform(0.0, 1.0))
        index = build_index(corpus)
        query = [rng.choice(vocab + ["yak"]) for _ in range(rng.randint(1, 4))]
        for pid in docs:
            expected = brute_force_bm25(docs, query, pid, params.k1, params.b)
            assert bm25_score(index, query, pid, params) == pytest.approx(expected, abs=1e-9)
        # search agrees with scoring every matching doc explicitly
        ranking = search(index, " ".join(query), cutoff=n_docs, params=params)
        for entry in ranking.entries:
            expected = brute_force_bm25(docs, query, entry.passage_id, params.k1, params.b)
            assert entry.score == pytest.approx(expected, abs=1e-9)
            assert expected > 0.0


# -------------------------------------------------------------- TREC output

def test_trec_lines_format():
    ranking = Ranking(
        question_id="q001",
        entries=(ScoredPassage("p002", 1.5),),
        cutoff=3,
    )
    assert trec_lines(ranking, "tag1") == ["q001 Q0 p002 1 1.500000 tag1"]


def test_trec_run_round_trip(tmp_path, tiny_corpus):
    index = build_index(tiny_corpus)
    rankings = [search(index, "cat ran", cutoff=3, question_id="q1"),
                search(index, "dog", cutoff=2, question_id="q2")]
    path = tmp_path / "out.run"
    write_trec_run(rankings, path, "t")
    parsed = read_trec_run(path)
    assert [pid for pid, _, _ in parsed["q1"]] == rankings[0].ids()
    assert [rank for _, rank, _ in parsed["q1"]] == [1, 2, 3]
    assert [pid for pid, _, _ in parsed["q2"]] == rankings[1].ids()
