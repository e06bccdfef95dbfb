"""FAQ question answering with intent-based and retrieval-augmented pipelines.

The package bundles a graded FAQ test collection, two answering pipelines
(intent matching with fallback, and retrieve-then-generate with pluggable
generators), retrieval and generation metrics, Tukey-HSD significance
testing, a batch evaluation harness, and an HTTP chat service.
"""

from .corpus import (
    FALLBACK_ANSWER,
    GoldAnswer,
    Passage,
    PassageCorpus,
    Question,
    RelevanceJudgment,
    TestCollection,
    load_corpus,
    load_test_collection,
    validate,
)
from .ranking import Ranking, ScoredPassage

__version__ = "0.1.0"

__all__ = [
    "FALLBACK_ANSWER",
    "GoldAnswer",
    "Passage",
    "PassageCorpus",
    "Question",
    "Ranking",
    "RelevanceJudgment",
    "ScoredPassage",
    "TestCollection",
    "load_corpus",
    "load_test_collection",
    "validate",
    "__version__",
]
