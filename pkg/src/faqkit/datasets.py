"""Access to the bundled FAQ testbed shipped with the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .config import DataPaths
from .corpus import TestCollection, load_test_collection


def testbed_dir() -> Path:
    return Path(resources.files("faqkit")) / "data" / "testbed"


def testbed_data_paths() -> DataPaths:
    root = testbed_dir()
    return DataPaths(
        passages=root / "passages.jsonl",
        questions=root / "questions.jsonl",
        answers=root / "answers.jsonl",
        qrels=root / "qrels.txt",
        acronyms=root / "acronyms.json",
        paraphrases=root / "paraphrases.jsonl",
    )


def load_testbed() -> TestCollection:
    paths = testbed_data_paths()
    return load_test_collection(paths.passages, paths.questions, paths.answers, paths.qrels)
