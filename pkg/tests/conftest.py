from __future__ import annotations

import pytest

from faqkit.config import RunConfig
from faqkit.corpus import Passage, PassageCorpus
from faqkit.datasets import load_testbed
from faqkit.engine import Engine


@pytest.fixture(scope="session")
def testbed():
    return load_testbed()


@pytest.fixture(scope="session")
def default_config():
    return RunConfig.default()


@pytest.fixture(scope="session")
def engine(testbed, default_config):
    return Engine(testbed, default_config)


@pytest.fixture()
def tiny_corpus():
    return PassageCorpus(
        [
            Passage("d1", "cat sat"),
            Passage("d2", "cat cat ran"),
            Passage("d3", "dog ran"),
        ]
    )
