from pathlib import Path

import pytest

from reqlattice import corpus_io

CORPORA = Path(__file__).resolve().parent.parent / "corpora"


@pytest.fixture(scope="session")
def worked_example_path() -> Path:
    return CORPORA / "worked-example.reqcorpus.json"


@pytest.fixture(scope="session")
def change_set_path() -> Path:
    return CORPORA / "worked-example.reqchange.json"


@pytest.fixture(scope="session")
def alts_path() -> Path:
    return CORPORA / "worked-example.reqalts.json"


@pytest.fixture()
def worked_example(worked_example_path):
    return corpus_io.load_corpus(worked_example_path)
