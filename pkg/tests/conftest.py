import pathlib

import pytest

import cac

CORPUS = pathlib.Path(cac.__file__).parent / "corpus"


def corpus_source(name: str) -> str:
    return (CORPUS / f"{name}.cac").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def corpus():
    """All corpus files, loaded once."""
    return {p.stem: cac.load(p.read_text(encoding="utf-8"))
            for p in sorted(CORPUS.glob("*.cac"))}


@pytest.fixture(scope="session")
def app(corpus):
    return corpus["app"]


@pytest.fixture(scope="session")
def ndm(corpus):
    return corpus["ndm_prop"]


@pytest.fixture(scope="session")
def intf(corpus):
    return corpus["int"]


@pytest.fixture(scope="session")
def natf(corpus):
    return corpus["nat"]
