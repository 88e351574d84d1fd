import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from formalmt.fixtures import load_fixture  # noqa: E402


@pytest.fixture(scope="session")
def de_corpus():
    return load_fixture("en-de.test.tsv")


@pytest.fixture(scope="session")
def it_corpus():
    return load_fixture("en-it.test.tsv")


@pytest.fixture(scope="session")
def ja_corpus():
    return load_fixture("en-ja.test.tsv")


@pytest.fixture(scope="session")
def es_train():
    return load_fixture("en-es.train.tsv")


def write_lines(path, lines):
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return path
