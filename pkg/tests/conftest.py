import sys
from pathlib import Path

import pytest

TESTS = Path(__file__).parent
FIXTURES = TESTS / "fixtures"
sys.path.insert(0, str(TESTS))
sys.path.insert(0, str(FIXTURES))

from montee.corpus import document_from_dict  # noqa: E402
from montee.lexicon import load_lexicon  # noqa: E402


def graph_of(sentence_dict):
    """DepGraph for one fixture sentence dict (see build_fixtures.sent)."""
    doc = document_from_dict({"doc_id": "x", "sentences": [sentence_dict]})
    return doc.sentences[0].graph


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon(FIXTURES / "lex.tsv")


@pytest.fixture(scope="session")
def starter_lexicon():
    return load_lexicon(FIXTURES / "starter.tsv")


ACCEPTANCE_RESULTS = {}


@pytest.fixture
def acceptance(request):
    """Record one acceptance criterion: ``acceptance(number, title, ok, detail)``."""

    def record(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" -- {detail}" if detail else "")
        ACCEPTANCE_RESULTS[number] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_RESULTS):
            terminalreporter.write_line(ACCEPTANCE_RESULTS[number])
