from __future__ import annotations

import sys
from pathlib import Path

import pytest

from mmdocs.documents import ImageSegment, MultimodalDocument, TextSegment
from mmdocs.langid import bundled_identifier
from mmdocs.pipeline import build_default_lm, build_default_quality_model, bundled_corpus_lines
from mmdocs.wordlists import WordLists

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_corpus_dir() -> Path:
    return FIXTURES / "corpus"


@pytest.fixture(scope="session")
def golden_final_path() -> Path:
    return FIXTURES / "golden_final.jsonl"


@pytest.fixture(scope="session")
def realpage_paths() -> list[Path]:
    return sorted((FIXTURES / "realpages").glob("*.html"))


@pytest.fixture(scope="session")
def corpus_lines() -> list[str]:
    return bundled_corpus_lines()


@pytest.fixture(scope="session")
def default_lm():
    return build_default_lm()


@pytest.fixture(scope="session")
def quality_model():
    # small dimension keeps the bootstrap under a second
    return build_default_quality_model(hash_dim=1 << 16, epochs=50)


@pytest.fixture(scope="session")
def lang_model():
    return bundled_identifier()


@pytest.fixture(scope="session")
def word_lists() -> WordLists:
    return WordLists.bundled()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One verdict line per release-gate guarantee, printed after the run."""
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "ACCEPTANCE_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


def make_doc(
    url: str = "https://example.org/a",
    fetch_time: int = 100,
    text: str | None = "a quiet morning on the harbour wall",
    images: tuple[str, ...] = ("https://example.org/i/one.jpg",),
    doc_id: str | None = None,
) -> MultimodalDocument:
    """One text segment followed by the given images; text=None drops the text."""
    segments: list = []
    if text is not None:
        segments.append(TextSegment(text))
    segments.extend(ImageSegment(u, width=400, height=300, format="jpg") for u in images)
    return MultimodalDocument(url=url, fetch_time=fetch_time, segments=segments, doc_id=doc_id)
