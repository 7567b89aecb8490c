"""Word lists behind the ratio filters: stop, flagged, spam, common."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Iterable

from .tokens import list_match_tokens, normalize


def load_word_list(path: str | Path) -> frozenset[str]:
    """One token per line, '#' starts a comment, entries lowercased and NFC."""
    out: set[str] = set()
    for raw in Path(path).read_text("utf-8").splitlines():
        entry = raw.split("#", 1)[0].strip()
        if entry:
            out.add(normalize(entry).lower())
    return frozenset(out)


def _bundled_list(name: str) -> frozenset[str]:
    text = (resources.files("mmdocs") / "data" / name).read_text("utf-8")
    out: set[str] = set()
    for raw in text.splitlines():
        entry = raw.split("#", 1)[0].strip()
        if entry:
            out.add(normalize(entry).lower())
    return frozenset(out)


def build_common_words(corpus: Iterable[str], min_count: int = 2) -> frozenset[str]:
    """Corpus-global vocabulary of words seen at least min_count times.

    Words are lowercased with punctuation stripped from their edges; the
    count is global, so twice within one document qualifies.
    """
    counts: Counter = Counter()
    for text in corpus:
        counts.update(list_match_tokens(text))
    return frozenset(word for word, n in counts.items() if n >= min_count)


@dataclass(frozen=True)
class WordLists:
    stop_words: frozenset[str] = frozenset()
    flagged_words: frozenset[str] = frozenset()
    spam_words: frozenset[str] = frozenset()
    common_words: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        for name in ("stop_words", "flagged_words", "spam_words", "common_words"):
            words = getattr(self, name)
            for word in words:
                if word != normalize(word).lower():
                    raise ValueError(f"{name} entry not lowercase NFC: {word!r}")

    @classmethod
    def bundled(cls) -> "WordLists":
        return cls(
            stop_words=_bundled_list("stopwords_en.txt"),
            flagged_words=_bundled_list("flagged_words.txt"),
            spam_words=_bundled_list("spam_words.txt"),
        )

    def with_common_words(self, corpus: Iterable[str], min_count: int = 2) -> "WordLists":
        return replace(self, common_words=build_common_words(corpus, min_count))

    def with_common_word_set(self, words: Iterable[str]) -> "WordLists":
        return replace(self, common_words=frozenset(normalize(w).lower() for w in words))
