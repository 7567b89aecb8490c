"""Shared token and paragraph conventions used by every text model and filter."""

from __future__ import annotations

import unicodedata

# Characters that count as punctuation for the punctuation-ratio metric:
# every Unicode codepoint in a P* category.
_PUNCT_CACHE: dict[str, bool] = {}


def normalize(text: str) -> str:
    """NFC-normalize; the single normalization applied before any tokenization."""
    return unicodedata.normalize("NFC", text)


def tokenize(text: str) -> list[str]:
    """Split NFC-normalized text on Unicode whitespace. Case is preserved."""
    return normalize(text).split()


def tokenize_lower(text: str) -> list[str]:
    """Lowercased tokens, for bag-of-words features and word-list matching."""
    return normalize(text).lower().split()


def strip_token(token: str) -> str:
    """Strip non-alphanumeric edges so 'word,' and '(word' match list entries."""
    start = 0
    end = len(token)
    while start < end and not token[start].isalnum():
        start += 1
    while end > start and not token[end - 1].isalnum():
        end -= 1
    return token[start:end]


def list_match_tokens(text: str) -> list[str]:
    """Tokens as compared against word lists: lowercased, punctuation-stripped.

    Empty results of stripping (pure-punctuation tokens) are dropped.
    """
    out = []
    for tok in tokenize_lower(text):
        stripped = strip_token(tok)
        if stripped:
            out.append(stripped)
    return out


def split_paragraphs(text: str) -> list[str]:
    """Paragraphs are the newline-separated chunks of a text body."""
    return [p for p in (part.strip() for part in text.split("\n")) if p]


def is_punctuation(ch: str) -> bool:
    cached = _PUNCT_CACHE.get(ch)
    if cached is None:
        cached = unicodedata.category(ch).startswith("P")
        _PUNCT_CACHE[ch] = cached
    return cached


def is_special(ch: str) -> bool:
    """Special characters are anything neither alphanumeric nor whitespace."""
    return not (ch.isalnum() or ch.isspace())
