"""The twelve per-text measurements behind the paragraph and document gates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .langid import CharNgramLanguageIdentifier
from .ngram_lm import InterpolatedNgramModel
from .tokens import is_punctuation, is_special, list_match_tokens, normalize, tokenize
from .wordlists import WordLists

CHAR_REP_WINDOW = 10
WORD_REP_WINDOW = 5


@dataclass(frozen=True)
class TextMetrics:
    word_count: int
    char_repetition_ratio: float
    word_repetition_ratio: float
    special_char_ratio: float
    stop_word_ratio: float
    flagged_word_ratio: float
    punctuation_ratio: float
    spam_word_ratio: float
    common_word_ratio: float
    lang_id_score: Optional[float]
    perplexity: Optional[float]


def duplicate_window_ratio(items: "list | str", window: int) -> float:
    """Fraction of length-`window` slices that repeat an earlier slice.

    Fewer than two slices means nothing can repeat, so the ratio is 0.
    """
    total = len(items) - window + 1
    if total <= 1:
        return 0.0
    seen: set = set()
    duplicates = 0
    for i in range(total):
        piece = items[i : i + window]
        key = piece if isinstance(piece, str) else tuple(piece)
        if key in seen:
            duplicates += 1
        else:
            seen.add(key)
    return duplicates / total


def _ratio(count: int, total: int) -> float:
    return count / total if total else 0.0


def text_metrics(
    text: str,
    lists: WordLists,
    lm: Optional[InterpolatedNgramModel] = None,
    lang_model: Optional[CharNgramLanguageIdentifier] = None,
    target_language: str = "en",
    char_window: int = CHAR_REP_WINDOW,
    word_window: int = WORD_REP_WINDOW,
) -> TextMetrics:
    """Measure one text against the full filter metric set.

    Model-backed fields (lang_id_score, perplexity) stay None when the
    corresponding model is not supplied; their gates then do not apply.
    """
    text = normalize(text)
    if not text.strip():
        raise ValueError("empty text")

    tokens = tokenize(text)
    matchable = list_match_tokens(text)
    chars = len(text)
    special = sum(1 for ch in text if is_special(ch))
    punct = sum(1 for ch in text if is_punctuation(ch))

    lang_score: Optional[float] = None
    if lang_model is not None:
        lang_score = lang_model.predict_proba([text])[0].get(target_language, 0.0)
    ppl: Optional[float] = None
    if lm is not None and tokens:
        ppl = lm.perplexity(text)

    return TextMetrics(
        word_count=len(tokens),
        char_repetition_ratio=duplicate_window_ratio(text, char_window),
        word_repetition_ratio=duplicate_window_ratio(tokens, word_window),
        special_char_ratio=_ratio(special, chars),
        stop_word_ratio=_ratio(sum(1 for t in matchable if t in lists.stop_words), len(tokens)),
        flagged_word_ratio=_ratio(
            sum(1 for t in matchable if t in lists.flagged_words), len(tokens)
        ),
        punctuation_ratio=_ratio(punct, chars),
        spam_word_ratio=_ratio(sum(1 for t in matchable if t in lists.spam_words), len(tokens)),
        common_word_ratio=_ratio(
            sum(1 for t in matchable if t in lists.common_words), len(tokens)
        ),
        lang_id_score=lang_score,
        perplexity=ppl,
    )
