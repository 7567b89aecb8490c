from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmdocs.metrics import duplicate_window_ratio, text_metrics
from mmdocs.wordlists import WordLists

LISTS = WordLists(
    stop_words=frozenset({"the", "on"}),
    flagged_words=frozenset({"bad"}),
    spam_words=frozenset({"subscribe"}),
    common_words=frozenset({"the", "cat", "sat", "on", "mat"}),
)


def brute_force_window_ratio(items, window: int) -> float:
    """Direct enumeration of duplicate fixed-length slices."""
    slices = [tuple(items[i : i + window]) for i in range(len(items) - window + 1)]
    if len(slices) <= 1:
        return 0.0
    dups = sum(1 for i, s in enumerate(slices) if s in slices[:i])
    return dups / len(slices)


def test_stop_word_ratio_hand_count():
    m = text_metrics("the cat sat on the mat", LISTS)
    assert m.stop_word_ratio == pytest.approx(3 / 6)


def test_char_repetition_of_twenty_identical_chars():
    text = "a" * 20
    # 11 ten-char windows, the first is novel and the remaining 10 repeat it
    assert brute_force_window_ratio(text, 10) == pytest.approx(10 / 11)
    m = text_metrics(text, LISTS)
    assert m.char_repetition_ratio == pytest.approx(10 / 11)


def test_word_repetition_zero_when_all_words_distinct():
    m = text_metrics("alpha beta gamma delta epsilon zeta eta theta", LISTS)
    assert m.word_repetition_ratio == 0.0


def test_word_repetition_matches_brute_force_on_repeated_phrase():
    words = ("one two three four five " * 4).split()
    expected = brute_force_window_ratio(words, 5)
    m = text_metrics(" ".join(words), LISTS)
    assert m.word_repetition_ratio == pytest.approx(expected)
    assert expected > 0.5


def test_punctuation_ratio_counts_characters_not_tokens():
    text = "Go now."  # one '.' out of 7 characters
    m = text_metrics(text, LISTS)
    assert m.punctuation_ratio == pytest.approx(1 / 7)


def test_special_char_ratio_hand_count():
    text = "a$b c%"  # 2 special of 6 chars
    m = text_metrics(text, LISTS)
    assert m.special_char_ratio == pytest.approx(2 / 6)


def test_flagged_and_spam_and_common_ratios():
    m = text_metrics("bad cat subscribe now", LISTS)
    assert m.flagged_word_ratio == pytest.approx(1 / 4)
    assert m.spam_word_ratio == pytest.approx(1 / 4)
    assert m.common_word_ratio == pytest.approx(1 / 4)


def test_word_list_matching_ignores_case_and_edge_punctuation():
    # five whitespace tokens; "the" matches twice despite case and parens
    m = text_metrics("The cat, on (the) mat!", LISTS)
    assert m.stop_word_ratio == pytest.approx(3 / 5)
    assert m.common_word_ratio == pytest.approx(5 / 5)


def test_empty_text_is_an_error():
    with pytest.raises(ValueError):
        text_metrics("   ", LISTS)


def test_short_text_has_zero_repetition_ratios():
    m = text_metrics("short", LISTS)
    assert m.char_repetition_ratio == 0.0
    assert m.word_repetition_ratio == 0.0


def test_model_fields_stay_none_without_models():
    m = text_metrics("plain text without models", LISTS)
    assert m.lang_id_score is None
    assert m.perplexity is None


def test_lang_and_perplexity_populate_with_models(default_lm, lang_model):
    m = text_metrics(
        "The village market opens early and the stalls fill the square.",
        LISTS,
        lm=default_lm,
        lang_model=lang_model,
    )
    assert 0.0 <= m.lang_id_score <= 1.0
    assert m.perplexity > 1.0 and math.isfinite(m.perplexity)


@settings(max_examples=60, deadline=None)
@given(st.text(alphabet="ab ,.x", min_size=1, max_size=120))
def test_all_ratio_metrics_bounded_in_unit_interval(text):
    if not text.strip():
        return
    m = text_metrics(text, LISTS)
    for value in (
        m.char_repetition_ratio,
        m.word_repetition_ratio,
        m.special_char_ratio,
        m.stop_word_ratio,
        m.flagged_word_ratio,
        m.punctuation_ratio,
        m.spam_word_ratio,
        m.common_word_ratio,
    ):
        assert 0.0 <= value <= 1.0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from("abcde"), min_size=0, max_size=40), st.integers(2, 6))
def test_duplicate_window_ratio_matches_enumeration(items, window):
    assert duplicate_window_ratio(items, window) == pytest.approx(
        brute_force_window_ratio(items, window)
    )
