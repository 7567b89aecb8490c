"""Paragraph, document, and image gates with their default cutoff table."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, fields, replace
from typing import Mapping, NamedTuple, Optional, Sequence, Union

from .documents import ImageSegment, MultimodalDocument, Segment, TextSegment, merge_adjacent_text
from .langid import CharNgramLanguageIdentifier
from .metrics import CHAR_REP_WINDOW, WORD_REP_WINDOW, TextMetrics, text_metrics
from .ngram_lm import InterpolatedNgramModel
from .simplify import SENTINEL_TEXT
from .tokens import split_paragraphs
from .wordlists import WordLists

Observed = Union[int, float, str]


class FilterReason(NamedTuple):
    code: str
    observed: Observed
    cutoff: Observed


@dataclass(frozen=True)
class FilterVerdict:
    accepted: bool
    reasons: tuple[FilterReason, ...] = ()

    def __post_init__(self) -> None:
        if self.accepted == bool(self.reasons):
            raise ValueError("accepted verdicts carry no reasons, rejections at least one")

    @classmethod
    def accept(cls) -> "FilterVerdict":
        return cls(accepted=True)

    @classmethod
    def from_reasons(cls, reasons: Sequence[FilterReason]) -> "FilterVerdict":
        return cls(accepted=not reasons, reasons=tuple(reasons))


@dataclass(frozen=True)
class TextFilterProfile:
    min_words: int
    max_words: int
    max_char_repetition_ratio: float
    max_word_repetition_ratio: float
    max_special_char_ratio: float
    min_stop_word_ratio: float
    max_flagged_word_ratio: float
    min_punctuation_ratio: float
    max_spam_word_ratio: float
    min_common_word_ratio: float
    min_lang_id_score: float
    max_perplexity: float

    @classmethod
    def from_mapping(cls, data: Mapping, base: "TextFilterProfile") -> "TextFilterProfile":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown text filter keys: {sorted(unknown)}")
        return replace(base, **dict(data))


PARAGRAPH_DEFAULTS = TextFilterProfile(
    min_words=4,
    max_words=1000,
    max_char_repetition_ratio=0.1,
    max_word_repetition_ratio=0.1,
    max_special_char_ratio=0.3,
    min_stop_word_ratio=0.3,
    max_flagged_word_ratio=0.01,
    min_punctuation_ratio=0.001,
    max_spam_word_ratio=0.12,
    min_common_word_ratio=0.8,
    min_lang_id_score=0.8,
    max_perplexity=1500.0,
)

DOCUMENT_DEFAULTS = TextFilterProfile(
    min_words=10,
    max_words=2000,
    max_char_repetition_ratio=0.1,
    max_word_repetition_ratio=0.2,
    max_special_char_ratio=0.275,
    min_stop_word_ratio=0.35,
    max_flagged_word_ratio=0.01,
    min_punctuation_ratio=0.03,
    max_spam_word_ratio=0.12,
    min_common_word_ratio=0.9,
    min_lang_id_score=0.8,
    max_perplexity=1500.0,
)


@dataclass(frozen=True)
class TextFilterParams:
    paragraph: TextFilterProfile = PARAGRAPH_DEFAULTS
    document: TextFilterProfile = DOCUMENT_DEFAULTS
    char_window: int = CHAR_REP_WINDOW
    word_window: int = WORD_REP_WINDOW
    target_language: str = "en"

    @classmethod
    def from_mapping(cls, data: Mapping) -> "TextFilterParams":
        data = dict(data)
        paragraph = TextFilterProfile.from_mapping(data.pop("paragraph", {}), PARAGRAPH_DEFAULTS)
        document = TextFilterProfile.from_mapping(data.pop("document", {}), DOCUMENT_DEFAULTS)
        known = {"char_window", "word_window", "target_language"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown text filter keys: {sorted(unknown)}")
        return cls(paragraph=paragraph, document=document, **data)


@dataclass(frozen=True)
class ImageFilterParams:
    allowed_formats: frozenset[str] = frozenset({"jpg", "png", "webp"})
    min_side: int = 150
    max_side: int = 20000
    min_aspect: float = 0.5
    max_aspect: float = 2.0
    banned_url_substrings: frozenset[str] = frozenset(
        {"logo", "button", "icon", "plugin", "widget"}
    )
    min_images_per_doc: int = 1
    max_images_per_doc: int = 30

    def __post_init__(self) -> None:
        if self.min_side >= self.max_side:
            raise ValueError("min_side must be below max_side")
        if abs(self.min_aspect * self.max_aspect - 1.0) > 1e-9:
            raise ValueError("min_aspect must be the reciprocal of max_aspect")

    @classmethod
    def from_mapping(cls, data: Mapping) -> "ImageFilterParams":
        known = {f.name for f in fields(cls)}
        data = dict(data)
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown image filter keys: {sorted(unknown)}")
        for key in ("allowed_formats", "banned_url_substrings"):
            if key in data:
                data[key] = frozenset(str(v).lower() for v in data[key])
        return cls(**data)


def evaluate_profile(metrics: TextMetrics, profile: TextFilterProfile) -> FilterVerdict:
    """Apply the twelve cutoffs; min gates reject strictly-below, max strictly-above.

    Gates whose metric is None (no model supplied) do not apply.
    """
    reasons: list[FilterReason] = []

    def gate_min(code: str, observed: Optional[float], cutoff: float) -> None:
        if observed is not None and observed < cutoff:
            reasons.append(FilterReason(code, observed, cutoff))

    def gate_max(code: str, observed: Optional[float], cutoff: float) -> None:
        if observed is not None and observed > cutoff:
            reasons.append(FilterReason(code, observed, cutoff))

    gate_min("min_words", metrics.word_count, profile.min_words)
    gate_max("max_words", metrics.word_count, profile.max_words)
    gate_max(
        "max_char_repetition_ratio",
        metrics.char_repetition_ratio,
        profile.max_char_repetition_ratio,
    )
    gate_max(
        "max_word_repetition_ratio",
        metrics.word_repetition_ratio,
        profile.max_word_repetition_ratio,
    )
    gate_max("max_special_char_ratio", metrics.special_char_ratio, profile.max_special_char_ratio)
    gate_min("min_stop_word_ratio", metrics.stop_word_ratio, profile.min_stop_word_ratio)
    gate_max("max_flagged_word_ratio", metrics.flagged_word_ratio, profile.max_flagged_word_ratio)
    gate_min("min_punctuation_ratio", metrics.punctuation_ratio, profile.min_punctuation_ratio)
    gate_max("max_spam_word_ratio", metrics.spam_word_ratio, profile.max_spam_word_ratio)
    gate_min("min_common_word_ratio", metrics.common_word_ratio, profile.min_common_word_ratio)
    gate_min("min_lang_id_score", metrics.lang_id_score, profile.min_lang_id_score)
    gate_max("max_perplexity", metrics.perplexity, profile.max_perplexity)
    return FilterVerdict.from_reasons(reasons)


def filter_paragraph(
    text: str,
    profile: TextFilterProfile,
    lists: WordLists,
    lm: Optional[InterpolatedNgramModel] = None,
    lang_model: Optional[CharNgramLanguageIdentifier] = None,
    params: TextFilterParams = TextFilterParams(),
) -> FilterVerdict:
    metrics = text_metrics(
        text,
        lists,
        lm=lm,
        lang_model=lang_model,
        target_language=params.target_language,
        char_window=params.char_window,
        word_window=params.word_window,
    )
    return evaluate_profile(metrics, profile)


def filter_image(seg: ImageSegment, params: ImageFilterParams = ImageFilterParams()) -> FilterVerdict:
    if not seg.attached:
        raise ValueError(f"image has no fetched metadata: {seg.src_url}")
    reasons: list[FilterReason] = []
    if seg.format not in params.allowed_formats:
        reasons.append(
            FilterReason("format", seg.format, "|".join(sorted(params.allowed_formats)))
        )
    small_side = min(seg.width, seg.height)
    large_side = max(seg.width, seg.height)
    if small_side < params.min_side:
        reasons.append(FilterReason("too_small", small_side, params.min_side))
    if large_side > params.max_side:
        reasons.append(FilterReason("too_large", large_side, params.max_side))
    aspect = seg.width / seg.height
    if aspect > params.max_aspect:
        reasons.append(FilterReason("aspect", aspect, params.max_aspect))
    elif aspect < params.min_aspect:
        reasons.append(FilterReason("aspect", aspect, params.min_aspect))
    url = seg.src_url.lower()
    for banned in sorted(params.banned_url_substrings):
        if banned in url:
            reasons.append(FilterReason("banned_substring", banned, "absent from URL"))
            break
    return FilterVerdict.from_reasons(reasons)


@dataclass
class DocumentFilterOutcome:
    verdict: FilterVerdict
    document: Optional[MultimodalDocument]
    paragraphs_in: int = 0
    paragraphs_dropped: int = 0
    images_in: int = 0
    images_dropped: int = 0
    paragraph_reasons: Counter = field(default_factory=Counter)
    image_reasons: Counter = field(default_factory=Counter)


def filter_document(
    doc: MultimodalDocument,
    text_params: TextFilterParams = TextFilterParams(),
    image_params: ImageFilterParams = ImageFilterParams(),
    lists: WordLists = WordLists(),
    lm: Optional[InterpolatedNgramModel] = None,
    lang_model: Optional[CharNgramLanguageIdentifier] = None,
) -> DocumentFilterOutcome:
    """Drop failing paragraphs and images, then judge the cleaned document.

    The topic-break sentinel bypasses paragraph gates: extraction placed it
    deliberately and it carries no prose to measure.
    """
    outcome = DocumentFilterOutcome(verdict=FilterVerdict.accept(), document=None)
    cleaned: list[Segment] = []
    for seg in doc.segments:
        if isinstance(seg, TextSegment):
            survivors: list[str] = []
            for paragraph in split_paragraphs(seg.body):
                if paragraph == SENTINEL_TEXT:
                    survivors.append(paragraph)
                    continue
                outcome.paragraphs_in += 1
                verdict = filter_paragraph(
                    paragraph,
                    text_params.paragraph,
                    lists,
                    lm=lm,
                    lang_model=lang_model,
                    params=text_params,
                )
                if verdict.accepted:
                    survivors.append(paragraph)
                else:
                    outcome.paragraphs_dropped += 1
                    outcome.paragraph_reasons.update(r.code for r in verdict.reasons)
            if survivors:
                cleaned.append(TextSegment("\n".join(survivors)))
        else:
            outcome.images_in += 1
            verdict = filter_image(seg, image_params)
            if verdict.accepted:
                cleaned.append(seg)
            else:
                outcome.images_dropped += 1
                outcome.image_reasons.update(r.code for r in verdict.reasons)

    cleaned = merge_adjacent_text(cleaned)
    reasons: list[FilterReason] = []
    image_count = sum(1 for s in cleaned if isinstance(s, ImageSegment))
    if image_count < image_params.min_images_per_doc:
        reasons.append(FilterReason("no_images", image_count, image_params.min_images_per_doc))
    elif image_count > image_params.max_images_per_doc:
        reasons.append(
            FilterReason("too_many_images", image_count, image_params.max_images_per_doc)
        )

    body = "\n".join(s.body for s in cleaned if isinstance(s, TextSegment))
    if not body.strip():
        reasons.append(FilterReason("min_words", 0, text_params.document.min_words))
    else:
        metrics = text_metrics(
            body,
            lists,
            lm=lm,
            lang_model=lang_model,
            target_language=text_params.target_language,
            char_window=text_params.char_window,
            word_window=text_params.word_window,
        )
        reasons.extend(evaluate_profile(metrics, text_params.document).reasons)

    outcome.verdict = FilterVerdict.from_reasons(reasons)
    if cleaned:
        # The cleaned document is returned even when the verdict rejects, so
        # callers can inspect what survived; the pipeline keeps accepted only.
        outcome.document = doc.with_segments(cleaned)
    return outcome
