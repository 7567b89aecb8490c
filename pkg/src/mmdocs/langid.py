"""Character n-gram language identification with bundled profiles."""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

from sklearn.base import BaseEstimator

from .tokens import normalize

MAGIC = "MMDOCS-LANGID v1"
BUNDLED_LANGUAGES = ("de", "en", "es", "fr")

_WS_RUN = re.compile(r"\s+")


@dataclass(frozen=True)
class LanguageId:
    label: str
    score: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score out of range: {self.score}")


def _prepare(text: str) -> str:
    return _WS_RUN.sub(" ", normalize(text).lower()).strip()


def _char_ngrams(text: str, max_n: int = 3) -> Counter:
    grams: Counter = Counter()
    for n in range(1, max_n + 1):
        for i in range(len(text) - n + 1):
            grams[text[i : i + n]] += 1
    return grams


class CharNgramLanguageIdentifier(BaseEstimator):
    """Multinomial classifier over character 1..3-grams.

    Each language profile is a bag of n-gram counts; scoring sums
    additively-smoothed log-likelihoods and softmaxes across languages,
    so the returned score is a posterior under a uniform prior.
    """

    def __init__(self, max_n: int = 3, alpha: float = 0.5):
        self.max_n = max_n
        self.alpha = alpha

    def fit(self, X: Sequence[str], y: Sequence[str]) -> "CharNgramLanguageIdentifier":
        if len(X) != len(y):
            raise ValueError("X and y lengths differ")
        if not X:
            raise ValueError("empty training data")
        profiles: dict[str, Counter] = {}
        for text, label in zip(X, y):
            profiles.setdefault(label, Counter()).update(_char_ngrams(_prepare(text), self.max_n))
        self._set_profiles(profiles)
        return self

    def _set_profiles(self, profiles: dict[str, Counter]) -> None:
        if not profiles:
            raise ValueError("no language profiles")
        vocab: set[str] = set()
        for counts in profiles.values():
            vocab.update(counts)
        self.profiles_ = {lang: dict(profiles[lang]) for lang in sorted(profiles)}
        self.totals_ = {lang: sum(counts.values()) for lang, counts in self.profiles_.items()}
        # +1 leaves smoothed mass for n-grams absent from every profile.
        self.vocab_size_ = len(vocab) + 1

    def _log_likelihood(self, lang: str, grams: Counter) -> float:
        counts = self.profiles_[lang]
        denom = math.log(self.totals_[lang] + self.alpha * self.vocab_size_)
        total = 0.0
        for gram, seen in grams.items():
            total += seen * (math.log(counts.get(gram, 0) + self.alpha) - denom)
        return total

    def identify(self, text: str) -> LanguageId:
        if not hasattr(self, "profiles_"):
            raise RuntimeError("model is not fitted")
        prepared = _prepare(text)
        if not prepared:
            raise ValueError("empty input")
        grams = _char_ngrams(prepared, self.max_n)
        scores = {lang: self._log_likelihood(lang, grams) for lang in self.profiles_}
        peak = max(scores.values())
        weights = {lang: math.exp(value - peak) for lang, value in scores.items()}
        mass = sum(weights.values())
        best = max(sorted(scores), key=lambda lang: scores[lang])
        return LanguageId(label=best, score=weights[best] / mass)

    def predict(self, X: Sequence[str]) -> list[str]:
        return [self.identify(text).label for text in X]

    def predict_proba(self, X: Sequence[str]) -> list[dict[str, float]]:
        out: list[dict[str, float]] = []
        for text in X:
            prepared = _prepare(text)
            if not prepared:
                raise ValueError("empty input")
            grams = _char_ngrams(prepared, self.max_n)
            scores = {lang: self._log_likelihood(lang, grams) for lang in self.profiles_}
            peak = max(scores.values())
            weights = {lang: math.exp(value - peak) for lang, value in scores.items()}
            mass = sum(weights.values())
            out.append({lang: weight / mass for lang, weight in weights.items()})
        return out

    def save(self, path: str | Path) -> None:
        payload = {
            "magic": MAGIC,
            "max_n": self.max_n,
            "alpha": self.alpha,
            "profiles": self.profiles_,
        }
        Path(path).write_text(json.dumps(payload, ensure_ascii=False, sort_keys=True), "utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "CharNgramLanguageIdentifier":
        payload = json.loads(Path(path).read_text("utf-8"))
        if payload.get("magic") != MAGIC:
            raise ValueError(f"not a language identifier file: {path}")
        model = cls(max_n=payload["max_n"], alpha=payload["alpha"])
        model._set_profiles({lang: Counter(counts) for lang, counts in payload["profiles"].items()})
        return model

    @classmethod
    def bundled(cls) -> "CharNgramLanguageIdentifier":
        model = cls()
        profiles: dict[str, Counter] = {}
        for lang in BUNDLED_LANGUAGES:
            text = (resources.files("mmdocs") / "data" / "langid" / f"{lang}.txt").read_text("utf-8")
            profiles[lang] = _char_ngrams(_prepare(text), model.max_n)
        model._set_profiles(profiles)
        return model


_BUNDLED: Optional[CharNgramLanguageIdentifier] = None


def bundled_identifier() -> CharNgramLanguageIdentifier:
    global _BUNDLED
    if _BUNDLED is None:
        _BUNDLED = CharNgramLanguageIdentifier.bundled()
    return _BUNDLED


def detect_language(text: str, model: Optional[CharNgramLanguageIdentifier] = None) -> LanguageId:
    """Best language label with its posterior score for a non-empty text."""
    return (model or bundled_identifier()).identify(text)
