"""Interpolated additive-smoothing n-gram language model for perplexity gates."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Optional, Sequence

from sklearn.base import BaseEstimator

from .tokens import normalize, tokenize

MAGIC = "MMDOCS-NGRAM v1"
UNK = "<unk>"
# NUL never survives in real tokens, so the padding symbol cannot collide
# with vocabulary entries; tokens containing NUL map to <unk> regardless.
BOS = "\x00"


def _clean_tokens(text: str) -> list[str]:
    return [t for t in tokenize(normalize(text))]


class InterpolatedNgramModel(BaseEstimator):
    """Linear interpolation of additively smoothed 1..order gram estimates.

    The vocabulary is closed over the training corpus plus <unk>; every
    conditional distribution sums to one over vocabulary plus <unk>.
    """

    def __init__(
        self,
        order: int = 5,
        alpha: float = 0.1,
        lambdas: Optional[Sequence[float]] = None,
    ):
        self.order = order
        self.alpha = alpha
        self.lambdas = lambdas

    def _resolved_lambdas(self) -> list[float]:
        if self.lambdas is None:
            return [1.0 / self.order] * self.order
        lams = [float(x) for x in self.lambdas]
        if len(lams) != self.order:
            raise ValueError("need one interpolation weight per order")
        if any(x <= 0 for x in lams) or abs(sum(lams) - 1.0) > 1e-9:
            raise ValueError("interpolation weights must be positive and sum to 1")
        return lams

    def fit(self, corpus: Iterable[str]) -> "InterpolatedNgramModel":
        if self.order < 2:
            raise ValueError("order must be >= 2")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        lams = self._resolved_lambdas()

        vocab: set[str] = set()
        docs: list[list[str]] = []
        total = 0
        for text in corpus:
            tokens = _clean_tokens(text)
            if not tokens:
                continue
            tokens = [UNK if BOS in t else t for t in tokens]
            docs.append(tokens)
            vocab.update(tokens)
            total += len(tokens)
        if total < 10 * self.order:
            raise ValueError(
                f"corpus too small: {total} tokens, need at least {10 * self.order}"
            )

        grams: list[dict[tuple[str, ...], int]] = [dict() for _ in range(self.order)]
        contexts: list[dict[tuple[str, ...], int]] = [dict() for _ in range(self.order)]
        pad = [BOS] * (self.order - 1)
        for tokens in docs:
            padded = pad + tokens
            for i in range(self.order - 1, len(padded)):
                for k in range(1, self.order + 1):
                    gram = tuple(padded[i - k + 1 : i + 1])
                    grams[k - 1][gram] = grams[k - 1].get(gram, 0) + 1
                    ctx = gram[:-1]
                    contexts[k - 1][ctx] = contexts[k - 1].get(ctx, 0) + 1

        self.vocab_ = vocab | {UNK}
        self.grams_ = grams
        self.contexts_ = contexts
        self.lambdas_ = lams
        return self

    def _check_fitted(self) -> None:
        if not hasattr(self, "grams_"):
            raise RuntimeError("model is not fitted")

    def _map(self, token: str) -> str:
        return token if token in self.vocab_ and BOS not in token else UNK

    def conditional_prob(self, token: str, context: Sequence[str]) -> float:
        """P(token | last order-1 context tokens), interpolated over orders."""
        self._check_fitted()
        v = len(self.vocab_)
        word = self._map(token)
        ctx = tuple(context)[-(self.order - 1) :]
        ctx = tuple(BOS if t == BOS else self._map(t) for t in ctx)
        ctx = (BOS,) * (self.order - 1 - len(ctx)) + ctx
        prob = 0.0
        for k in range(1, self.order + 1):
            tail = ctx[len(ctx) - (k - 1) :] if k > 1 else ()
            count = self.grams_[k - 1].get(tail + (word,), 0)
            ctx_count = self.contexts_[k - 1].get(tail, 0)
            prob += self.lambdas_[k - 1] * (count + self.alpha) / (
                ctx_count + self.alpha * v
            )
        return prob

    def logprob(self, text: str) -> tuple[float, int]:
        """Total natural-log probability and token count of the text."""
        self._check_fitted()
        tokens = _clean_tokens(text)
        if not tokens:
            raise ValueError("zero tokens")
        history: list[str] = [BOS] * (self.order - 1)
        total = 0.0
        for token in tokens:
            total += math.log(self.conditional_prob(token, history))
            history.append(self._map(token))
        return total, len(tokens)

    def perplexity(self, text: str) -> float:
        logp, count = self.logprob(text)
        return math.exp(-logp / count)

    def save(self, path: str | Path) -> None:
        self._check_fitted()

        def pack(tables: list[dict[tuple[str, ...], int]]) -> list[dict[str, int]]:
            # tokens never contain whitespace, so a space join is reversible
            return [
                {" ".join(gram): count for gram, count in sorted(table.items())}
                for table in tables
            ]

        payload = {
            "magic": MAGIC,
            "order": self.order,
            "alpha": self.alpha,
            "lambdas": self.lambdas_,
            "vocab": sorted(self.vocab_),
            "grams": pack(self.grams_),
            "contexts": pack(self.contexts_),
        }
        Path(path).write_text(json.dumps(payload, ensure_ascii=False), "utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "InterpolatedNgramModel":
        payload = json.loads(Path(path).read_text("utf-8"))
        if payload.get("magic") != MAGIC:
            raise ValueError(f"not an n-gram model file: {path}")

        def unpack(tables: list[dict[str, int]]) -> list[dict[tuple[str, ...], int]]:
            out: list[dict[tuple[str, ...], int]] = []
            for table in tables:
                unpacked: dict[tuple[str, ...], int] = {}
                for key, count in table.items():
                    unpacked[tuple(key.split(" ")) if key else ()] = count
                out.append(unpacked)
            return out

        model = cls(order=payload["order"], alpha=payload["alpha"], lambdas=payload["lambdas"])
        model.vocab_ = set(payload["vocab"])
        model.grams_ = unpack(payload["grams"])
        model.contexts_ = unpack(payload["contexts"])
        model.lambdas_ = [float(x) for x in payload["lambdas"]]
        return model


def train_ngram_lm(corpus: Iterable[str], order: int = 5, **kwargs) -> InterpolatedNgramModel:
    return InterpolatedNgramModel(order=order, **kwargs).fit(corpus)


def perplexity(lm: InterpolatedNgramModel, text: str) -> float:
    """exp(-mean log-probability per token); finite and greater than 1."""
    return lm.perplexity(text)
