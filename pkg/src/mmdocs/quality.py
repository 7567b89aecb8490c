"""Curated-vs-crawl text classifier over hashed token frequencies."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import sparse
from sklearn.base import BaseEstimator, ClassifierMixin

from .hashing import stable_hash64
from .tokens import normalize, tokenize_lower

MAGIC = "MMDOCS-QUALITY v1"
_HASH_SEED = 411
DEFAULT_HASH_DIM = 1 << 18
MIN_HASH_DIM = 1 << 10


def _sigmoid(z: np.ndarray | float) -> np.ndarray | float:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -500, 500)))


class HashedTokenQualityClassifier(BaseEstimator, ClassifierMixin):
    """Logistic regression on L2-normalized hashed token frequency vectors.

    Full-batch gradient descent with a halving line search, so the recorded
    training loss decreases strictly monotonically.
    """

    def __init__(
        self,
        hash_dim: int = DEFAULT_HASH_DIM,
        epochs: int = 100,
        learning_rate: float = 1.0,
        l2: float = 1e-4,
    ):
        self.hash_dim = hash_dim
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.l2 = l2

    def _check_dim(self) -> None:
        if self.hash_dim < MIN_HASH_DIM or self.hash_dim & (self.hash_dim - 1):
            raise ValueError(f"hash_dim must be a power of two >= {MIN_HASH_DIM}")

    def _vectorize(self, texts: Sequence[str]) -> sparse.csr_matrix:
        indptr = [0]
        indices: list[int] = []
        data: list[float] = []
        mask = self.hash_dim - 1
        for text in texts:
            tokens = tokenize_lower(normalize(text))
            bucket: dict[int, float] = {}
            for token in tokens:
                idx = stable_hash64(token.encode("utf-8"), seed=_HASH_SEED) & mask
                bucket[idx] = bucket.get(idx, 0.0) + 1.0
            if bucket:
                total = float(len(tokens))
                norm = math.sqrt(sum((v / total) ** 2 for v in bucket.values()))
                for idx in sorted(bucket):
                    indices.append(idx)
                    data.append((bucket[idx] / total) / norm)
            indptr.append(len(indices))
        return sparse.csr_matrix(
            (np.asarray(data), np.asarray(indices, dtype=np.int64), np.asarray(indptr)),
            shape=(len(texts), self.hash_dim),
        )

    def _loss(self, X: sparse.csr_matrix, y: np.ndarray, w: np.ndarray, b: float) -> float:
        z = X @ w + b
        # log(1+exp(-m)) written stably for both signs of the margin
        margins = np.where(y == 1, z, -z)
        nll = np.logaddexp(0.0, -margins).mean()
        return float(nll + 0.5 * self.l2 * float(w @ w))

    def fit(self, X: Sequence[str], y: Sequence[int]) -> "HashedTokenQualityClassifier":
        self._check_dim()
        labels = np.asarray(y, dtype=np.float64)
        if len(X) != labels.shape[0]:
            raise ValueError("X and y lengths differ")
        if labels.shape[0] == 0:
            raise ValueError("empty training data")
        present = set(labels.tolist())
        if not present <= {0.0, 1.0}:
            raise ValueError("labels must be 0 or 1")
        if present != {0.0, 1.0}:
            raise ValueError("both classes must be present")

        features = self._vectorize(X)
        n = features.shape[0]
        w = np.zeros(self.hash_dim)
        b = 0.0
        history: list[float] = []
        loss = self._loss(features, labels, w, b)
        for _ in range(self.epochs):
            p = _sigmoid(features @ w + b)
            residual = p - labels
            grad_w = features.T @ residual / n + self.l2 * w
            grad_b = float(residual.mean())
            step = self.learning_rate
            while True:
                new_w = w - step * grad_w
                new_b = b - step * grad_b
                new_loss = self._loss(features, labels, new_w, new_b)
                if new_loss < loss or step < 1e-12:
                    break
                step /= 2.0
            if new_loss >= loss:
                break  # converged: no descent direction progress left
            w, b, loss = new_w, new_b, new_loss
            history.append(loss)
        self.weights_ = w
        self.bias_ = b
        self.loss_history_ = history
        return self

    @classmethod
    def train(
        cls,
        positives: Iterable[str],
        negatives: Iterable[str],
        hash_dim: int = DEFAULT_HASH_DIM,
        **kwargs,
    ) -> "HashedTokenQualityClassifier":
        """Fit from separate curated (positive) and crawl (negative) streams."""
        pos = list(positives)
        neg = list(negatives)
        if not pos:
            raise ValueError("no positive documents")
        if not neg:
            raise ValueError("no negative documents")
        model = cls(hash_dim=hash_dim, **kwargs)
        return model.fit(pos + neg, [1] * len(pos) + [0] * len(neg))

    def score_tokens(self, tokens: Sequence[str]) -> float:
        if not hasattr(self, "weights_"):
            raise RuntimeError("model is not fitted")
        mask = self.hash_dim - 1
        bucket: dict[int, float] = {}
        for token in tokens:
            idx = stable_hash64(token.encode("utf-8"), seed=_HASH_SEED) & mask
            bucket[idx] = bucket.get(idx, 0.0) + 1.0
        z = self.bias_
        if bucket:
            total = float(len(tokens))
            norm = math.sqrt(sum((v / total) ** 2 for v in bucket.values()))
            for idx, count in bucket.items():
                z += self.weights_[idx] * (count / total) / norm
        return float(_sigmoid(z))

    def predict_proba(self, X: Sequence[str]) -> np.ndarray:
        probs = np.array([self.score_tokens(tokenize_lower(normalize(t))) for t in X])
        return np.column_stack([1.0 - probs, probs])

    def predict(self, X: Sequence[str]) -> np.ndarray:
        return (self.predict_proba(X)[:, 1] > 0.5).astype(int)

    def save(self, path: str | Path) -> None:
        nonzero = np.flatnonzero(self.weights_)
        payload = {
            "magic": MAGIC,
            "hash_dim": self.hash_dim,
            "bias": self.bias_,
            "weights": {int(i): float(self.weights_[i]) for i in nonzero},
        }
        Path(path).write_text(json.dumps(payload, sort_keys=True), "utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "HashedTokenQualityClassifier":
        payload = json.loads(Path(path).read_text("utf-8"))
        if payload.get("magic") != MAGIC:
            raise ValueError(f"not a quality model file: {path}")
        model = cls(hash_dim=payload["hash_dim"])
        weights = np.zeros(model.hash_dim)
        for key, value in payload["weights"].items():
            weights[int(key)] = value
        model.weights_ = weights
        model.bias_ = float(payload["bias"])
        model.loss_history_ = []
        return model


def score_quality(model: HashedTokenQualityClassifier, text: str) -> float:
    """Probability that the text comes from a curated corpus."""
    if not text.strip():
        raise ValueError("empty text")
    return model.score_tokens(tokenize_lower(normalize(text)))
