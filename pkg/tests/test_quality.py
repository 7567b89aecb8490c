"""Hashed-token quality classifier."""

from __future__ import annotations

import math
import random

import pytest

from mmdocs.quality import HashedTokenQualityClassifier, score_quality

CURATED_VOCAB = (
    "the harbour village council agreed repairs bridge stone river market "
    "morning quiet careful records ledger season autumn winter garden path "
    "letters archive museum histories fishermen tide weather granite timber"
).split()

NOISE_VOCAB = (
    "click here free winner credits jackpot xx127 zzz deal offer buy now "
    "limited gadget promo code install toolbar blink unsub ref id777 q8x "
    "mega bonus spins claim token pix vvv"
).split()


def synth_corpus(vocab: list[str], count: int, seed: int) -> list[str]:
    rng = random.Random(seed)
    docs = []
    for _ in range(count):
        words = [rng.choice(vocab) for _ in range(rng.randint(20, 40))]
        docs.append(" ".join(words))
    return docs


def test_separable_corpora_high_heldout_accuracy():
    train_pos = synth_corpus(CURATED_VOCAB, 120, seed=1)
    train_neg = synth_corpus(NOISE_VOCAB, 120, seed=2)
    test_pos = synth_corpus(CURATED_VOCAB, 60, seed=3)
    test_neg = synth_corpus(NOISE_VOCAB, 60, seed=4)
    model = HashedTokenQualityClassifier.train(
        train_pos, train_neg, hash_dim=1 << 12, epochs=60
    )
    predictions = model.predict(test_pos + test_neg)
    truth = [1] * len(test_pos) + [0] * len(test_neg)
    accuracy = sum(int(p == t) for p, t in zip(predictions, truth)) / len(truth)
    assert accuracy >= 0.9


def test_identical_classes_score_near_half():
    docs = synth_corpus(CURATED_VOCAB, 150, seed=5)
    model = HashedTokenQualityClassifier.train(docs, docs, hash_dim=1 << 12, epochs=40)
    held_out = synth_corpus(CURATED_VOCAB, 50, seed=6)
    mean_score = sum(score_quality(model, d) for d in held_out) / len(held_out)
    assert abs(mean_score - 0.5) <= 0.1


def test_train_requires_both_streams():
    with pytest.raises(ValueError):
        HashedTokenQualityClassifier.train([], ["doc"])
    with pytest.raises(ValueError):
        HashedTokenQualityClassifier.train(["doc"], [])


def test_fit_validates_labels():
    model = HashedTokenQualityClassifier(hash_dim=1 << 10, epochs=2)
    with pytest.raises(ValueError):
        model.fit([], [])
    with pytest.raises(ValueError):
        model.fit(["a", "b"], [1, 2])
    with pytest.raises(ValueError):
        model.fit(["a", "b"], [1, 1])  # one class only
    with pytest.raises(ValueError):
        model.fit(["a"], [1, 0])  # length mismatch


def test_hash_dim_must_be_power_of_two():
    for bad in (100, (1 << 10) - 1, 1 << 9):
        with pytest.raises(ValueError):
            HashedTokenQualityClassifier(hash_dim=bad).fit(["a", "b"], [1, 0])


def test_empty_token_list_scores_at_bias():
    model = HashedTokenQualityClassifier.train(
        ["alpha beta gamma"], ["zork blix quux"], hash_dim=1 << 10, epochs=10
    )
    expected = 1.0 / (1.0 + math.exp(-model.bias_))
    assert math.isclose(model.score_tokens([]), expected, rel_tol=1e-12)


def test_score_invariant_under_token_order():
    model = HashedTokenQualityClassifier.train(
        synth_corpus(CURATED_VOCAB, 30, seed=7),
        synth_corpus(NOISE_VOCAB, 30, seed=8),
        hash_dim=1 << 10,
        epochs=10,
    )
    tokens = "the quiet harbour market winner jackpot".split()
    shuffled = list(tokens)
    random.Random(9).shuffle(shuffled)
    assert math.isclose(model.score_tokens(tokens), model.score_tokens(shuffled), rel_tol=1e-12)


def test_loss_history_strictly_decreasing():
    model = HashedTokenQualityClassifier.train(
        synth_corpus(CURATED_VOCAB, 40, seed=10),
        synth_corpus(NOISE_VOCAB, 40, seed=11),
        hash_dim=1 << 10,
        epochs=30,
    )
    history = model.loss_history_
    assert len(history) >= 2
    assert all(later < earlier for earlier, later in zip(history, history[1:]))


def test_predict_proba_columns_sum_to_one():
    model = HashedTokenQualityClassifier.train(
        ["alpha beta gamma delta"], ["zork blix quux flarn"], hash_dim=1 << 10, epochs=5
    )
    proba = model.predict_proba(["alpha beta", "zork quux"])
    assert proba.shape == (2, 2)
    for row in proba:
        assert math.isclose(row.sum(), 1.0, rel_tol=1e-12)


def test_save_load_round_trip(tmp_path):
    model = HashedTokenQualityClassifier.train(
        synth_corpus(CURATED_VOCAB, 30, seed=12),
        synth_corpus(NOISE_VOCAB, 30, seed=13),
        hash_dim=1 << 10,
        epochs=10,
    )
    path = tmp_path / "quality.json"
    model.save(path)
    back = HashedTokenQualityClassifier.load(path)
    for text in ("the harbour ledger", "free promo jackpot", "mixed harbour jackpot"):
        assert math.isclose(score_quality(back, text), score_quality(model, text), rel_tol=1e-9)


def test_load_rejects_foreign_file(tmp_path):
    path = tmp_path / "other.json"
    path.write_text('{"magic": "nope"}', "utf-8")
    with pytest.raises(ValueError):
        HashedTokenQualityClassifier.load(path)


def test_score_quality_rejects_empty_text():
    model = HashedTokenQualityClassifier.train(["alpha beta"], ["zork blix"], hash_dim=1 << 10, epochs=2)
    with pytest.raises(ValueError):
        score_quality(model, "   ")


def test_unfitted_model_raises():
    with pytest.raises(RuntimeError):
        HashedTokenQualityClassifier().score_tokens(["a"])


def test_get_params_round_trip():
    model = HashedTokenQualityClassifier(hash_dim=1 << 12, epochs=7, learning_rate=0.5, l2=0.01)
    params = model.get_params()
    assert params == {"hash_dim": 1 << 12, "epochs": 7, "learning_rate": 0.5, "l2": 0.01}
