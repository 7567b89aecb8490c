from __future__ import annotations

from mmdocs.hashing import mix64, stable_digest, stable_hash64


def test_hash_is_stable_across_calls_and_input_types():
    assert stable_hash64("abc") == stable_hash64(b"abc")
    assert stable_hash64("abc") == stable_hash64("abc")


def test_seed_changes_the_hash():
    assert stable_hash64("abc", seed=1) != stable_hash64("abc", seed=2)


def test_hash_fits_in_64_bits():
    for text in ("", "x", "a longer sentence with several words"):
        assert 0 <= stable_hash64(text) < (1 << 64)


def test_digest_is_hex_of_requested_length():
    digest = stable_digest("page-url", length=16)
    assert len(digest) == 16
    int(digest, 16)  # parses as hex


def test_mix64_is_deterministic_and_seed_sensitive():
    assert mix64(12345, 7) == mix64(12345, 7)
    assert mix64(12345, 7) != mix64(12345, 8)
