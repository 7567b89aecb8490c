"""Stable 64-bit string hashing.

Python's built-in hash() is salted per process, so everything that must be
reproducible across runs and platforms (feature hashing, MinHash, paragraph
and image-set keys) goes through blake2b with a fixed or caller-supplied key.
"""

from __future__ import annotations

from hashlib import blake2b

_MASK64 = (1 << 64) - 1


def stable_hash64(data: str | bytes, seed: int = 0) -> int:
    """Deterministic 64-bit hash of a string or byte sequence."""
    if isinstance(data, str):
        data = data.encode("utf-8")
    key = seed.to_bytes(8, "little") if seed else b""
    return int.from_bytes(blake2b(data, digest_size=8, key=key).digest(), "little")


def stable_digest(data: str | bytes, length: int = 16) -> str:
    """Short stable hex digest, for content keys in counters and manifests."""
    if isinstance(data, str):
        data = data.encode("utf-8")
    return blake2b(data, digest_size=length // 2).hexdigest()


def mix64(value: int, seed: int) -> int:
    """Cheap seeded remix of an already-uniform 64-bit value (splitmix64 step)."""
    z = (value + 0x9E3779B97F4A7C15 * (seed + 1)) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)
