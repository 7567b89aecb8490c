"""Near-duplicate detection, repetition gates, and corpus-global dedup passes."""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .documents import (
    ImageSegment,
    MultimodalDocument,
    Segment,
    TextSegment,
    merge_adjacent_text,
)
from .filters import FilterReason, FilterVerdict
from .hashing import stable_digest, stable_hash64
from .simplify import SENTINEL_TEXT
from .tokens import normalize, split_paragraphs, tokenize

NUM_HASHES = 16
SHINGLE_SIZE = 5
LSH_BANDS = 4
LSH_ROWS = 4
DEFAULT_THRESHOLD = 0.8
DEFAULT_SEED = 97

# Largest Mersenne prime below 2^64; universal hashing over its field keeps
# the per-slot collision probability close to the true Jaccard index.
_PRIME = (1 << 61) - 1


def shingle_text(text: str, size: int = SHINGLE_SIZE) -> set[str]:
    """Word n-gram shingles; short texts collapse to one whole-text shingle."""
    tokens = tokenize(text)
    if not tokens:
        raise ValueError("empty text")
    if len(tokens) < size:
        return {" ".join(tokens)}
    return {" ".join(tokens[i : i + size]) for i in range(len(tokens) - size + 1)}


def _hash_params(num_hashes: int, seed: int) -> list[tuple[int, int]]:
    rng = random.Random(seed)
    return [(rng.randrange(1, _PRIME), rng.randrange(_PRIME)) for _ in range(num_hashes)]


def signature_from_shingles(
    shingles: Iterable[str], num_hashes: int = NUM_HASHES, seed: int = DEFAULT_SEED
) -> tuple[int, ...]:
    params = _hash_params(num_hashes, seed)
    slots = [_PRIME] * num_hashes
    seen_any = False
    for shingle in shingles:
        seen_any = True
        base = stable_hash64(shingle.encode("utf-8")) % _PRIME
        for i, (a, b) in enumerate(params):
            value = (a * base + b) % _PRIME
            if value < slots[i]:
                slots[i] = value
    if not seen_any:
        raise ValueError("no shingles")
    return tuple(slots)


def minhash_signature(
    text: str,
    num_hashes: int = NUM_HASHES,
    shingle_size: int = SHINGLE_SIZE,
    seed: int = DEFAULT_SEED,
) -> tuple[int, ...]:
    return signature_from_shingles(shingle_text(text, shingle_size), num_hashes, seed)


def estimate_similarity(a: Sequence[int], b: Sequence[int]) -> float:
    if len(a) != len(b) or not a:
        raise ValueError("signatures must have equal nonzero length")
    return sum(1 for x, y in zip(a, b) if x == y) / len(a)


def exact_jaccard(a: set[str], b: set[str]) -> float:
    union = len(a | b)
    return len(a & b) / union if union else 1.0


class _UnionFind:
    def __init__(self) -> None:
        self._parent: dict[str, str] = {}

    def add(self, item: str) -> None:
        self._parent.setdefault(item, item)

    def find(self, item: str) -> str:
        root = item
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[item] != root:
            self._parent[item], item = root, self._parent[item]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self._parent[rb] = ra


def dedup_minhash(
    items: Iterable[tuple[str, str]],
    threshold: float = DEFAULT_THRESHOLD,
    num_hashes: int = NUM_HASHES,
    bands: int = LSH_BANDS,
    rows: int = LSH_ROWS,
    shingle_size: int = SHINGLE_SIZE,
    seed: int = DEFAULT_SEED,
) -> list[str]:
    """Cluster near-duplicates and keep the earliest-seen id of each cluster.

    items are (id, text) pairs; ids must be unique. LSH bands propose
    candidates, the signature estimate >= threshold confirms them.
    """
    if bands * rows != num_hashes:
        raise ValueError("bands * rows must equal num_hashes")
    order: list[str] = []
    signatures: dict[str, tuple[int, ...]] = {}
    buckets: dict[tuple[int, tuple[int, ...]], list[str]] = {}
    uf = _UnionFind()
    for doc_id, text in items:
        if doc_id in signatures:
            raise ValueError(f"duplicate id: {doc_id}")
        sig = minhash_signature(text, num_hashes, shingle_size, seed)
        order.append(doc_id)
        signatures[doc_id] = sig
        uf.add(doc_id)
        for band in range(bands):
            key = (band, sig[band * rows : (band + 1) * rows])
            peers = buckets.setdefault(key, [])
            for peer in peers:
                if uf.find(peer) == uf.find(doc_id):
                    continue
                if estimate_similarity(sig, signatures[peer]) >= threshold:
                    uf.union(peer, doc_id)
            peers.append(doc_id)

    survivors: list[str] = []
    seen_roots: set[str] = set()
    for doc_id in order:
        root = uf.find(doc_id)
        if root not in seen_roots:
            seen_roots.add(root)
            survivors.append(doc_id)
    return survivors


# --- MassiveText-style repetition measurements ---

TOP_NGRAM_SIZES = (2, 3, 4)
DUP_NGRAM_SIZES = (5, 6, 7, 8, 9, 10)


@dataclass(frozen=True)
class RepetitionStats:
    duplicate_line_fraction: float
    duplicate_line_char_fraction: float
    top_ngram_char_fraction: dict[int, float]
    duplicate_ngram_char_fraction: dict[int, float]


@dataclass(frozen=True)
class RepetitionThresholds:
    duplicate_line_fraction: float = 0.30
    duplicate_line_char_fraction: float = 0.20
    top_ngram_char_fraction: dict[int, float] = field(
        default_factory=lambda: {2: 0.20, 3: 0.18, 4: 0.16}
    )
    duplicate_ngram_char_fraction: dict[int, float] = field(
        default_factory=lambda: {5: 0.15, 6: 0.14, 7: 0.13, 8: 0.12, 9: 0.11, 10: 0.10}
    )


def repetition_stats(text: str) -> RepetitionStats:
    """Line- and n-gram-level repetition fractions of one document's text."""
    text = normalize(text)
    lines = [line.strip() for line in text.split("\n")]
    lines = [line for line in lines if line]
    line_counts = Counter(lines)
    dup_lines = sum(count - 1 for count in line_counts.values())
    dup_line_chars = sum(len(line) * (count - 1) for line, count in line_counts.items())
    total_lines = len(lines)
    total_line_chars = sum(len(line) for line in lines)

    tokens = tokenize(text)
    total_chars = len(text)

    def covered_fraction(size: int, top_only: bool) -> float:
        if len(tokens) < size or total_chars == 0:
            return 0.0
        windows: dict[tuple[str, ...], list[int]] = {}
        for i in range(len(tokens) - size + 1):
            windows.setdefault(tuple(tokens[i : i + size]), []).append(i)
        if top_only:
            # The single most frequent n-gram; ties go to the one covering
            # more characters, then lexicographic order for determinism.
            best = max(
                windows.items(),
                key=lambda kv: (len(kv[1]), sum(len(t) for t in kv[0]), kv[0]),
            )
            if len(best[1]) < 2:
                return 0.0
            chosen = [best]
        else:
            chosen = [(gram, pos) for gram, pos in windows.items() if len(pos) >= 2]
        marked: set[int] = set()
        for gram, positions in chosen:
            for start in positions:
                marked.update(range(start, start + size))
        covered = sum(len(tokens[i]) for i in marked)
        return covered / total_chars

    return RepetitionStats(
        duplicate_line_fraction=dup_lines / total_lines if total_lines else 0.0,
        duplicate_line_char_fraction=(
            dup_line_chars / total_line_chars if total_line_chars else 0.0
        ),
        top_ngram_char_fraction={n: covered_fraction(n, True) for n in TOP_NGRAM_SIZES},
        duplicate_ngram_char_fraction={n: covered_fraction(n, False) for n in DUP_NGRAM_SIZES},
    )


def repetition_gate(
    stats: RepetitionStats, thresholds: RepetitionThresholds = RepetitionThresholds()
) -> FilterVerdict:
    reasons: list[FilterReason] = []
    if stats.duplicate_line_fraction > thresholds.duplicate_line_fraction:
        reasons.append(
            FilterReason(
                "duplicate_line_fraction",
                stats.duplicate_line_fraction,
                thresholds.duplicate_line_fraction,
            )
        )
    if stats.duplicate_line_char_fraction > thresholds.duplicate_line_char_fraction:
        reasons.append(
            FilterReason(
                "duplicate_line_char_fraction",
                stats.duplicate_line_char_fraction,
                thresholds.duplicate_line_char_fraction,
            )
        )
    for n, cutoff in sorted(thresholds.top_ngram_char_fraction.items()):
        observed = stats.top_ngram_char_fraction.get(n, 0.0)
        if observed > cutoff:
            reasons.append(FilterReason(f"top_{n}gram_char_fraction", observed, cutoff))
    for n, cutoff in sorted(thresholds.duplicate_ngram_char_fraction.items()):
        observed = stats.duplicate_ngram_char_fraction.get(n, 0.0)
        if observed > cutoff:
            reasons.append(FilterReason(f"duplicate_{n}gram_char_fraction", observed, cutoff))
    return FilterVerdict.from_reasons(reasons)


# --- corpus-global counting and the passes driven by it ---


def paragraph_digest(paragraph: str) -> str:
    """Identity for paragraph dedup: NFC bytes with surrounding space trimmed."""
    return stable_digest(normalize(paragraph).strip().encode("utf-8"))


def image_set_digest(urls: Iterable[str]) -> str:
    return stable_digest("\n".join(sorted(set(urls))).encode("utf-8"))


def _latest_key(fetch_time: int, doc_id: str) -> tuple[int, str]:
    return (fetch_time, doc_id)


@dataclass
class CorpusCounters:
    """Mergeable per-shard tallies feeding the corpus-global dedup passes."""

    image_url_counts: Counter = field(default_factory=Counter)
    domain_paragraph_counts: Counter = field(default_factory=Counter)
    url_latest: dict[str, tuple[int, str]] = field(default_factory=dict)
    image_set_latest: dict[str, tuple[int, str]] = field(default_factory=dict)

    def observe(self, doc: MultimodalDocument) -> None:
        doc_id = doc.doc_id or doc.url
        domain = doc.domain
        urls = doc.image_urls()
        self.image_url_counts.update(urls)
        for seg in doc.segments:
            if isinstance(seg, TextSegment):
                for paragraph in split_paragraphs(seg.body):
                    if paragraph != SENTINEL_TEXT:
                        self.domain_paragraph_counts[(domain, paragraph_digest(paragraph))] += 1
        key = _latest_key(doc.fetch_time, doc_id)
        existing = self.url_latest.get(doc.url)
        if existing is None or key > existing:
            self.url_latest[doc.url] = key
        if urls:
            digest = image_set_digest(urls)
            existing = self.image_set_latest.get(digest)
            if existing is None or key > existing:
                self.image_set_latest[digest] = key

    def merged(self, other: "CorpusCounters") -> "CorpusCounters":
        out = CorpusCounters(
            image_url_counts=self.image_url_counts + other.image_url_counts,
            domain_paragraph_counts=self.domain_paragraph_counts
            + other.domain_paragraph_counts,
            url_latest=dict(self.url_latest),
            image_set_latest=dict(self.image_set_latest),
        )
        for key, value in other.url_latest.items():
            if key not in out.url_latest or value > out.url_latest[key]:
                out.url_latest[key] = value
        for key, value in other.image_set_latest.items():
            if key not in out.image_set_latest or value > out.image_set_latest[key]:
                out.image_set_latest[key] = value
        return out

    @classmethod
    def from_documents(cls, docs: Iterable[MultimodalDocument]) -> "CorpusCounters":
        counters = cls()
        for doc in docs:
            counters.observe(doc)
        return counters

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            for url, count in sorted(self.image_url_counts.items()):
                handle.write(json.dumps({"kind": "image_url", "key": url, "count": count}) + "\n")
            for (domain, digest), count in sorted(self.domain_paragraph_counts.items()):
                handle.write(
                    json.dumps(
                        {
                            "kind": "domain_paragraph",
                            "domain": domain,
                            "digest": digest,
                            "count": count,
                        }
                    )
                    + "\n"
                )
            for url, (ts, doc_id) in sorted(self.url_latest.items()):
                handle.write(
                    json.dumps(
                        {"kind": "url_latest", "key": url, "fetch_time": ts, "doc_id": doc_id}
                    )
                    + "\n"
                )
            for digest, (ts, doc_id) in sorted(self.image_set_latest.items()):
                handle.write(
                    json.dumps(
                        {
                            "kind": "image_set_latest",
                            "key": digest,
                            "fetch_time": ts,
                            "doc_id": doc_id,
                        }
                    )
                    + "\n"
                )

    @classmethod
    def load(cls, path: str | Path) -> "CorpusCounters":
        counters = cls()
        with open(path, "r", encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if not line:
                    continue
                entry = json.loads(line)
                kind = entry["kind"]
                if kind == "image_url":
                    counters.image_url_counts[entry["key"]] = entry["count"]
                elif kind == "domain_paragraph":
                    counters.domain_paragraph_counts[(entry["domain"], entry["digest"])] = entry[
                        "count"
                    ]
                elif kind == "url_latest":
                    counters.url_latest[entry["key"]] = (entry["fetch_time"], entry["doc_id"])
                elif kind == "image_set_latest":
                    counters.image_set_latest[entry["key"]] = (
                        entry["fetch_time"],
                        entry["doc_id"],
                    )
                else:
                    raise ValueError(f"unknown counter kind: {kind}")
        return counters


def count_image_urls(docs: Iterable[MultimodalDocument]) -> Counter:
    counts: Counter = Counter()
    for doc in docs:
        counts.update(doc.image_urls())
    return counts


def drop_overused_images(
    docs: Sequence[MultimodalDocument],
    max_occurrences: int = 10,
    counts: Optional[Mapping[str, int]] = None,
) -> tuple[list[MultimodalDocument], Counter]:
    """Deduplicate images inside each document, then drop corpus-overused URLs.

    Occurrences are counted before any removal; a URL kept must have at most
    max_occurrences occurrences corpus-wide. Documents losing every image
    are dropped with them.
    """
    if counts is None:
        counts = count_image_urls(docs)
    report: Counter = Counter()
    out: list[MultimodalDocument] = []
    for doc in docs:
        seen: set[str] = set()
        kept: list[Segment] = []
        for seg in doc.segments:
            if not isinstance(seg, ImageSegment):
                kept.append(seg)
                continue
            if seg.src_url in seen:
                report["image_duplicate_in_doc"] += 1
                continue
            seen.add(seg.src_url)
            if counts.get(seg.src_url, 0) > max_occurrences:
                report["image_overused"] += 1
                continue
            kept.append(seg)
        if not any(isinstance(s, ImageSegment) for s in kept):
            report["doc_dropped_no_images"] += 1
            continue
        if len(kept) != len(doc.segments):
            out.append(doc.with_segments(merge_adjacent_text(kept)))
        else:
            out.append(doc)
    return out, report


def dedup_documents_by_url(
    docs: Sequence[MultimodalDocument],
    latest: Optional[Mapping[str, tuple[int, str]]] = None,
) -> tuple[list[MultimodalDocument], Counter]:
    """Keep the most recent document per URL; ties go to the greatest doc id."""
    if latest is None:
        latest = CorpusCounters.from_documents(docs).url_latest
    report: Counter = Counter()
    out: list[MultimodalDocument] = []
    for doc in docs:
        doc_id = doc.doc_id or doc.url
        if _latest_key(doc.fetch_time, doc_id) == latest[doc.url]:
            out.append(doc)
        else:
            report["duplicate_url"] += 1
    return out, report


def dedup_documents_by_image_set(
    docs: Sequence[MultimodalDocument],
    latest: Optional[Mapping[str, tuple[int, str]]] = None,
) -> tuple[list[MultimodalDocument], Counter]:
    """Keep the most recent document per identical image-URL set."""
    if latest is None:
        latest = CorpusCounters.from_documents(docs).image_set_latest
    report: Counter = Counter()
    out: list[MultimodalDocument] = []
    for doc in docs:
        urls = doc.image_urls()
        if not urls:
            out.append(doc)
            continue
        doc_id = doc.doc_id or doc.url
        if _latest_key(doc.fetch_time, doc_id) == latest[image_set_digest(urls)]:
            out.append(doc)
        else:
            report["duplicate_image_set"] += 1
    return out, report


def dedup_paragraphs_by_domain(
    docs: Sequence[MultimodalDocument],
    min_count: int = 3,
    counts: Optional[Mapping[tuple[str, str], int]] = None,
) -> tuple[list[MultimodalDocument], Counter]:
    """Remove paragraphs repeated min_count+ times within one domain.

    Image segments are never touched; documents whose text vanishes entirely
    are dropped. The topic-break sentinel is exempt.
    """
    if counts is None:
        counts = CorpusCounters.from_documents(docs).domain_paragraph_counts
    report: Counter = Counter()
    out: list[MultimodalDocument] = []
    for doc in docs:
        domain = doc.domain
        changed = False
        kept: list[Segment] = []
        had_text = False
        has_text = False
        for seg in doc.segments:
            if not isinstance(seg, TextSegment):
                kept.append(seg)
                continue
            had_text = True
            survivors: list[str] = []
            for paragraph in split_paragraphs(seg.body):
                if paragraph != SENTINEL_TEXT and (
                    counts.get((domain, paragraph_digest(paragraph)), 0) >= min_count
                ):
                    report["paragraph_removed"] += 1
                    changed = True
                    continue
                survivors.append(paragraph)
            if survivors:
                kept.append(TextSegment("\n".join(survivors)))
                has_text = True
            else:
                changed = True
        if had_text and not has_text:
            report["doc_dropped_no_text"] += 1
            continue
        if changed:
            out.append(doc.with_segments(merge_adjacent_text(kept)))
        else:
            out.append(doc)
    return out, report
