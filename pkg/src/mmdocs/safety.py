"""Consent and NSFW stages behind pluggable external-service interfaces."""

from __future__ import annotations

import json
import time
import urllib.error
import urllib.request
from collections import Counter
from pathlib import Path
from typing import Iterable, Optional, Protocol, Sequence

from .documents import ImageSegment, MultimodalDocument, Segment, merge_adjacent_text

DEFAULT_NSFW_SUBSTRINGS = frozenset({"porn", "sex", "xxx"})
DEFAULT_NSFW_CUTOFF = 0.9


class OptOutClient(Protocol):
    """Answers whether image creators opted out of model-training use."""

    def is_opted_out(self, urls: Sequence[str]) -> dict[str, bool]: ...


class AllowAllClient:
    """No opt-outs; turns the consent stage into the identity."""

    def is_opted_out(self, urls: Sequence[str]) -> dict[str, bool]:
        return {url: False for url in urls}


class LocalListClient:
    """Opt-out list from a file of URLs, one per line."""

    def __init__(self, source: str | Path | Iterable[str]):
        if isinstance(source, (str, Path)):
            lines = Path(source).read_text("utf-8").splitlines()
        else:
            lines = list(source)
        self._opted_out = {line.strip() for line in lines if line.strip()}

    def is_opted_out(self, urls: Sequence[str]) -> dict[str, bool]:
        return {url: url in self._opted_out for url in urls}


class HttpBatchClient:
    """POSTs URL batches to a consent endpoint, JSON booleans back.

    Request body: JSON array of URLs. Response: JSON array of booleans of
    equal length, true meaning opted out. Unresolvable batches (after the
    configured retries) follow the fail policy; closed treats them as
    opted out.
    """

    def __init__(
        self,
        endpoint: str,
        batch_size: int = 100,
        timeout: float = 10.0,
        retries: int = 3,
        fail_closed: bool = True,
        retry_wait: float = 0.5,
    ):
        if batch_size < 1:
            raise ValueError("batch_size must be positive")
        self.endpoint = endpoint
        self.batch_size = batch_size
        self.timeout = timeout
        self.retries = retries
        self.fail_closed = fail_closed
        self.retry_wait = retry_wait

    def _query_batch(self, batch: Sequence[str]) -> list[bool]:
        payload = json.dumps(list(batch)).encode("utf-8")
        request = urllib.request.Request(
            self.endpoint, data=payload, headers={"Content-Type": "application/json"}
        )
        last_error: Optional[Exception] = None
        for attempt in range(self.retries):
            try:
                with urllib.request.urlopen(request, timeout=self.timeout) as response:
                    answers = json.loads(response.read().decode("utf-8"))
                if not isinstance(answers, list) or len(answers) != len(batch):
                    raise ValueError("malformed consent response")
                return [bool(a) for a in answers]
            except (urllib.error.URLError, OSError, ValueError) as exc:
                last_error = exc
                if attempt + 1 < self.retries:
                    time.sleep(self.retry_wait * (attempt + 1))
        del last_error
        return [self.fail_closed] * len(batch)

    def is_opted_out(self, urls: Sequence[str]) -> dict[str, bool]:
        out: dict[str, bool] = {}
        for start in range(0, len(urls), self.batch_size):
            batch = urls[start : start + self.batch_size]
            out.update(zip(batch, self._query_batch(batch)))
        return out


def remove_opted_out(
    docs: Sequence[MultimodalDocument], client: OptOutClient
) -> tuple[list[MultimodalDocument], Counter]:
    """Strip opted-out images; documents losing every image are dropped."""
    unique: list[str] = []
    seen: set[str] = set()
    for doc in docs:
        for url in doc.image_urls():
            if url not in seen:
                seen.add(url)
                unique.append(url)
    opted_out = client.is_opted_out(unique) if unique else {}

    report: Counter = Counter()
    out: list[MultimodalDocument] = []
    for doc in docs:
        kept: list[Segment] = []
        removed = 0
        for seg in doc.segments:
            if isinstance(seg, ImageSegment) and opted_out.get(seg.src_url, False):
                removed += 1
                continue
            kept.append(seg)
        if removed == 0:
            out.append(doc)
            continue
        report["image_opted_out"] += removed
        if not any(isinstance(s, ImageSegment) for s in kept):
            report["doc_dropped_no_images"] += 1
            continue
        out.append(doc.with_segments(merge_adjacent_text(kept)))
    return out, report


class NsfwScorer(Protocol):
    """Maps image URLs to NSFW scores in [0, 1]."""

    def score(self, urls: Sequence[str]) -> dict[str, float]: ...


class AlwaysSafeScorer:
    def score(self, urls: Sequence[str]) -> dict[str, float]:
        return {url: 0.0 for url in urls}


class ManifestScorer:
    """Scores from a {url, score} JSONL manifest produced by any classifier.

    The pipeline writes the URL list out, an external model scores it, and
    this reads the result back. URLs absent from the manifest score 0.
    """

    def __init__(self, path: str | Path):
        self._scores: dict[str, float] = {}
        for line_no, line in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
            line = line.strip()
            if not line:
                continue
            entry = json.loads(line)
            score = float(entry["score"])
            if not 0.0 <= score <= 1.0:
                raise ValueError(f"{path}:{line_no}: score out of [0,1]: {score}")
            self._scores[entry["url"]] = score

    def score(self, urls: Sequence[str]) -> dict[str, float]:
        return {url: self._scores.get(url, 0.0) for url in urls}


def write_score_request(docs: Iterable[MultimodalDocument], path: str | Path) -> int:
    """Write the unique image URLs needing NSFW scores, one per line."""
    unique: list[str] = []
    seen: set[str] = set()
    for doc in docs:
        for url in doc.image_urls():
            if url not in seen:
                seen.add(url)
                unique.append(url)
    Path(path).write_text("".join(u + "\n" for u in unique), "utf-8")
    return len(unique)


def remove_nsfw(
    docs: Sequence[MultimodalDocument],
    scorer: NsfwScorer,
    banned_substrings: frozenset[str] = DEFAULT_NSFW_SUBSTRINGS,
    cutoff: float = DEFAULT_NSFW_CUTOFF,
) -> tuple[list[MultimodalDocument], Counter]:
    """Apply the URL substring rule per image, the scorer per document.

    A banned substring removes that image only; a score above the cutoff on
    any remaining image removes the whole document.
    """
    lowered = frozenset(s.lower() for s in banned_substrings)
    unique: list[str] = []
    seen: set[str] = set()
    for doc in docs:
        for url in doc.image_urls():
            if url not in seen and not any(b in url.lower() for b in lowered):
                seen.add(url)
                unique.append(url)
    scores = scorer.score(unique) if unique else {}

    report: Counter = Counter()
    out: list[MultimodalDocument] = []
    for doc in docs:
        kept: list[Segment] = []
        removed = 0
        dropped_doc = False
        for seg in doc.segments:
            if not isinstance(seg, ImageSegment):
                kept.append(seg)
                continue
            url = seg.src_url.lower()
            if any(b in url for b in lowered):
                removed += 1
                continue
            if scores.get(seg.src_url, 0.0) > cutoff:
                dropped_doc = True
                break
            kept.append(seg)
        if dropped_doc:
            report["doc_dropped_nsfw_image"] += 1
            continue
        if removed == 0:
            out.append(doc)
            continue
        report["image_banned_substring"] += removed
        if not any(isinstance(s, ImageSegment) for s in kept):
            report["doc_dropped_no_images"] += 1
            continue
        out.append(doc.with_segments(merge_adjacent_text(kept)))
    return out, report
