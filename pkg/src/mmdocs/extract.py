"""Linearize simplified trees into interleaved documents and manage image links."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional
from urllib.parse import urljoin, urlsplit

from .documents import (
    DocumentError,
    ImageSegment,
    MultimodalDocument,
    Segment,
    TextSegment,
    merge_adjacent_text,
)
from .domtree import DomNode
from .simplify import SENTINEL_TEXT

_NEWLINE_RUN = re.compile(r"\s*\n\s*")
_SPACE_RUN = re.compile(r"[^\S\n]+")

# Subtrees that never contribute page-visible text.
_INVISIBLE_TAGS = frozenset({"script", "style", "noscript", "template", "#comment"})

BREAK = object()  # marker emitted at block-tag boundaries


def visible_text(html: "bytes | str") -> str:
    """Rough rendered text of a raw page, for the pre-simplification gates.

    Walks the parsed tree, skips non-rendered subtrees, and joins text nodes
    with newlines. This is deliberately cruder than full extraction: the
    early language, dedup, and repetition gates need stable text, not layout.
    """
    from .domtree import parse_html

    pieces: list[str] = []

    def walk(node) -> None:
        if node.tag in _INVISIBLE_TAGS:
            return
        if node.is_text:
            piece = node.text.strip()
            if piece:
                pieces.append(piece)
            return
        for child in node.children:
            walk(child)

    walk(parse_html(html))
    return "\n".join(pieces)


def _emit(node: DomNode, base_url: str, out: list, skipped_urls: list[str]) -> None:
    if node.is_text:
        if node.text.strip() == SENTINEL_TEXT:
            # Topic-break sentinel always stands as its own paragraph.
            out.extend((BREAK, SENTINEL_TEXT, BREAK))
        else:
            out.append(node.text)
        return
    if node.tag == "img":
        src = node.attr("src") or ""
        resolved = urljoin(base_url, src.strip()) if src.strip() else ""
        parts = urlsplit(resolved)
        if parts.scheme in ("http", "https") and parts.netloc:
            out.append(ImageSegment(src_url=resolved, alt=node.attr("alt")))
        elif resolved:
            skipped_urls.append(resolved)
        return
    # Every surviving element is a block-level or media container: its edges
    # separate the preceding and following content.
    out.append(BREAK)
    for child in node.children:
        _emit(child, base_url, out, skipped_urls)
    out.append(BREAK)


def _flush_text(pieces: list[str], segments: list[Segment]) -> None:
    if not pieces:
        return
    body = "".join(pieces)
    body = _NEWLINE_RUN.sub("\n", body)
    body = _SPACE_RUN.sub(" ", body).strip()
    pieces.clear()
    if body:
        segments.append(TextSegment(body))


def extract_document(
    tree: DomNode,
    url: str,
    fetch_time: int,
    doc_id: Optional[str] = None,
) -> MultimodalDocument:
    """In-order traversal of a simplified tree into text and image segments.

    Block-tag boundaries become newlines inside the accumulated text; images
    split the text into separate segments. Raises DocumentError when nothing
    survives.
    """
    stream: list = []
    skipped: list[str] = []
    for child in tree.children:
        _emit(child, url, stream, skipped)

    segments: list[Segment] = []
    pieces: list[str] = []
    for item in stream:
        if item is BREAK:
            if pieces:
                pieces.append("\n")
        elif isinstance(item, ImageSegment):
            _flush_text(pieces, segments)
            segments.append(item)
        else:
            pieces.append(item)
    _flush_text(pieces, segments)

    if not segments:
        raise DocumentError(f"empty document: no text or images extracted from {url}")
    doc = MultimodalDocument(url=url, fetch_time=fetch_time, segments=segments, doc_id=doc_id)
    doc.validate()
    return doc


@dataclass
class DownloadManifest:
    """Unique image URLs in first-appearance order, with referring doc ids."""

    urls: list[str] = field(default_factory=list)
    referrers: dict[str, list[str]] = field(default_factory=dict)

    def add(self, url: str, doc_id: str) -> None:
        if url not in self.referrers:
            self.urls.append(url)
            self.referrers[url] = []
        self.referrers[url].append(doc_id)

    def __len__(self) -> int:
        return len(self.urls)


def harvest_image_urls(docs: Iterable[MultimodalDocument]) -> DownloadManifest:
    manifest = DownloadManifest()
    for doc in docs:
        doc_key = doc.doc_id or doc.url
        for url in doc.image_urls():
            manifest.add(url, doc_key)
    return manifest


@dataclass(frozen=True)
class FetchResult:
    src_url: str
    status: str  # "ok" | "failed"
    width: Optional[int] = None
    height: Optional[int] = None
    format: Optional[str] = None

    def __post_init__(self) -> None:
        if self.status == "ok" and None in (self.width, self.height, self.format):
            raise ValueError("ok fetch result requires width, height and format")


def attach_images(
    doc: MultimodalDocument, results: Mapping[str, FetchResult]
) -> MultimodalDocument:
    """Populate image metadata; failed or missing fetches drop the image."""
    out: list[Segment] = []
    for seg in doc.segments:
        if isinstance(seg, TextSegment):
            out.append(seg)
            continue
        result = results.get(seg.src_url)
        if result is None or result.status != "ok":
            continue
        out.append(
            ImageSegment(
                src_url=seg.src_url,
                width=result.width,
                height=result.height,
                format=result.format,
                alt=seg.alt,
            )
        )
    return doc.with_segments(merge_adjacent_text(out))
