"""Interleaved image+text document types and their canonical dict forms."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Union
from urllib.parse import urlsplit


class DocumentError(ValueError):
    """An operation received or produced a document violating an invariant."""


@dataclass
class TextSegment:
    body: str

    def validate(self) -> None:
        if not self.body.strip():
            raise DocumentError("text segment body is empty after trim")
        if "\n\n\n" in self.body:
            raise DocumentError("text segment contains 3+ consecutive newlines")


@dataclass
class ImageSegment:
    src_url: str
    width: Optional[int] = None
    height: Optional[int] = None
    format: Optional[str] = None
    alt: Optional[str] = None

    @property
    def attached(self) -> bool:
        return self.width is not None and self.height is not None and self.format is not None

    def validate(self) -> None:
        parts = urlsplit(self.src_url)
        if not parts.scheme or not parts.netloc:
            raise DocumentError(f"image URL is not absolute: {self.src_url!r}")
        if self.width is not None and self.width < 1:
            raise DocumentError("attached image width must be >= 1")
        if self.height is not None and self.height < 1:
            raise DocumentError("attached image height must be >= 1")


Segment = Union[TextSegment, ImageSegment]

TEXT_MERGE_SEPARATOR = "\n"


def registrable_domain(url: str) -> str:
    """Lowercased hostname with a leading 'www.' stripped.

    Public-suffix handling is deliberately not attempted; grouping by plain
    hostname is the documented behavior.
    """
    host = (urlsplit(url).hostname or "").lower()
    if host.startswith("www."):
        host = host[4:]
    return host


@dataclass
class MultimodalDocument:
    url: str
    fetch_time: int
    segments: list[Segment] = field(default_factory=list)
    doc_id: Optional[str] = None

    @property
    def domain(self) -> str:
        return registrable_domain(self.url)

    def text_segments(self) -> list[TextSegment]:
        return [s for s in self.segments if isinstance(s, TextSegment)]

    def image_segments(self) -> list[ImageSegment]:
        return [s for s in self.segments if isinstance(s, ImageSegment)]

    def full_text(self) -> str:
        return TEXT_MERGE_SEPARATOR.join(s.body for s in self.text_segments())

    def image_urls(self) -> list[str]:
        return [s.src_url for s in self.image_segments()]

    def validate(self) -> None:
        if not self.segments:
            raise DocumentError("document has no segments")
        parts = urlsplit(self.url)
        if parts.scheme not in ("http", "https") or not parts.netloc:
            raise DocumentError(f"document URL is not absolute http(s): {self.url!r}")
        previous_was_text = False
        for seg in self.segments:
            seg.validate()
            if isinstance(seg, TextSegment):
                if previous_was_text:
                    raise DocumentError("adjacent text segments must be merged")
                previous_was_text = True
            else:
                previous_was_text = False

    def with_segments(self, segments: list[Segment]) -> "MultimodalDocument":
        return replace(self, segments=segments)


def merge_adjacent_text(segments: Iterable[Segment]) -> list[Segment]:
    """Re-establish the no-adjacent-text invariant after segment removals."""
    merged: list[Segment] = []
    for seg in segments:
        if isinstance(seg, TextSegment) and merged and isinstance(merged[-1], TextSegment):
            merged[-1] = TextSegment(merged[-1].body + TEXT_MERGE_SEPARATOR + seg.body)
        else:
            merged.append(seg)
    return merged


def segment_to_dict(seg: Segment) -> dict:
    if isinstance(seg, TextSegment):
        return {"kind": "text", "body": seg.body}
    out: dict = {"kind": "image", "url": seg.src_url}
    if seg.width is not None:
        out["width"] = seg.width
    if seg.height is not None:
        out["height"] = seg.height
    if seg.format is not None:
        out["format"] = seg.format
    if seg.alt is not None:
        out["alt"] = seg.alt
    return out


def segment_from_dict(data: dict) -> Segment:
    kind = data.get("kind")
    if kind == "text":
        return TextSegment(body=data["body"])
    if kind == "image":
        return ImageSegment(
            src_url=data["url"],
            width=data.get("width"),
            height=data.get("height"),
            format=data.get("format"),
            alt=data.get("alt"),
        )
    raise DocumentError(f"unknown segment kind: {kind!r}")


def document_to_dict(doc: MultimodalDocument) -> dict:
    out = {
        "url": doc.url,
        "fetch_time": doc.fetch_time,
        "segments": [segment_to_dict(s) for s in doc.segments],
    }
    if doc.doc_id is not None:
        out["doc_id"] = doc.doc_id
    return out


def document_from_dict(data: dict) -> MultimodalDocument:
    return MultimodalDocument(
        url=data["url"],
        fetch_time=int(data["fetch_time"]),
        segments=[segment_from_dict(s) for s in data["segments"]],
        doc_id=data.get("doc_id"),
    )


def export_parallel_arrays(doc: MultimodalDocument) -> dict:
    """Compatibility export: two equal-length lists with complementary nulls."""
    doc.validate()
    texts: list[Optional[str]] = []
    images: list[Optional[str]] = []
    for seg in doc.segments:
        if isinstance(seg, TextSegment):
            texts.append(seg.body)
            images.append(None)
        else:
            texts.append(None)
            images.append(seg.src_url)
    return {"texts": texts, "images": images}


def import_parallel_arrays(record: dict, url: str = "", fetch_time: int = 0) -> MultimodalDocument:
    texts, images = record["texts"], record["images"]
    if len(texts) != len(images):
        raise DocumentError("parallel arrays differ in length")
    segments: list[Segment] = []
    for text, image in zip(texts, images):
        if (text is None) == (image is None):
            raise DocumentError("exactly one of texts[i]/images[i] must be null")
        if text is not None:
            segments.append(TextSegment(text))
        else:
            segments.append(ImageSegment(image))
    return MultimodalDocument(url=url, fetch_time=fetch_time, segments=segments)
