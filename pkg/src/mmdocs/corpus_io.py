"""Page ingestion (WARC, HTML directories, JSONL) and document persistence."""

from __future__ import annotations

import base64
import gzip
import io
import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import BinaryIO, Iterable, Iterator, Optional
from urllib.parse import urlsplit

from .documents import DocumentError, MultimodalDocument, document_from_dict, document_to_dict
from .hashing import stable_digest

logger = logging.getLogger(__name__)

FORMAT_TAGS = ("warc", "html-dir", "jsonl")


@dataclass(frozen=True)
class PageRecord:
    url: str
    fetch_time: int
    raw_html: bytes
    content_type: str = "text/html"

    def __post_init__(self) -> None:
        parts = urlsplit(self.url)
        if parts.scheme not in ("http", "https") or not parts.netloc:
            raise ValueError(f"not an absolute http(s) URL: {self.url!r}")


@dataclass
class ReadStats:
    """Tallies for one ingestion stream; yielded + skipped covers every record."""

    yielded: int = 0
    skipped_non_html: int = 0
    skipped_non_response: int = 0
    skipped_malformed: int = 0
    time_regressions: int = 0

    @property
    def skipped(self) -> int:
        return self.skipped_non_html + self.skipped_non_response + self.skipped_malformed

    @property
    def total(self) -> int:
        return self.yielded + self.skipped


@dataclass
class CorpusManifest:
    format: str
    shards: list[str] = field(default_factory=list)
    counts: list[int] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.format not in FORMAT_TAGS:
            raise ValueError(f"unknown format tag: {self.format!r}")
        if len(self.shards) != len(self.counts):
            raise ValueError("shards and counts must align")

    def validate_paths(self) -> None:
        for shard in self.shards:
            if not Path(shard).exists():
                raise FileNotFoundError(f"manifest shard missing: {shard}")

    def save(self, path: str | Path) -> None:
        payload = {"format": self.format, "shards": self.shards, "counts": self.counts}
        Path(path).write_text(json.dumps(payload, indent=2) + "\n", "utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "CorpusManifest":
        payload = json.loads(Path(path).read_text("utf-8"))
        manifest = cls(
            format=payload["format"], shards=payload["shards"], counts=payload["counts"]
        )
        manifest.validate_paths()
        return manifest


# --- WARC ---

_HTTP_SEP = b"\r\n\r\n"


def _format_warc_date(epoch: int) -> str:
    return datetime.fromtimestamp(epoch, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _parse_warc_date(value: str) -> int:
    stamp = datetime.strptime(value.strip(), "%Y-%m-%dT%H:%M:%SZ")
    return int(stamp.replace(tzinfo=timezone.utc).timestamp())


def _record_bytes(record: PageRecord) -> bytes:
    http_head = (
        b"HTTP/1.1 200 OK\r\nContent-Type: "
        + record.content_type.encode("ascii")
        + b"\r\nContent-Length: "
        + str(len(record.raw_html)).encode("ascii")
        + _HTTP_SEP
    )
    body = http_head + record.raw_html
    record_id = stable_digest((record.url + str(record.fetch_time)).encode("utf-8"))[:32]
    head = (
        "WARC/1.0\r\n"
        f"WARC-Type: response\r\n"
        f"WARC-Record-ID: <urn:uuid:{record_id}>\r\n"
        f"WARC-Date: {_format_warc_date(record.fetch_time)}\r\n"
        f"WARC-Target-URI: {record.url}\r\n"
        f"Content-Type: application/http;msgtype=response\r\n"
        f"Content-Length: {len(body)}\r\n"
        "\r\n"
    ).encode("utf-8")
    return head + body + b"\r\n\r\n"


def write_warc(records: Iterable[PageRecord], path: str | Path, member_gzip: bool = False) -> int:
    """Write response records; member_gzip gzips each record independently."""
    count = 0
    with open(path, "wb") as handle:
        for record in records:
            blob = _record_bytes(record)
            if member_gzip:
                # mtime=0 keeps archives byte-identical across runs
                blob = gzip.compress(blob, mtime=0)
            handle.write(blob)
            count += 1
    return count


def _read_headers(stream: BinaryIO) -> Optional[dict[str, str]]:
    """Read one WARC header block; None at clean end of stream."""
    version: Optional[bytes] = None
    while True:
        line = stream.readline()
        if not line:
            return None
        if line in (b"\r\n", b"\n"):
            continue
        version = line
        break
    if not version.startswith(b"WARC/"):
        raise ValueError(f"bad version line: {version[:40]!r}")
    headers: dict[str, str] = {}
    while True:
        line = stream.readline()
        if not line:
            raise ValueError("truncated header block")
        if line in (b"\r\n", b"\n"):
            return headers
        if b":" not in line:
            raise ValueError(f"bad header line: {line[:40]!r}")
        name, value = line.split(b":", 1)
        headers[name.decode("utf-8").strip().lower()] = value.decode("utf-8").strip()


def _resync(stream: BinaryIO) -> bool:
    """Skip forward to the next WARC version line after a malformed record."""
    while True:
        position = stream.tell() if stream.seekable() else None
        line = stream.readline()
        if not line:
            return False
        if line.startswith(b"WARC/"):
            if position is not None:
                stream.seek(position)
                return True
            # Non-seekable stream: the version line is consumed; bail out.
            return False


def _iter_warc(stream: BinaryIO, stats: ReadStats) -> Iterator[PageRecord]:
    last_time: Optional[int] = None
    while True:
        try:
            headers = _read_headers(stream)
        except ValueError:
            stats.skipped_malformed += 1
            if not _resync(stream):
                return
            continue
        if headers is None:
            return
        try:
            length = int(headers["content-length"])
            body = stream.read(length)
            if len(body) != length:
                raise ValueError("truncated body")
        except (KeyError, ValueError):
            stats.skipped_malformed += 1
            if not _resync(stream):
                return
            continue

        if headers.get("warc-type") != "response":
            stats.skipped_non_response += 1
            continue
        try:
            url = headers["warc-target-uri"]
            fetch_time = _parse_warc_date(headers["warc-date"])
            head, _, payload = body.partition(_HTTP_SEP)
            if not head.startswith(b"HTTP/"):
                raise ValueError("body is not an HTTP response")
            content_type = "application/octet-stream"
            for raw in head.split(b"\r\n")[1:]:
                if raw.lower().startswith(b"content-type:"):
                    content_type = raw.split(b":", 1)[1].decode("utf-8", "replace").strip()
                    break
        except (KeyError, ValueError):
            stats.skipped_malformed += 1
            continue
        if "html" not in content_type.lower():
            stats.skipped_non_html += 1
            continue
        try:
            record = PageRecord(
                url=url, fetch_time=fetch_time, raw_html=payload, content_type=content_type
            )
        except ValueError:
            stats.skipped_malformed += 1
            continue
        if last_time is not None and fetch_time < last_time:
            stats.time_regressions += 1
            logger.warning("fetch_time regression at %s", url)
        last_time = fetch_time
        stats.yielded += 1
        yield record


def _open_maybe_gzip(path: Path) -> BinaryIO:
    with open(path, "rb") as probe:
        magic = probe.read(2)
    if magic == b"\x1f\x8b":
        inner = gzip.open(path, "rb")
        # gzip streams are not seekable enough for resync; buffer desk-scale files
        return io.BytesIO(inner.read())
    return open(path, "rb")


# --- HTML directory with metadata sidecar ---

SIDECAR_NAME = "metadata.jsonl"


def write_html_dir(
    records: Iterable[PageRecord], directory: str | Path, names: Optional[list[str]] = None
) -> int:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(directory / SIDECAR_NAME, "w", encoding="utf-8") as sidecar:
        for i, record in enumerate(records):
            name = names[i] if names else f"page{i:04d}.html"
            (directory / name).write_bytes(record.raw_html)
            sidecar.write(
                json.dumps(
                    {
                        "file": name,
                        "url": record.url,
                        "fetch_time": record.fetch_time,
                        "content_type": record.content_type,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
            count += 1
    return count


def _iter_html_dir(directory: Path, stats: ReadStats) -> Iterator[PageRecord]:
    sidecar = directory / SIDECAR_NAME
    if not sidecar.is_file():
        raise FileNotFoundError(f"missing sidecar: {sidecar}")
    last_time: Optional[int] = None
    for line in sidecar.read_text("utf-8").splitlines():
        line = line.strip()
        if not line:
            continue
        try:
            entry = json.loads(line)
            raw = (directory / entry["file"]).read_bytes()
            record = PageRecord(
                url=entry["url"],
                fetch_time=int(entry["fetch_time"]),
                raw_html=raw,
                content_type=entry.get("content_type", "text/html"),
            )
        except (json.JSONDecodeError, KeyError, ValueError, OSError):
            stats.skipped_malformed += 1
            continue
        if "html" not in record.content_type.lower():
            stats.skipped_non_html += 1
            continue
        if last_time is not None and record.fetch_time < last_time:
            stats.time_regressions += 1
            logger.warning("fetch_time regression at %s", record.url)
        last_time = record.fetch_time
        stats.yielded += 1
        yield record


# --- page JSONL (checkpoint format) ---


def write_pages_jsonl(records: Iterable[PageRecord], path: str | Path) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(
                json.dumps(
                    {
                        "url": record.url,
                        "fetch_time": record.fetch_time,
                        "content_type": record.content_type,
                        "html_b64": base64.b64encode(record.raw_html).decode("ascii"),
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
            count += 1
    return count


def _iter_pages_jsonl(path: Path, stats: ReadStats) -> Iterator[PageRecord]:
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            try:
                entry = json.loads(line)
                record = PageRecord(
                    url=entry["url"],
                    fetch_time=int(entry["fetch_time"]),
                    raw_html=base64.b64decode(entry["html_b64"]),
                    content_type=entry.get("content_type", "text/html"),
                )
            except (json.JSONDecodeError, KeyError, ValueError):
                stats.skipped_malformed += 1
                continue
            if "html" not in record.content_type.lower():
                stats.skipped_non_html += 1
                continue
            stats.yielded += 1
            yield record


def read_pages(
    source: str | Path, format_tag: str, stats: Optional[ReadStats] = None
) -> Iterator[PageRecord]:
    """Stream PageRecords from any supported source in archive order."""
    source = Path(source)
    if not source.exists():
        raise FileNotFoundError(f"input not found: {source}")
    if stats is None:
        stats = ReadStats()
    if format_tag == "warc":
        stream = _open_maybe_gzip(source)
        try:
            yield from _iter_warc(stream, stats)
        finally:
            stream.close()
    elif format_tag == "html-dir":
        yield from _iter_html_dir(source, stats)
    elif format_tag == "jsonl":
        yield from _iter_pages_jsonl(source, stats)
    else:
        raise ValueError(f"unknown format tag: {format_tag!r}")


# --- documents ---


def write_documents(docs: Iterable[MultimodalDocument], path: str | Path) -> int:
    """One canonical JSON line per document; invalid documents are fatal."""
    count = 0
    with open(path, "w", encoding="utf-8") as handle:
        for doc in docs:
            doc.validate()
            handle.write(json.dumps(document_to_dict(doc), ensure_ascii=False) + "\n")
            count += 1
    return count


def read_documents(path: str | Path) -> Iterator[MultimodalDocument]:
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield document_from_dict(json.loads(line))
            except (json.JSONDecodeError, DocumentError, KeyError) as exc:
                raise DocumentError(f"{path}:{line_no}: {exc}") from exc
