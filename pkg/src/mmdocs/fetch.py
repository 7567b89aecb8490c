"""Image metadata fetchers: offline caches, local directories, live HTTP."""

from __future__ import annotations

import json
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterable, Optional, Protocol, Sequence

from .extract import FetchResult
from .hashing import stable_digest
from .imagemeta import sniff

# JPEG metadata can sit behind large EXIF blocks; half a megabyte is enough
# to reach the frame header of every real-world file we care about.
_MAX_PROBE_BYTES = 512 * 1024


class ImageFetcher(Protocol):
    def fetch(self, urls: Sequence[str]) -> dict[str, FetchResult]: ...


def _failed(url: str) -> FetchResult:
    return FetchResult(src_url=url, status="failed")


def _from_bytes(url: str, data: bytes) -> FetchResult:
    info = sniff(data)
    if info is None:
        return _failed(url)
    fmt, width, height = info
    return FetchResult(src_url=url, status="ok", width=width, height=height, format=fmt)


class CacheFileFetcher:
    """Serve image metadata from a JSONL cache of prior fetch outcomes.

    Each line holds {"url", "status"} plus {"width", "height", "format"} when
    the status is "ok". Unknown URLs come back failed.
    """

    def __init__(self, path: str | Path):
        self._results: dict[str, FetchResult] = {}
        with open(path, "r", encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    entry = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ValueError(f"{path}:{line_no}: invalid JSON") from exc
                url = entry.get("url")
                if not isinstance(url, str) or not url:
                    raise ValueError(f"{path}:{line_no}: missing url")
                if entry.get("status") == "ok":
                    result = FetchResult(
                        src_url=url,
                        status="ok",
                        width=int(entry["width"]),
                        height=int(entry["height"]),
                        format=str(entry["format"]),
                    )
                else:
                    result = _failed(url)
                self._results[url] = result

    def __len__(self) -> int:
        return len(self._results)

    def fetch(self, urls: Sequence[str]) -> dict[str, FetchResult]:
        return {url: self._results.get(url, _failed(url)) for url in urls}


class LocalDirectoryFetcher:
    """Resolve URLs against files named by the hex digest of the URL.

    A directory entry "<stable_digest(url)[:16]>.<ext>" holds the raw bytes
    for that URL; the extension is ignored and the real format sniffed.
    """

    def __init__(self, root: str | Path):
        self._by_digest: dict[str, Path] = {}
        root = Path(root)
        if not root.is_dir():
            raise FileNotFoundError(f"image directory not found: {root}")
        for path in sorted(root.iterdir()):
            if path.is_file():
                self._by_digest[path.stem] = path

    @staticmethod
    def digest_for(url: str) -> str:
        return stable_digest(url.encode("utf-8"))[:16]

    def fetch(self, urls: Sequence[str]) -> dict[str, FetchResult]:
        out: dict[str, FetchResult] = {}
        for url in urls:
            path = self._by_digest.get(self.digest_for(url))
            if path is None:
                out[url] = _failed(url)
                continue
            out[url] = _from_bytes(url, path.read_bytes())
        return out


class HttpFetcher:
    """Probe live URLs with bounded concurrency; any error means failed."""

    def __init__(self, workers: int = 8, timeout: float = 10.0, user_agent: str = "mmdocs/0.1"):
        if workers < 1:
            raise ValueError("workers must be positive")
        self.workers = workers
        self.timeout = timeout
        self.user_agent = user_agent

    def _probe(self, url: str) -> FetchResult:
        request = urllib.request.Request(url, headers={"User-Agent": self.user_agent})
        try:
            with urllib.request.urlopen(request, timeout=self.timeout) as response:
                data = response.read(_MAX_PROBE_BYTES)
        except (urllib.error.URLError, OSError, ValueError):
            return _failed(url)
        return _from_bytes(url, data)

    def fetch(self, urls: Sequence[str]) -> dict[str, FetchResult]:
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            results = pool.map(self._probe, urls)
        return {result.src_url: result for result in results}


def write_cache(results: Iterable[FetchResult], path: str | Path) -> None:
    """Persist fetch outcomes in the CacheFileFetcher JSONL layout."""
    with open(path, "w", encoding="utf-8") as handle:
        for result in results:
            entry: dict[str, object] = {"url": result.src_url, "status": result.status}
            if result.status == "ok":
                entry.update(width=result.width, height=result.height, format=result.format)
            handle.write(json.dumps(entry, ensure_ascii=False) + "\n")


def make_fetcher(kind: str, source: Optional[str] = None, workers: int = 8) -> ImageFetcher:
    if kind == "cache":
        if not source:
            raise ValueError("cache fetcher requires a cache file path")
        return CacheFileFetcher(source)
    if kind == "directory":
        if not source:
            raise ValueError("directory fetcher requires a directory path")
        return LocalDirectoryFetcher(source)
    if kind == "http":
        return HttpFetcher(workers=workers)
    raise ValueError(f"unknown fetcher kind: {kind!r}")
