"""Fetcher backends: cache files, digest directories, live HTTP probing."""

from __future__ import annotations

import json
import struct
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from mmdocs.extract import FetchResult
from mmdocs.fetch import (
    CacheFileFetcher,
    HttpFetcher,
    LocalDirectoryFetcher,
    make_fetcher,
    write_cache,
)


def png_bytes(width: int, height: int) -> bytes:
    return (
        b"\x89PNG\r\n\x1a\n"
        + struct.pack(">I", 13)
        + b"IHDR"
        + struct.pack(">II", width, height)
        + b"\x08\x06\x00\x00\x00"
    )


OK_RESULT = FetchResult(
    src_url="https://a.org/x.jpg", status="ok", width=640, height=480, format="jpg"
)


# --- cache file backend ---


def test_cache_round_trip(tmp_path):
    path = tmp_path / "cache.jsonl"
    failed = FetchResult(src_url="https://a.org/y.jpg", status="failed")
    write_cache([OK_RESULT, failed], path)
    fetcher = CacheFileFetcher(path)
    assert len(fetcher) == 2
    out = fetcher.fetch(["https://a.org/x.jpg", "https://a.org/y.jpg"])
    assert out["https://a.org/x.jpg"] == OK_RESULT
    assert out["https://a.org/y.jpg"] == failed


def test_cache_unknown_url_fails(tmp_path):
    path = tmp_path / "cache.jsonl"
    write_cache([OK_RESULT], path)
    out = CacheFileFetcher(path).fetch(["https://a.org/missing.jpg"])
    assert out["https://a.org/missing.jpg"].status == "failed"


def test_cache_tolerates_blank_lines(tmp_path):
    path = tmp_path / "cache.jsonl"
    entry = {"url": "https://a.org/x.jpg", "status": "failed"}
    path.write_text("\n" + json.dumps(entry) + "\n\n", encoding="utf-8")
    assert len(CacheFileFetcher(path)) == 1


def test_cache_invalid_json_names_line(tmp_path):
    path = tmp_path / "cache.jsonl"
    path.write_text('{"url": "https://a.org/x.jpg", "status": "failed"}\nnot json\n', "utf-8")
    with pytest.raises(ValueError, match=":2"):
        CacheFileFetcher(path)


def test_cache_missing_url_rejected(tmp_path):
    path = tmp_path / "cache.jsonl"
    path.write_text('{"status": "ok", "width": 1, "height": 1, "format": "jpg"}\n', "utf-8")
    with pytest.raises(ValueError, match="missing url"):
        CacheFileFetcher(path)


# --- digest directory backend ---


def test_directory_fetch_sniffs_real_format(tmp_path):
    url = "https://b.org/photo"
    digest = LocalDirectoryFetcher.digest_for(url)
    # extension is decorative; the sniffed header decides the format
    (tmp_path / f"{digest}.bin").write_bytes(png_bytes(320, 200))
    out = LocalDirectoryFetcher(tmp_path).fetch([url, "https://b.org/other"])
    assert out[url] == FetchResult(
        src_url=url, status="ok", width=320, height=200, format="png"
    )
    assert out["https://b.org/other"].status == "failed"


def test_directory_unsniffable_bytes_fail(tmp_path):
    url = "https://b.org/fake.jpg"
    (tmp_path / f"{LocalDirectoryFetcher.digest_for(url)}.jpg").write_bytes(b"not an image")
    assert LocalDirectoryFetcher(tmp_path).fetch([url])[url].status == "failed"


def test_directory_must_exist(tmp_path):
    with pytest.raises(FileNotFoundError):
        LocalDirectoryFetcher(tmp_path / "nope")


# --- live HTTP backend ---


class _ImageHandler(BaseHTTPRequestHandler):
    def do_GET(self):
        if self.path == "/ok.png":
            body = png_bytes(150, 150)
            self.send_response(200)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
        else:
            self.send_error(404)

    def log_message(self, *args):
        pass


@pytest.fixture()
def image_server():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _ImageHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}"
    server.shutdown()
    thread.join()


def test_http_fetch_mixed_outcomes(image_server):
    ok_url = f"{image_server}/ok.png"
    missing_url = f"{image_server}/gone.png"
    out = HttpFetcher(workers=2, timeout=5.0).fetch([ok_url, missing_url])
    assert out[ok_url] == FetchResult(
        src_url=ok_url, status="ok", width=150, height=150, format="png"
    )
    assert out[missing_url].status == "failed"


def test_http_connection_refused_fails():
    url = "http://127.0.0.1:1/never.jpg"
    assert HttpFetcher(timeout=0.5).fetch([url])[url].status == "failed"


def test_http_worker_count_validated():
    with pytest.raises(ValueError, match="workers"):
        HttpFetcher(workers=0)


# --- dispatch ---


def test_make_fetcher_dispatch(tmp_path):
    cache = tmp_path / "cache.jsonl"
    write_cache([], cache)
    assert isinstance(make_fetcher("cache", str(cache)), CacheFileFetcher)
    assert isinstance(make_fetcher("directory", str(tmp_path)), LocalDirectoryFetcher)
    assert isinstance(make_fetcher("http"), HttpFetcher)


def test_make_fetcher_requires_source_when_needed():
    with pytest.raises(ValueError, match="cache"):
        make_fetcher("cache")
    with pytest.raises(ValueError, match="directory"):
        make_fetcher("directory")
    with pytest.raises(ValueError, match="unknown"):
        make_fetcher("smoke-signal")
