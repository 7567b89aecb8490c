"""Ingestion format readers and writers: WARC, HTML directory, JSONL."""

from __future__ import annotations

import gzip
import json

import pytest

from mmdocs.corpus_io import (
    CorpusManifest,
    PageRecord,
    ReadStats,
    _record_bytes,
    read_documents,
    read_pages,
    write_documents,
    write_html_dir,
    write_pages_jsonl,
    write_warc,
)
from mmdocs.documents import DocumentError

from conftest import make_doc


def page(n: int, minutes: int = 0, content_type: str = "text/html") -> PageRecord:
    return PageRecord(
        url=f"https://site{n}.example.org/page{n}",
        fetch_time=1690000000 + minutes * 60,
        raw_html=f"<p>page number {n} body text</p>".encode("utf-8"),
        content_type=content_type,
    )


def test_page_record_rejects_relative_url():
    with pytest.raises(ValueError):
        PageRecord(url="/no-host", fetch_time=1, raw_html=b"<p>x</p>")


# --- WARC ---


def test_warc_round_trip(tmp_path):
    records = [page(1, 0), page(2, 1), page(3, 2)]
    path = tmp_path / "pages.warc"
    assert write_warc(records, path) == 3
    back = list(read_pages(path, "warc"))
    assert back == records


def test_warc_member_gzip_round_trip(tmp_path):
    records = [page(1, 0), page(2, 1)]
    path = tmp_path / "pages.warc.gz"
    write_warc(records, path, member_gzip=True)
    assert path.read_bytes()[:2] == b"\x1f\x8b"
    assert list(read_pages(path, "warc")) == records


def test_warc_skips_image_payload(tmp_path):
    records = [page(1, 0), page(2, 1, content_type="image/jpeg"), page(3, 2)]
    path = tmp_path / "pages.warc"
    write_warc(records, path)
    stats = ReadStats()
    back = list(read_pages(path, "warc", stats))
    assert [r.url for r in back] == [records[0].url, records[2].url]
    assert stats.skipped_non_html == 1
    assert stats.total == 3


def test_warc_skips_non_response_record(tmp_path):
    meta = (
        b"WARC/1.0\r\nWARC-Type: metadata\r\nWARC-Date: 2023-07-21T14:26:40Z\r\n"
        b"Content-Length: 9\r\n\r\nsome meta\r\n\r\n"
    )
    path = tmp_path / "pages.warc"
    path.write_bytes(_record_bytes(page(1)) + meta + _record_bytes(page(2, 1)))
    stats = ReadStats()
    back = list(read_pages(path, "warc", stats))
    assert len(back) == 2
    assert stats.skipped_non_response == 1


def test_warc_resyncs_after_malformed_record(tmp_path):
    garbage = b"this is not a warc record\r\nat all\r\n\r\n"
    path = tmp_path / "pages.warc"
    path.write_bytes(_record_bytes(page(1)) + garbage + _record_bytes(page(2, 1)))
    stats = ReadStats()
    back = list(read_pages(path, "warc", stats))
    assert [r.url for r in back] == [page(1).url, page(2, 1).url]
    assert stats.skipped_malformed == 1
    assert stats.yielded + stats.skipped == stats.total == 3


def test_warc_empty_archive(tmp_path):
    path = tmp_path / "empty.warc"
    path.write_bytes(b"")
    stats = ReadStats()
    assert list(read_pages(path, "warc", stats)) == []
    assert stats.total == 0


def test_warc_time_regression_counted_not_fatal(tmp_path):
    records = [page(1, 5), page(2, 1)]  # second record is older
    path = tmp_path / "pages.warc"
    write_warc(records, path)
    stats = ReadStats()
    back = list(read_pages(path, "warc", stats))
    assert len(back) == 2
    assert stats.time_regressions == 1


def test_warc_fixture_corpus_accounting(fixture_corpus_dir):
    # the bundled archive carries salt records the reader must skip
    stats = ReadStats()
    yielded = sum(1 for _ in read_pages(fixture_corpus_dir / "pages.warc.gz", "warc", stats))
    assert yielded == stats.yielded == 50
    assert stats.skipped_malformed >= 1
    assert stats.skipped_non_html >= 1
    assert stats.skipped_non_response >= 1
    assert stats.total == stats.yielded + stats.skipped


def test_missing_input_raises(tmp_path):
    with pytest.raises(FileNotFoundError):
        list(read_pages(tmp_path / "absent.warc", "warc"))


def test_unknown_format_tag_raises(tmp_path):
    path = tmp_path / "pages.warc"
    write_warc([page(1)], path)
    with pytest.raises(ValueError):
        list(read_pages(path, "parquet"))


# --- HTML directory ---


def test_html_dir_round_trip(tmp_path):
    records = [page(1, 0), page(2, 1)]
    write_html_dir(records, tmp_path / "pages")
    assert list(read_pages(tmp_path / "pages", "html-dir")) == records


def test_html_dir_requires_sidecar(tmp_path):
    (tmp_path / "pages").mkdir()
    (tmp_path / "pages" / "a.html").write_text("<p>x</p>")
    with pytest.raises(FileNotFoundError):
        list(read_pages(tmp_path / "pages", "html-dir"))


def test_html_dir_skips_entry_with_missing_file(tmp_path):
    directory = tmp_path / "pages"
    write_html_dir([page(1)], directory)
    with open(directory / "metadata.jsonl", "a", encoding="utf-8") as sidecar:
        sidecar.write(json.dumps({"file": "ghost.html", "url": "https://x.org/g", "fetch_time": 1}) + "\n")
    stats = ReadStats()
    assert len(list(read_pages(directory, "html-dir", stats))) == 1
    assert stats.skipped_malformed == 1


# --- pages JSONL ---


def test_pages_jsonl_round_trip(tmp_path):
    records = [page(1, 0), page(2, 1)]
    path = tmp_path / "pages.jsonl"
    write_pages_jsonl(records, path)
    assert list(read_pages(path, "jsonl")) == records


def test_pages_jsonl_binary_safe(tmp_path):
    raw = b"<p>caf\xc3\xa9</p>\x00\xff trailing bytes"
    record = PageRecord(url="https://x.org/b", fetch_time=3, raw_html=raw)
    path = tmp_path / "pages.jsonl"
    write_pages_jsonl([record], path)
    assert next(read_pages(path, "jsonl")).raw_html == raw


def test_pages_jsonl_skips_bad_lines(tmp_path):
    path = tmp_path / "pages.jsonl"
    write_pages_jsonl([page(1)], path)
    with open(path, "a", encoding="utf-8") as handle:
        handle.write("{not json\n")
        handle.write(json.dumps({"url": "https://x.org/a"}) + "\n")  # missing fields
    stats = ReadStats()
    assert len(list(read_pages(path, "jsonl", stats))) == 1
    assert stats.skipped_malformed == 2


# --- manifest ---


def test_manifest_round_trip(tmp_path):
    shard = tmp_path / "pages.jsonl"
    write_pages_jsonl([page(1)], shard)
    manifest = CorpusManifest(format="jsonl", shards=[str(shard)], counts=[1])
    manifest.save(tmp_path / "manifest.json")
    back = CorpusManifest.load(tmp_path / "manifest.json")
    assert back == manifest


def test_manifest_validates_format_and_alignment(tmp_path):
    with pytest.raises(ValueError):
        CorpusManifest(format="tarball")
    with pytest.raises(ValueError):
        CorpusManifest(format="jsonl", shards=["a"], counts=[])
    missing = CorpusManifest(format="jsonl", shards=[str(tmp_path / "gone.jsonl")], counts=[1])
    with pytest.raises(FileNotFoundError):
        missing.validate_paths()


# --- documents ---


def test_documents_round_trip(tmp_path):
    docs = [make_doc(url=f"https://x.org/{i}", doc_id=f"d{i}") for i in range(3)]
    path = tmp_path / "docs.jsonl"
    assert write_documents(docs, path) == 3
    assert list(read_documents(path)) == docs


def test_write_documents_rejects_invalid(tmp_path):
    bad = make_doc()
    bad.segments = []
    with pytest.raises(DocumentError):
        write_documents([bad], tmp_path / "docs.jsonl")


def test_read_documents_reports_path_and_line(tmp_path):
    path = tmp_path / "docs.jsonl"
    write_documents([make_doc()], path)
    with open(path, "a", encoding="utf-8") as handle:
        handle.write("{broken\n")
    with pytest.raises(DocumentError, match=r"docs\.jsonl:2"):
        list(read_documents(path))
