"""Command line behavior through click's test runner."""

from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from mmdocs.cli import main
from mmdocs.corpus_io import read_documents, read_pages


@pytest.fixture()
def runner() -> CliRunner:
    return CliRunner()


def write_config(path, corpus_dir, **extra) -> str:
    lines = [
        "fetch:",
        "  kind: cache",
        f"  source: {corpus_dir / 'fetch_cache.jsonl'}",
        "quality:",
        "  hash_dim: 65536",
        "  epochs: 50",
    ]
    for key, value in extra.items():
        lines.append(f"{key}:")
        for inner_key, inner_value in value.items():
            lines.append(f"  {inner_key}: {inner_value}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)


def test_stage_subcommands_chain(runner, fixture_corpus_dir, tmp_path):
    pages_path = tmp_path / "pages.jsonl"
    result = runner.invoke(
        main,
        [
            "ingest",
            "--input", str(fixture_corpus_dir / "pages.warc.gz"),
            "--format", "warc",
            "--output", str(pages_path),
        ],
    )
    assert result.exit_code == 0, result.output
    report = json.loads(result.stderr)
    assert report["name"] == "ingest"
    pages = list(read_pages(pages_path, "jsonl"))
    assert len(pages) == report["records_out"] > 0

    simplified_path = tmp_path / "simplified.jsonl"
    result = runner.invoke(
        main, ["simplify", "--input", str(pages_path), "--output", str(simplified_path)]
    )
    assert result.exit_code == 0, result.output
    assert len(list(read_pages(simplified_path, "jsonl"))) == len(pages)

    extracted_path = tmp_path / "extracted.jsonl"
    result = runner.invoke(
        main, ["extract", "--input", str(simplified_path), "--output", str(extracted_path)]
    )
    assert result.exit_code == 0, result.output
    extracted = list(read_documents(extracted_path))
    assert 0 < len(extracted) <= len(pages)

    # later stages read settings from a config file
    cfg_path = write_config(
        tmp_path / "cfg.yaml", fixture_corpus_dir, stages={"quality": "false"}
    )

    fetched_path = tmp_path / "fetched.jsonl"
    result = runner.invoke(
        main,
        [
            "fetch",
            "--config", cfg_path,
            "--input", str(extracted_path),
            "--output", str(fetched_path),
        ],
    )
    assert result.exit_code == 0, result.output
    fetched = list(read_documents(fetched_path))
    assert 0 < len(fetched) <= len(extracted)

    filtered_path = tmp_path / "filtered.jsonl"
    result = runner.invoke(
        main,
        [
            "filter",
            "--config", cfg_path,
            "--input", str(fetched_path),
            "--output", str(filtered_path),
        ],
    )
    assert result.exit_code == 0, result.output
    filtered = list(read_documents(filtered_path))
    assert 0 < len(filtered) <= len(fetched)

    safe_path = tmp_path / "safe.jsonl"
    result = runner.invoke(
        main,
        [
            "safety",
            "--config", cfg_path,
            "--input", str(filtered_path),
            "--output", str(safe_path),
        ],
    )
    assert result.exit_code == 0, result.output
    safe = list(read_documents(safe_path))
    assert 0 < len(safe) <= len(filtered)

    deduped_path = tmp_path / "deduped.jsonl"
    result = runner.invoke(
        main,
        [
            "dedup",
            "--config", cfg_path,
            "--input", str(safe_path),
            "--output", str(deduped_path),
        ],
    )
    assert result.exit_code == 0, result.output
    deduped = list(read_documents(deduped_path))
    assert 0 < len(deduped) <= len(safe)
    report = json.loads(result.stderr)
    assert report["records_in"] == len(safe)
    assert report["records_out"] == len(deduped)


def test_stats_text_and_json(runner, golden_final_path, tmp_path):
    out_path = tmp_path / "report.json"
    result = runner.invoke(
        main,
        ["stats", "--input", str(golden_final_path), "--output", str(out_path)],
    )
    assert result.exit_code == 0, result.output
    assert "documents:" in result.output
    payload = json.loads(out_path.read_text("utf-8"))
    assert payload["doc_count"] == sum(1 for _ in read_documents(golden_final_path))
    assert "perplexity_median" not in payload


def test_stats_with_perplexity_flag(runner, golden_final_path):
    result = runner.invoke(
        main, ["stats", "--input", str(golden_final_path), "--with-perplexity"]
    )
    assert result.exit_code == 0, result.output
    assert "median perplexity" in result.output


def test_run_all_matches_golden(runner, fixture_corpus_dir, golden_final_path, tmp_path):
    cfg_path = write_config(tmp_path / "cfg.yaml", fixture_corpus_dir)
    out_dir = tmp_path / "out"
    result = runner.invoke(
        main,
        [
            "run-all",
            "--config", cfg_path,
            "--input", str(fixture_corpus_dir / "pages.warc.gz"),
            "--output", str(out_dir),
        ],
    )
    assert result.exit_code == 0, result.output
    assert (out_dir / "final.jsonl").read_bytes() == golden_final_path.read_bytes()
    assert "final.jsonl" in result.output
    assert "ingest:" in result.stderr


def test_run_all_reports_lock_as_clean_error(runner, fixture_corpus_dir, tmp_path):
    cfg_path = write_config(tmp_path / "cfg.yaml", fixture_corpus_dir)
    out_dir = tmp_path / "locked"
    out_dir.mkdir()
    (out_dir / ".lock").write_text("999", "utf-8")
    result = runner.invoke(
        main,
        [
            "run-all",
            "--config", cfg_path,
            "--input", str(fixture_corpus_dir / "pages.warc.gz"),
            "--output", str(out_dir),
        ],
    )
    assert result.exit_code == 1
    assert "999" in result.stderr
    assert result.exception is None or not isinstance(result.exception, AssertionError)


def test_missing_input_is_usage_error(runner):
    result = runner.invoke(main, ["simplify"])
    assert result.exit_code == 2
    assert "no input path" in result.stderr


def test_unknown_config_key_is_clean_error(runner, tmp_path):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("sparkle: true\n", encoding="utf-8")
    result = runner.invoke(main, ["run-all", "--config", str(cfg), "--input", "x.warc"])
    assert result.exit_code == 1
    assert "sparkle" in result.stderr


def test_missing_config_file_rejected_by_click(runner):
    result = runner.invoke(main, ["stats", "--config", "/nonexistent.yaml", "--input", "x"])
    assert result.exit_code == 2
