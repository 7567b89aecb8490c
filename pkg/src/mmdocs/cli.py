"""Command line front end: one subcommand per pipeline phase plus run-all."""

from __future__ import annotations

import dataclasses
import json
from collections import Counter
from pathlib import Path
from typing import Optional

import click

from .config import ConfigError, InputConfig, PipelineConfig, load_config
from .corpus_io import ReadStats, read_documents, read_pages, write_documents, write_pages_jsonl
from .dedup import (
    dedup_documents_by_image_set,
    dedup_documents_by_url,
    dedup_paragraphs_by_domain,
    drop_overused_images,
)
from .fetch import make_fetcher
from .ngram_lm import InterpolatedNgramModel
from .pipeline import (
    PipelineError,
    _nsfw_scorer,
    _opt_out_client,
    build_default_lm,
    resolve_models,
    run_pipeline,
    stage_extract,
    stage_fetch,
    stage_filter,
    stage_simplify,
)
from .safety import remove_nsfw, remove_opted_out
from .stats import render_text_report, save_report, stats_report


def _base_config(config_path: Optional[str]) -> PipelineConfig:
    if not config_path:
        return PipelineConfig()
    try:
        return load_config(config_path)
    except ConfigError as exc:
        raise click.ClickException(str(exc)) from exc


def _apply_common(
    cfg: PipelineConfig,
    input_path: Optional[str],
    shards: Optional[int],
    seed: Optional[int],
    input_format: Optional[str] = None,
) -> PipelineConfig:
    if input_path or input_format:
        cfg = dataclasses.replace(
            cfg,
            input=InputConfig(
                path=input_path or cfg.input.path,
                format=input_format or cfg.input.format,
            ),
        )
    if shards is not None:
        cfg = dataclasses.replace(cfg, shards=shards)
    if seed is not None:
        cfg = dataclasses.replace(cfg, seed=seed)
    return cfg


def _common_options(fn):
    fn = click.option("--config", "config_path", type=click.Path(exists=True), default=None,
                      help="YAML config file.")(fn)
    fn = click.option("--input", "input_path", default=None, help="Input path override.")(fn)
    fn = click.option("--output", "output_path", default=None, help="Output path override.")(fn)
    fn = click.option("--shards", type=int, default=None, help="Shard count override.")(fn)
    fn = click.option("--seed", type=int, default=None, help="Seed override.")(fn)
    return fn


def _echo_report(name: str, records_in: int, records_out: int, reasons: Counter) -> None:
    payload = {
        "name": name,
        "records_in": records_in,
        "records_out": records_out,
        "reasons": dict(sorted(reasons.items())),
    }
    click.echo(json.dumps(payload, indent=2), err=True)


def _require_input(cfg: PipelineConfig) -> str:
    if not cfg.input.path:
        raise click.UsageError("no input path: pass --input or set input.path in the config")
    return cfg.input.path


@click.group()
def main() -> None:
    """Build interleaved image-text documents from web page archives."""


@main.command()
@_common_options
@click.option("--format", "input_format", type=click.Choice(["warc", "html-dir", "jsonl"]),
              default=None, help="Input archive format.")
def ingest(config_path, input_path, output_path, shards, seed, input_format):
    """Read an archive and normalize pages to JSONL."""
    cfg = _apply_common(_base_config(config_path), input_path, shards, seed, input_format)
    stats = ReadStats()
    pages = list(read_pages(_require_input(cfg), cfg.input.format, stats))
    out = Path(output_path or "pages.jsonl")
    write_pages_jsonl(pages, out)
    reasons = Counter()
    if stats.skipped_non_html:
        reasons["non_html"] = stats.skipped_non_html
    if stats.skipped_non_response:
        reasons["non_response"] = stats.skipped_non_response
    if stats.skipped_malformed:
        reasons["malformed"] = stats.skipped_malformed
    _echo_report("ingest", stats.total, len(pages), reasons)


@main.command()
@_common_options
def simplify(config_path, input_path, output_path, shards, seed):
    """Reduce page DOMs to the retained-tag form."""
    cfg = _apply_common(_base_config(config_path), input_path, shards, seed)
    pages = list(read_pages(_require_input(cfg), "jsonl"))
    out_pages, reasons = stage_simplify(pages, cfg.simplify)
    write_pages_jsonl(out_pages, Path(output_path or "simplified.jsonl"))
    _echo_report("simplify", len(pages), len(out_pages), reasons)


@main.command()
@_common_options
def extract(config_path, input_path, output_path, shards, seed):
    """Turn simplified pages into multimodal documents."""
    cfg = _apply_common(_base_config(config_path), input_path, shards, seed)
    pages = list(read_pages(_require_input(cfg), "jsonl"))
    docs, reasons = stage_extract(pages)
    write_documents(docs, Path(output_path or "extracted.jsonl"))
    _echo_report("extract", len(pages), len(docs), reasons)


@main.command()
@_common_options
def fetch(config_path, input_path, output_path, shards, seed):
    """Resolve image metadata and drop images that cannot be fetched."""
    cfg = _apply_common(_base_config(config_path), input_path, shards, seed)
    docs = list(read_documents(_require_input(cfg)))
    fetcher = make_fetcher(cfg.fetch.kind, cfg.fetch.source, workers=cfg.fetch.workers)
    out_docs, reasons = stage_fetch(docs, fetcher)
    write_documents(out_docs, Path(output_path or "fetched.jsonl"))
    _echo_report("fetch", len(docs), len(out_docs), reasons)


@main.command("filter")
@_common_options
def filter_cmd(config_path, input_path, output_path, shards, seed):
    """Apply paragraph, image and document gates."""
    cfg = _apply_common(_base_config(config_path), input_path, shards, seed)
    docs = list(read_documents(_require_input(cfg)))
    models = resolve_models(cfg)
    out_docs, reasons = stage_filter(
        docs,
        cfg.text_filters,
        cfg.image_filters,
        models.lists,
        models.lm,
        models.identifier,
        cfg.common_word_min_count,
    )
    write_documents(out_docs, Path(output_path or "filtered.jsonl"))
    _echo_report("filter", len(docs), len(out_docs), reasons)


@main.command()
@_common_options
def dedup(config_path, input_path, output_path, shards, seed):
    """Run the corpus-wide duplicate removal chain."""
    cfg = _apply_common(_base_config(config_path), input_path, shards, seed)
    docs = list(read_documents(_require_input(cfg)))
    total_in = len(docs)
    reasons: Counter = Counter()
    if cfg.stages.image_dedup:
        docs, r = drop_overused_images(docs, max_occurrences=cfg.dedup.max_image_occurrences)
        reasons.update(r)
    if cfg.stages.url_dedup:
        docs, r = dedup_documents_by_url(docs)
        reasons.update(r)
    if cfg.stages.image_set_dedup:
        docs, r = dedup_documents_by_image_set(docs)
        reasons.update(r)
    if cfg.stages.domain_paragraph_dedup:
        docs, r = dedup_paragraphs_by_domain(docs, min_count=cfg.dedup.domain_paragraph_min_count)
        reasons.update(r)
    write_documents(docs, Path(output_path or "deduped.jsonl"))
    _echo_report("dedup", total_in, len(docs), reasons)


@main.command()
@_common_options
def safety(config_path, input_path, output_path, shards, seed):
    """Honor image opt-outs and remove flagged content."""
    cfg = _apply_common(_base_config(config_path), input_path, shards, seed)
    docs = list(read_documents(_require_input(cfg)))
    total_in = len(docs)
    reasons: Counter = Counter()
    if cfg.stages.opt_out:
        docs, r = remove_opted_out(docs, _opt_out_client(cfg.safety.opt_out))
        reasons.update(r)
    if cfg.stages.nsfw:
        docs, r = remove_nsfw(
            docs,
            _nsfw_scorer(cfg.safety.nsfw),
            banned_substrings=cfg.safety.nsfw.banned_substrings,
            cutoff=cfg.safety.nsfw.cutoff,
        )
        reasons.update(r)
    write_documents(docs, Path(output_path or "safe.jsonl"))
    _echo_report("safety", total_in, len(docs), reasons)


@main.command()
@_common_options
@click.option("--with-perplexity", is_flag=True, default=None,
              help="Score each document with the bundled language model.")
def stats(config_path, input_path, output_path, shards, seed, with_perplexity):
    """Summarize a corpus: counts, histograms, top domains."""
    cfg = _apply_common(_base_config(config_path), input_path, shards, seed)
    docs = list(read_documents(_require_input(cfg)))
    want_ppl = cfg.stats.with_perplexity if with_perplexity is None else with_perplexity
    lm: Optional[InterpolatedNgramModel] = None
    if want_ppl:
        if cfg.ngram_lm.model_path:
            lm = InterpolatedNgramModel.load(cfg.ngram_lm.model_path)
        else:
            lm = build_default_lm(cfg.ngram_lm.order, cfg.ngram_lm.alpha)
    report = stats_report(
        docs,
        top_domains=cfg.stats.top_domains,
        token_bin_width=cfg.stats.token_bin_width,
        lm=lm,
    )
    if output_path:
        save_report(report, output_path)
    click.echo(render_text_report(report))


@main.command("run-all")
@_common_options
@click.option("--force", is_flag=True, help="Take over a locked output directory.")
def run_all(config_path, input_path, output_path, shards, seed, force):
    """Execute every stage from archive to final corpus."""
    cfg = _apply_common(_base_config(config_path), input_path, shards, seed)
    if output_path:
        cfg = dataclasses.replace(cfg, output_dir=output_path)
    try:
        docs, reports = run_pipeline(cfg, force=force)
    except (ConfigError, PipelineError) as exc:
        raise click.ClickException(str(exc)) from exc
    for report in reports:
        click.echo(f"{report.name}: {report.records_in} -> {report.records_out}", err=True)
    click.echo(f"{len(docs)} documents -> {Path(cfg.output_dir) / 'final.jsonl'}")


if __name__ == "__main__":
    main()
