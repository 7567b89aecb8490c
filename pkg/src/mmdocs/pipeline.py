"""Stage graph: checkpointed, resumable orchestration from archive to corpus."""

from __future__ import annotations

import json
import os
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

from .config import PipelineConfig
from .corpus_io import (
    PageRecord,
    ReadStats,
    read_documents,
    read_pages,
    write_documents,
    write_pages_jsonl,
)
from .dedup import (
    CorpusCounters,
    dedup_documents_by_image_set,
    dedup_documents_by_url,
    dedup_minhash,
    dedup_paragraphs_by_domain,
    drop_overused_images,
    repetition_gate,
    repetition_stats,
)
from .documents import MultimodalDocument
from .domtree import parse_html
from .extract import extract_document, harvest_image_urls, attach_images, visible_text
from .fetch import ImageFetcher, make_fetcher, write_cache
from .filters import filter_document
from .hashing import stable_digest
from .langid import CharNgramLanguageIdentifier, bundled_identifier
from .ngram_lm import InterpolatedNgramModel
from .quality import HashedTokenQualityClassifier, score_quality
from .safety import (
    AllowAllClient,
    AlwaysSafeScorer,
    HttpBatchClient,
    LocalListClient,
    ManifestScorer,
    remove_nsfw,
    remove_opted_out,
)
from .simplify import simplify_to_html
from .tokens import tokenize
from .wordlists import WordLists


class PipelineError(RuntimeError):
    pass


class PipelineLocked(PipelineError):
    pass


@dataclass
class StageReport:
    name: str
    records_in: int
    records_out: int
    reasons: Counter = field(default_factory=Counter)
    wall_time_s: float = 0.0

    def __post_init__(self) -> None:
        if self.records_out > self.records_in:
            raise ValueError(f"{self.name}: records_out exceeds records_in")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "records_in": self.records_in,
            "records_out": self.records_out,
            "reasons": dict(sorted(self.reasons.items())),
            "wall_time_s": self.wall_time_s,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StageReport":
        return cls(
            name=data["name"],
            records_in=data["records_in"],
            records_out=data["records_out"],
            reasons=Counter(data.get("reasons", {})),
            wall_time_s=data.get("wall_time_s", 0.0),
        )


# --- bundled model bootstrap ---


def bundled_corpus_lines() -> list[str]:
    text = (resources.files("mmdocs") / "data" / "wiki_corpus.txt").read_text("utf-8")
    return [line.strip() for line in text.splitlines() if line.strip()]


def build_default_lm(order: int = 5, alpha: float = 0.1) -> InterpolatedNgramModel:
    return InterpolatedNgramModel(order=order, alpha=alpha).fit(bundled_corpus_lines())


def _noise_document(rng: random.Random, vocab: Sequence[str], length: int) -> str:
    """Token soup: uniform vocabulary draws with occasional gibberish."""
    letters = "abcdefghijklmnopqrstuvwxyz"
    out = []
    for _ in range(length):
        if rng.random() < 0.3:
            out.append("".join(rng.choice(letters) for _ in range(rng.randint(3, 12))))
        else:
            out.append(rng.choice(vocab))
    return " ".join(out)


def build_default_quality_model(
    seed: int = 0, hash_dim: int = 1 << 18, epochs: int = 60
) -> HashedTokenQualityClassifier:
    """Desk-scale classifier: bundled prose vs seeded token noise."""
    lines = bundled_corpus_lines()
    positives = [" ".join(lines[i : i + 4]) for i in range(0, len(lines), 4)]
    vocab = sorted({tok for line in lines for tok in tokenize(line.lower())})
    rng = random.Random(seed)
    negatives = [
        _noise_document(rng, vocab, len(tokenize(doc))) for doc in positives
    ]
    return HashedTokenQualityClassifier.train(
        positives, negatives, hash_dim=hash_dim, epochs=epochs
    )


# --- stage functions (pure: data in, data + reasons out) ---


def stage_language_id(
    pages: Sequence[PageRecord],
    identifier: CharNgramLanguageIdentifier,
    target: str,
    min_score: float,
) -> tuple[list[PageRecord], Counter]:
    kept: list[PageRecord] = []
    reasons: Counter = Counter()
    for page in pages:
        text = visible_text(page.raw_html)
        if not text.strip():
            reasons["no_text"] += 1
            continue
        result = identifier.identify(text)
        if result.label != target:
            reasons["wrong_language"] += 1
        elif result.score < min_score:
            reasons["low_lang_score"] += 1
        else:
            kept.append(page)
    return kept, reasons


def _page_key(page: PageRecord, index: int) -> str:
    return stable_digest(f"{page.url}|{page.fetch_time}|{index}".encode("utf-8"))[:16]


def stage_early_dedup(
    pages: Sequence[PageRecord],
    threshold: float,
    num_hashes: int,
    bands: int,
    rows: int,
    shingle_size: int,
    seed: int,
) -> tuple[list[PageRecord], Counter]:
    reasons: Counter = Counter()
    items: list[tuple[str, str]] = []
    keyed: dict[str, PageRecord] = {}
    textless: list[tuple[int, PageRecord]] = []
    order: list[str] = []
    for i, page in enumerate(pages):
        text = visible_text(page.raw_html)
        key = _page_key(page, i)
        if not tokenize(text):
            textless.append((i, page))
            continue
        items.append((key, text))
        keyed[key] = page
        order.append(key)
    survivors = set(
        dedup_minhash(
            items,
            threshold=threshold,
            num_hashes=num_hashes,
            bands=bands,
            rows=rows,
            shingle_size=shingle_size,
            seed=seed,
        )
    )
    dropped = len(items) - len(survivors)
    if dropped:
        reasons["near_duplicate"] = dropped
    kept = [keyed[key] for key in order if key in survivors]
    # Pages with no tokens carry nothing to compare; they pass through here.
    for _, page in textless:
        kept.append(page)
    return kept, reasons


def stage_repetition_gate(
    pages: Sequence[PageRecord], thresholds
) -> tuple[list[PageRecord], Counter]:
    kept: list[PageRecord] = []
    reasons: Counter = Counter()
    for page in pages:
        verdict = repetition_gate(repetition_stats(visible_text(page.raw_html)), thresholds)
        if verdict.accepted:
            kept.append(page)
        else:
            reasons.update(r.code for r in verdict.reasons)
    return kept, reasons


def stage_quality(
    pages: Sequence[PageRecord], model: HashedTokenQualityClassifier, threshold: float
) -> tuple[list[PageRecord], Counter]:
    kept: list[PageRecord] = []
    reasons: Counter = Counter()
    for page in pages:
        text = visible_text(page.raw_html)
        if not text.strip():
            reasons["no_text"] += 1
            continue
        if score_quality(model, text) >= threshold:
            kept.append(page)
        else:
            reasons["low_quality_score"] += 1
    return kept, reasons


def stage_simplify(pages: Sequence[PageRecord], config) -> tuple[list[PageRecord], Counter]:
    out: list[PageRecord] = []
    reasons: Counter = Counter()
    for page in pages:
        html = simplify_to_html(page.raw_html, config)
        out.append(
            PageRecord(
                url=page.url,
                fetch_time=page.fetch_time,
                raw_html=html.encode("utf-8"),
                content_type=page.content_type,
            )
        )
    return out, reasons


def stage_extract(pages: Sequence[PageRecord]) -> tuple[list[MultimodalDocument], Counter]:
    docs: list[MultimodalDocument] = []
    reasons: Counter = Counter()
    for i, page in enumerate(pages):
        tree = parse_html(page.raw_html)
        try:
            doc = extract_document(
                tree, page.url, page.fetch_time, doc_id=_page_key(page, i)
            )
        except Exception:
            reasons["empty_extraction"] += 1
            continue
        docs.append(doc)
    return docs, reasons


def stage_fetch(
    docs: Sequence[MultimodalDocument],
    fetcher: ImageFetcher,
    results_path: Optional[Path] = None,
) -> tuple[list[MultimodalDocument], Counter]:
    manifest = harvest_image_urls(docs)
    results = fetcher.fetch(manifest.urls)
    if results_path is not None:
        write_cache((results[url] for url in manifest.urls), results_path)
    reasons: Counter = Counter()
    out: list[MultimodalDocument] = []
    for doc in docs:
        attached = attach_images(doc, results)
        lost = len(doc.image_urls()) - len(attached.image_urls())
        if lost:
            reasons["image_fetch_failed"] += lost
        if not attached.segments:
            reasons["empty_after_fetch"] += 1
            continue
        out.append(attached)
    return out, reasons


def stage_filter(
    docs: Sequence[MultimodalDocument],
    text_params,
    image_params,
    lists: WordLists,
    lm: Optional[InterpolatedNgramModel],
    lang_model: Optional[CharNgramLanguageIdentifier],
    common_word_min_count: int = 2,
) -> tuple[list[MultimodalDocument], Counter]:
    # Common words come from the corpus under filtration itself: global
    # counts first, then the per-document pass uses the frozen set.
    lists = lists.with_common_words((d.full_text() for d in docs), common_word_min_count)
    kept: list[MultimodalDocument] = []
    reasons: Counter = Counter()
    for doc in docs:
        outcome = filter_document(
            doc,
            text_params=text_params,
            image_params=image_params,
            lists=lists,
            lm=lm,
            lang_model=lang_model,
        )
        for code, count in outcome.paragraph_reasons.items():
            reasons[f"paragraph:{code}"] += count
        for code, count in outcome.image_reasons.items():
            reasons[f"image:{code}"] += count
        if outcome.verdict.accepted and outcome.document is not None:
            kept.append(outcome.document)
        else:
            reasons.update(f"doc:{r.code}" for r in outcome.verdict.reasons)
    return kept, reasons


def _opt_out_client(cfg):
    if cfg.kind == "allow-all":
        return AllowAllClient()
    if cfg.kind == "local-list":
        return LocalListClient(cfg.source)
    return HttpBatchClient(
        endpoint=cfg.endpoint,
        batch_size=cfg.batch_size,
        timeout=cfg.timeout,
        retries=cfg.retries,
        fail_closed=cfg.fail_closed,
    )


def _nsfw_scorer(cfg):
    if cfg.kind == "always-safe":
        return AlwaysSafeScorer()
    return ManifestScorer(cfg.manifest_path)


# --- the stage graph ---

PAGE_STAGES = ("ingest", "language_id", "early_dedup", "repetition_gate", "quality", "simplify")
DOC_STAGES = (
    "extract",
    "fetch",
    "filter",
    "opt_out",
    "image_dedup",
    "nsfw",
    "url_dedup",
    "image_set_dedup",
    "domain_paragraph_dedup",
    "write",
)
STAGE_ORDER = PAGE_STAGES + DOC_STAGES

# Stages that run unconditionally; the rest honor their toggle.
_ALWAYS_ON = {"ingest", "simplify", "extract", "fetch", "write"}


@dataclass
class PipelineModels:
    """Models and lists resolved once per run, shared by every stage."""

    identifier: Optional[CharNgramLanguageIdentifier] = None
    quality: Optional[HashedTokenQualityClassifier] = None
    lm: Optional[InterpolatedNgramModel] = None
    lists: Optional[WordLists] = None


def resolve_models(config: PipelineConfig) -> PipelineModels:
    models = PipelineModels()
    if config.language_id.model_path:
        models.identifier = CharNgramLanguageIdentifier.load(config.language_id.model_path)
    else:
        models.identifier = bundled_identifier()
    if config.stages.quality:
        if config.quality.model_path:
            models.quality = HashedTokenQualityClassifier.load(config.quality.model_path)
        elif config.quality.train_if_missing:
            models.quality = build_default_quality_model(
                seed=config.seed,
                hash_dim=config.quality.hash_dim,
                epochs=config.quality.epochs,
            )
        else:
            raise PipelineError("quality stage enabled but no model configured")
    if config.ngram_lm.model_path:
        models.lm = InterpolatedNgramModel.load(config.ngram_lm.model_path)
    else:
        models.lm = build_default_lm(config.ngram_lm.order, config.ngram_lm.alpha)
    models.lists = WordLists.bundled()
    return models


def _write_shards(items: Sequence, directory: Path, shards: int, write_one: Callable) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    for stale in directory.glob("*.jsonl"):
        stale.unlink()
    if not items:
        return
    size = -(-len(items) // shards)  # ceil
    for i in range(0, len(items), size):
        write_one(items[i : i + size], directory / f"{i // size:04d}.jsonl")


def _read_shards(directory: Path, read_one: Callable) -> list:
    out: list = []
    for shard in sorted(directory.glob("*.jsonl")):
        out.extend(read_one(shard))
    return out


class _StageRunner:
    """Runs stages in order, persisting each output and skipping finished ones."""

    def __init__(self, stage_dir: Path, shards: int = 1):
        self.stage_dir = stage_dir
        self.shards = max(1, shards)
        self.reports: list[StageReport] = []

    def _base(self, name: str) -> Path:
        return self.stage_dir / f"{STAGE_ORDER.index(name):02d}_{name}"

    def artifact_path(self, name: str, suffix: str) -> Path:
        return self._base(name).with_suffix(suffix)

    def run(self, name, data, producer, write_one, read_one):
        base = self._base(name)
        done_path = base.with_suffix(".done")
        report_path = base.with_suffix(".report.json")
        if done_path.exists():
            report = StageReport.from_dict(json.loads(report_path.read_text("utf-8")))
            self.reports.append(report)
            return _read_shards(base, read_one)
        started = time.perf_counter()
        out, reasons, records_in = producer(data)
        _write_shards(out, base, self.shards, write_one)
        report = StageReport(
            name=name,
            records_in=records_in,
            records_out=len(out),
            reasons=reasons,
            wall_time_s=time.perf_counter() - started,
        )
        report_path.write_text(json.dumps(report.to_dict(), indent=2) + "\n", "utf-8")
        done_path.touch()
        self.reports.append(report)
        return out


def _load_pages(path: Path) -> list[PageRecord]:
    return list(read_pages(path, "jsonl"))


def _load_docs(path: Path) -> list[MultimodalDocument]:
    return list(read_documents(path))


def run_pipeline(
    config: PipelineConfig, force: bool = False
) -> tuple[list[MultimodalDocument], list[StageReport]]:
    """Execute the full stage graph, checkpointing under output_dir/stages.

    Finished stages (their .done marker present) are loaded, not recomputed,
    so a rerun after a crash resumes from the last durable checkpoint.
    """
    if not config.input.path:
        raise PipelineError("config.input.path is required")
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    lock = out_dir / ".lock"
    if lock.exists() and not force:
        raise PipelineLocked(f"output directory is locked by {lock.read_text('utf-8').strip()}")
    lock.write_text(str(os.getpid()), "utf-8")
    try:
        stage_dir = out_dir / "stages"
        stage_dir.mkdir(exist_ok=True)
        runner = _StageRunner(stage_dir, config.shards)
        models = resolve_models(config)
        toggles = config.stages

        def gated(name: str) -> bool:
            return name in _ALWAYS_ON or getattr(toggles, name)

        def ingest(_):
            stats = ReadStats()
            pages = list(read_pages(config.input.path, config.input.format, stats))
            reasons = Counter()
            if stats.skipped_non_html:
                reasons["non_html"] = stats.skipped_non_html
            if stats.skipped_non_response:
                reasons["non_response"] = stats.skipped_non_response
            if stats.skipped_malformed:
                reasons["malformed"] = stats.skipped_malformed
            if stats.time_regressions:
                reasons["time_regression_warnings"] = stats.time_regressions
            return pages, reasons, stats.total

        pages = runner.run("ingest", None, ingest, write_pages_jsonl_path, _load_pages)

        if gated("language_id"):
            pages = runner.run(
                "language_id",
                pages,
                lambda data: (
                    *stage_language_id(
                        data,
                        models.identifier,
                        config.language_id.target,
                        config.language_id.min_score,
                    ),
                    len(data),
                ),
                write_pages_jsonl_path,
                _load_pages,
            )
        if gated("early_dedup"):
            mh = config.dedup.minhash
            pages = runner.run(
                "early_dedup",
                pages,
                lambda data: (
                    *stage_early_dedup(
                        data,
                        threshold=mh.threshold,
                        num_hashes=mh.num_hashes,
                        bands=mh.bands,
                        rows=mh.rows,
                        shingle_size=mh.shingle_size,
                        seed=config.seed,
                    ),
                    len(data),
                ),
                write_pages_jsonl_path,
                _load_pages,
            )
        if gated("repetition_gate"):
            pages = runner.run(
                "repetition_gate",
                pages,
                lambda data: (
                    *stage_repetition_gate(data, config.dedup.repetition),
                    len(data),
                ),
                write_pages_jsonl_path,
                _load_pages,
            )
        if gated("quality"):
            pages = runner.run(
                "quality",
                pages,
                lambda data: (
                    *stage_quality(data, models.quality, config.quality.threshold),
                    len(data),
                ),
                write_pages_jsonl_path,
                _load_pages,
            )
        pages = runner.run(
            "simplify",
            pages,
            lambda data: (*stage_simplify(data, config.simplify), len(data)),
            write_pages_jsonl_path,
            _load_pages,
        )
        docs = runner.run(
            "extract",
            pages,
            lambda data: (*stage_extract(data), len(data)),
            write_documents_path,
            _load_docs,
        )

        def fetch_producer(data):
            fetcher = make_fetcher(
                config.fetch.kind, config.fetch.source, workers=config.fetch.workers
            )
            results_path = runner.artifact_path("fetch", ".results.jsonl")
            out, reasons = stage_fetch(data, fetcher, results_path)
            return out, reasons, len(data)

        docs = runner.run("fetch", docs, fetch_producer, write_documents_path, _load_docs)

        if gated("filter"):
            docs = runner.run(
                "filter",
                docs,
                lambda data: (
                    *stage_filter(
                        data,
                        config.text_filters,
                        config.image_filters,
                        models.lists,
                        models.lm,
                        models.identifier,
                        config.common_word_min_count,
                    ),
                    len(data),
                ),
                write_documents_path,
                _load_docs,
            )
        if gated("opt_out"):
            client = _opt_out_client(config.safety.opt_out)
            docs = runner.run(
                "opt_out",
                docs,
                lambda data: (*remove_opted_out(data, client), len(data)),
                write_documents_path,
                _load_docs,
            )
        if gated("image_dedup"):

            def image_dedup_producer(data):
                counters = CorpusCounters.from_documents(data)
                counters.save(runner.artifact_path("image_dedup", ".counters.txt"))
                out, reasons = drop_overused_images(
                    data,
                    max_occurrences=config.dedup.max_image_occurrences,
                    counts=counters.image_url_counts,
                )
                return out, reasons, len(data)

            docs = runner.run(
                "image_dedup", docs, image_dedup_producer, write_documents_path, _load_docs
            )
        if gated("nsfw"):
            scorer = _nsfw_scorer(config.safety.nsfw)
            docs = runner.run(
                "nsfw",
                docs,
                lambda data: (
                    *remove_nsfw(
                        data,
                        scorer,
                        banned_substrings=config.safety.nsfw.banned_substrings,
                        cutoff=config.safety.nsfw.cutoff,
                    ),
                    len(data),
                ),
                write_documents_path,
                _load_docs,
            )
        if gated("url_dedup"):
            docs = runner.run(
                "url_dedup",
                docs,
                lambda data: (*dedup_documents_by_url(data), len(data)),
                write_documents_path,
                _load_docs,
            )
        if gated("image_set_dedup"):
            docs = runner.run(
                "image_set_dedup",
                docs,
                lambda data: (*dedup_documents_by_image_set(data), len(data)),
                write_documents_path,
                _load_docs,
            )
        if gated("domain_paragraph_dedup"):

            def domain_producer(data):
                counters = CorpusCounters.from_documents(data)
                counters.save(
                    runner.artifact_path("domain_paragraph_dedup", ".counters.txt")
                )
                out, reasons = dedup_paragraphs_by_domain(
                    data,
                    min_count=config.dedup.domain_paragraph_min_count,
                    counts=counters.domain_paragraph_counts,
                )
                return out, reasons, len(data)

            docs = runner.run(
                "domain_paragraph_dedup",
                docs,
                domain_producer,
                write_documents_path,
                _load_docs,
            )

        def write_final(data):
            write_documents(data, out_dir / "final.jsonl")
            return list(data), Counter(), len(data)

        docs = runner.run("write", docs, write_final, write_documents_path, _load_docs)

        reports_payload = [report.to_dict() for report in runner.reports]
        (out_dir / "reports.json").write_text(
            json.dumps(reports_payload, indent=2) + "\n", "utf-8"
        )
        return docs, runner.reports
    finally:
        lock.unlink(missing_ok=True)


def write_pages_jsonl_path(pages: Sequence[PageRecord], path: Path) -> None:
    write_pages_jsonl(pages, path)


def write_documents_path(docs: Sequence[MultimodalDocument], path: Path) -> None:
    write_documents(docs, path)
