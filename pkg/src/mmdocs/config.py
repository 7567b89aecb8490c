"""Pipeline configuration: strict YAML with defaults matching the filter tables."""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Mapping, Optional

import yaml

from .dedup import (
    DEFAULT_SEED,
    DEFAULT_THRESHOLD,
    LSH_BANDS,
    LSH_ROWS,
    NUM_HASHES,
    SHINGLE_SIZE,
    RepetitionThresholds,
)
from .filters import ImageFilterParams, TextFilterParams
from .safety import DEFAULT_NSFW_CUTOFF, DEFAULT_NSFW_SUBSTRINGS
from .simplify import DEFAULT_CONFIG, SimplifyConfig


class ConfigError(ValueError):
    pass


def _check_keys(section: str, data: Mapping, known: set[str]) -> None:
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"{section}: unknown keys {sorted(unknown)}")


def _dataclass_from(section: str, cls, data: Mapping):
    known = {f.name for f in fields(cls)}
    _check_keys(section, data, known)
    return cls(**dict(data))


@dataclass
class InputConfig:
    path: Optional[str] = None
    format: str = "warc"

    def __post_init__(self) -> None:
        if self.format not in ("warc", "html-dir", "jsonl"):
            raise ConfigError(f"input.format: unknown tag {self.format!r}")


@dataclass
class StageToggles:
    language_id: bool = True
    early_dedup: bool = True
    repetition_gate: bool = True
    quality: bool = True
    filter: bool = True
    opt_out: bool = True
    image_dedup: bool = True
    nsfw: bool = True
    url_dedup: bool = True
    image_set_dedup: bool = True
    domain_paragraph_dedup: bool = True


@dataclass
class LangIdConfig:
    target: str = "en"
    min_score: float = 0.8
    model_path: Optional[str] = None


@dataclass
class QualityConfig:
    model_path: Optional[str] = None
    threshold: float = 0.5
    hash_dim: int = 1 << 18
    epochs: int = 60
    # Without a model file the pipeline trains a small classifier at start:
    # bundled prose as positives, seeded token noise as negatives.
    train_if_missing: bool = True


@dataclass
class NgramConfig:
    model_path: Optional[str] = None
    order: int = 5
    alpha: float = 0.1


@dataclass
class FetchConfig:
    kind: str = "cache"
    source: Optional[str] = None
    workers: int = 8

    def __post_init__(self) -> None:
        if self.kind not in ("cache", "directory", "http"):
            raise ConfigError(f"fetch.kind: unknown kind {self.kind!r}")


@dataclass
class MinhashConfig:
    threshold: float = DEFAULT_THRESHOLD
    num_hashes: int = NUM_HASHES
    bands: int = LSH_BANDS
    rows: int = LSH_ROWS
    shingle_size: int = SHINGLE_SIZE

    def __post_init__(self) -> None:
        if self.bands * self.rows != self.num_hashes:
            raise ConfigError("dedup.minhash: bands * rows must equal num_hashes")


@dataclass
class DedupConfig:
    minhash: MinhashConfig = field(default_factory=MinhashConfig)
    repetition: RepetitionThresholds = field(default_factory=RepetitionThresholds)
    max_image_occurrences: int = 10
    domain_paragraph_min_count: int = 3


@dataclass
class OptOutConfig:
    kind: str = "allow-all"
    source: Optional[str] = None
    endpoint: Optional[str] = None
    batch_size: int = 100
    timeout: float = 10.0
    retries: int = 3
    fail_closed: bool = True

    def __post_init__(self) -> None:
        if self.kind not in ("allow-all", "local-list", "http-batch"):
            raise ConfigError(f"safety.opt_out.kind: unknown kind {self.kind!r}")
        if self.kind == "local-list" and not self.source:
            raise ConfigError("safety.opt_out: local-list needs source")
        if self.kind == "http-batch" and not self.endpoint:
            raise ConfigError("safety.opt_out: http-batch needs endpoint")


@dataclass
class NsfwConfig:
    kind: str = "always-safe"
    manifest_path: Optional[str] = None
    cutoff: float = DEFAULT_NSFW_CUTOFF
    banned_substrings: frozenset[str] = DEFAULT_NSFW_SUBSTRINGS

    def __post_init__(self) -> None:
        if self.kind not in ("always-safe", "manifest"):
            raise ConfigError(f"safety.nsfw.kind: unknown kind {self.kind!r}")
        if self.kind == "manifest" and not self.manifest_path:
            raise ConfigError("safety.nsfw: manifest kind needs manifest_path")
        if not isinstance(self.banned_substrings, frozenset):
            self.banned_substrings = frozenset(str(s).lower() for s in self.banned_substrings)


@dataclass
class SafetyConfig:
    opt_out: OptOutConfig = field(default_factory=OptOutConfig)
    nsfw: NsfwConfig = field(default_factory=NsfwConfig)


@dataclass
class StatsConfig:
    top_domains: int = 20
    with_perplexity: bool = False
    token_bin_width: int = 50


@dataclass
class PipelineConfig:
    input: InputConfig = field(default_factory=InputConfig)
    output_dir: str = "pipeline_out"
    seed: int = DEFAULT_SEED
    shards: int = 1
    common_word_min_count: int = 2
    stages: StageToggles = field(default_factory=StageToggles)
    language_id: LangIdConfig = field(default_factory=LangIdConfig)
    quality: QualityConfig = field(default_factory=QualityConfig)
    ngram_lm: NgramConfig = field(default_factory=NgramConfig)
    fetch: FetchConfig = field(default_factory=FetchConfig)
    simplify: SimplifyConfig = field(default_factory=lambda: DEFAULT_CONFIG)
    text_filters: TextFilterParams = field(default_factory=TextFilterParams)
    image_filters: ImageFilterParams = field(default_factory=ImageFilterParams)
    dedup: DedupConfig = field(default_factory=DedupConfig)
    safety: SafetyConfig = field(default_factory=SafetyConfig)
    stats: StatsConfig = field(default_factory=StatsConfig)


_TOP_KEYS = {
    "input",
    "output_dir",
    "seed",
    "shards",
    "common_word_min_count",
    "stages",
    "language_id",
    "quality",
    "ngram_lm",
    "fetch",
    "simplify",
    "text_filters",
    "image_filters",
    "dedup",
    "safety",
    "stats",
}


def _repetition_from(data: Mapping) -> RepetitionThresholds:
    _check_keys(
        "dedup.repetition",
        data,
        {
            "duplicate_line_fraction",
            "duplicate_line_char_fraction",
            "top_ngram_char_fraction",
            "duplicate_ngram_char_fraction",
        },
    )
    base = RepetitionThresholds()
    return RepetitionThresholds(
        duplicate_line_fraction=data.get(
            "duplicate_line_fraction", base.duplicate_line_fraction
        ),
        duplicate_line_char_fraction=data.get(
            "duplicate_line_char_fraction", base.duplicate_line_char_fraction
        ),
        top_ngram_char_fraction={
            int(k): float(v)
            for k, v in data.get("top_ngram_char_fraction", base.top_ngram_char_fraction).items()
        },
        duplicate_ngram_char_fraction={
            int(k): float(v)
            for k, v in data.get(
                "duplicate_ngram_char_fraction", base.duplicate_ngram_char_fraction
            ).items()
        },
    )


def config_from_mapping(data: Mapping) -> PipelineConfig:
    _check_keys("config", data, _TOP_KEYS)
    data = dict(data)
    kwargs: dict = {}
    if "input" in data:
        kwargs["input"] = _dataclass_from("input", InputConfig, data["input"])
    for key in ("output_dir", "seed", "shards", "common_word_min_count"):
        if key in data:
            kwargs[key] = data[key]
    if "stages" in data:
        kwargs["stages"] = _dataclass_from("stages", StageToggles, data["stages"])
    if "language_id" in data:
        kwargs["language_id"] = _dataclass_from("language_id", LangIdConfig, data["language_id"])
    if "quality" in data:
        kwargs["quality"] = _dataclass_from("quality", QualityConfig, data["quality"])
    if "ngram_lm" in data:
        kwargs["ngram_lm"] = _dataclass_from("ngram_lm", NgramConfig, data["ngram_lm"])
    if "fetch" in data:
        kwargs["fetch"] = _dataclass_from("fetch", FetchConfig, data["fetch"])
    if "simplify" in data:
        kwargs["simplify"] = SimplifyConfig.from_mapping(data["simplify"])
    if "text_filters" in data:
        kwargs["text_filters"] = TextFilterParams.from_mapping(data["text_filters"])
    if "image_filters" in data:
        kwargs["image_filters"] = ImageFilterParams.from_mapping(data["image_filters"])
    if "dedup" in data:
        section = dict(data["dedup"])
        _check_keys(
            "dedup",
            section,
            {"minhash", "repetition", "max_image_occurrences", "domain_paragraph_min_count"},
        )
        dedup_kwargs: dict = {}
        if "minhash" in section:
            dedup_kwargs["minhash"] = _dataclass_from(
                "dedup.minhash", MinhashConfig, section["minhash"]
            )
        if "repetition" in section:
            dedup_kwargs["repetition"] = _repetition_from(section["repetition"])
        for key in ("max_image_occurrences", "domain_paragraph_min_count"):
            if key in section:
                dedup_kwargs[key] = section[key]
        kwargs["dedup"] = DedupConfig(**dedup_kwargs)
    if "safety" in data:
        section = dict(data["safety"])
        _check_keys("safety", section, {"opt_out", "nsfw"})
        safety_kwargs: dict = {}
        if "opt_out" in section:
            safety_kwargs["opt_out"] = _dataclass_from(
                "safety.opt_out", OptOutConfig, section["opt_out"]
            )
        if "nsfw" in section:
            safety_kwargs["nsfw"] = _dataclass_from("safety.nsfw", NsfwConfig, section["nsfw"])
        kwargs["safety"] = SafetyConfig(**safety_kwargs)
    if "stats" in data:
        kwargs["stats"] = _dataclass_from("stats", StatsConfig, data["stats"])
    return PipelineConfig(**kwargs)


def load_config(path: str | Path) -> PipelineConfig:
    """Parse a YAML config; unknown keys at any level are load errors."""
    raw = yaml.safe_load(Path(path).read_text("utf-8"))
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a mapping")
    try:
        return config_from_mapping(raw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
