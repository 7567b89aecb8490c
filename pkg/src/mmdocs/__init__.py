"""Multimodal web document corpus construction.

Turns archived web pages into interleaved image-text documents: DOM
simplification, extraction, trainable language and quality gates, cutoff
filtering, corpus-wide deduplication and safety screens, orchestrated as a
resumable checkpointed pipeline.
"""

from .config import ConfigError, PipelineConfig, config_from_mapping, load_config
from .dedup import CorpusCounters, dedup_minhash, minhash_signature, repetition_stats
from .documents import (
    ImageSegment,
    MultimodalDocument,
    TextSegment,
    export_parallel_arrays,
    import_parallel_arrays,
)
from .extract import DocumentError, extract_document, harvest_image_urls
from .filters import (
    DocumentFilterOutcome,
    FilterVerdict,
    ImageFilterParams,
    TextFilterParams,
    filter_document,
    filter_paragraph,
)
from .langid import CharNgramLanguageIdentifier, detect_language
from .metrics import TextMetrics, text_metrics
from .ngram_lm import InterpolatedNgramModel, perplexity, train_ngram_lm
from .pipeline import PipelineError, StageReport, run_pipeline
from .quality import HashedTokenQualityClassifier, score_quality
from .simplify import SENTINEL_TEXT, HtmlSimplifier, SimplifyConfig, simplify_to_html
from .stats import stats_report
from .wordlists import WordLists

__version__ = "0.1.0"

__all__ = [
    "CharNgramLanguageIdentifier",
    "ConfigError",
    "CorpusCounters",
    "DocumentError",
    "DocumentFilterOutcome",
    "FilterVerdict",
    "HashedTokenQualityClassifier",
    "HtmlSimplifier",
    "ImageFilterParams",
    "ImageSegment",
    "InterpolatedNgramModel",
    "MultimodalDocument",
    "PipelineConfig",
    "PipelineError",
    "SENTINEL_TEXT",
    "SimplifyConfig",
    "StageReport",
    "TextFilterParams",
    "TextMetrics",
    "TextSegment",
    "WordLists",
    "config_from_mapping",
    "dedup_minhash",
    "detect_language",
    "export_parallel_arrays",
    "extract_document",
    "filter_document",
    "filter_paragraph",
    "harvest_image_urls",
    "import_parallel_arrays",
    "load_config",
    "minhash_signature",
    "perplexity",
    "repetition_stats",
    "run_pipeline",
    "score_quality",
    "simplify_to_html",
    "stats_report",
    "text_metrics",
    "train_ngram_lm",
    "__version__",
]
