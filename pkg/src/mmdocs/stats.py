"""Corpus statistics: funnel-independent counts, histograms, and rankings."""

from __future__ import annotations

import json
import statistics
from collections import Counter
from pathlib import Path
from typing import Iterable, Optional

from .documents import MultimodalDocument
from .ngram_lm import InterpolatedNgramModel
from .tokens import tokenize


def _histogram(values: list[int], bin_width: int) -> dict[str, int]:
    """Count values into [k*w, (k+1)*w) bins keyed by their lower edge."""
    counts: Counter = Counter()
    for value in values:
        counts[(value // bin_width) * bin_width] += 1
    return {str(edge): counts[edge] for edge in sorted(counts)}


def _cdf_points(image_counts: list[int]) -> list[dict[str, float]]:
    """Fraction of documents having at most k images, for each present k."""
    total = len(image_counts)
    if not total:
        return []
    counts = Counter(image_counts)
    cumulative = 0
    points = []
    for k in sorted(counts):
        cumulative += counts[k]
        points.append({"images": k, "cumulative_fraction": cumulative / total})
    return points


def stats_report(
    docs: Iterable[MultimodalDocument],
    top_domains: int = 20,
    token_bin_width: int = 50,
    lm: Optional[InterpolatedNgramModel] = None,
) -> dict:
    """Corpus-level statistics record (also the analysis export format).

    With an LM supplied, each per-document entry carries its perplexity.
    """
    per_doc: list[dict] = []
    url_counts: Counter = Counter()
    domain_counts: Counter = Counter()
    token_values: list[int] = []
    image_values: list[int] = []

    for doc in docs:
        text = doc.full_text()
        tokens = len(tokenize(text)) if text else 0
        urls = doc.image_urls()
        url_counts.update(urls)
        domain_counts[doc.domain] += 1
        token_values.append(tokens)
        image_values.append(len(urls))
        entry = {
            "doc_id": doc.doc_id or doc.url,
            "domain": doc.domain,
            "tokens": tokens,
            "images": len(urls),
        }
        if lm is not None and text.strip():
            entry["perplexity"] = lm.perplexity(text)
        per_doc.append(entry)

    doc_count = len(per_doc)
    image_count = sum(image_values)
    unique_images = len(url_counts)
    joint: Counter = Counter()
    for tokens, images in zip(token_values, image_values):
        joint[((tokens // token_bin_width) * token_bin_width, images)] += 1

    report = {
        "doc_count": doc_count,
        "image_count": image_count,
        "unique_image_count": unique_images,
        "unique_image_ratio": unique_images / image_count if image_count else 0.0,
        "token_count": sum(token_values),
        "median_tokens_per_doc": statistics.median(token_values) if token_values else 0,
        "median_images_per_doc": statistics.median(image_values) if image_values else 0,
        "token_histogram": _histogram(token_values, token_bin_width),
        "token_bin_width": token_bin_width,
        "image_histogram": _histogram(image_values, 1),
        "joint_histogram": [
            {"tokens_bin": t, "images": i, "count": joint[(t, i)]}
            for t, i in sorted(joint)
        ],
        "image_cdf": _cdf_points(image_values),
        "top_domains": [
            {"domain": domain, "docs": count}
            for domain, count in sorted(
                domain_counts.items(), key=lambda kv: (-kv[1], kv[0])
            )[:top_domains]
        ],
        "per_doc": per_doc,
    }
    if lm is not None:
        scored = [entry["perplexity"] for entry in per_doc if "perplexity" in entry]
        report["perplexity_median"] = statistics.median(scored) if scored else 0.0
    return report


def render_text_report(report: dict) -> str:
    """Short human-readable summary of a stats record."""
    lines = [
        f"documents:        {report['doc_count']}",
        f"images:           {report['image_count']}",
        f"unique images:    {report['unique_image_count']} "
        f"({report['unique_image_ratio']:.1%})",
        f"tokens:           {report['token_count']}",
        f"median tokens:    {report['median_tokens_per_doc']}",
        f"median images:    {report['median_images_per_doc']}",
    ]
    if "perplexity_median" in report:
        lines.append(f"median perplexity: {report['perplexity_median']:.1f}")
    lines.append("top domains:")
    for entry in report["top_domains"][:10]:
        lines.append(f"  {entry['docs']:6d}  {entry['domain']}")
    return "\n".join(lines) + "\n"


def save_report(report: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", "utf-8")
