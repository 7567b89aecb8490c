"""Release gate: the headline guarantees, each timed against its budget.

Every test here re-derives its expected values from scratch (hand-built
boundary probes, brute-force oracles, independent recounts) instead of
trusting the code under test. The terminal-summary hook in conftest prints
the collected one-line verdicts after the run.
"""

from __future__ import annotations

import json
import random
import statistics
import time
from collections import Counter
from dataclasses import replace
from urllib.parse import urlsplit

import mmdocs.pipeline as pipeline_mod
from mmdocs.config import config_from_mapping
from mmdocs.corpus_io import read_documents
from mmdocs.dedup import (
    dedup_documents_by_image_set,
    dedup_documents_by_url,
    dedup_paragraphs_by_domain,
    drop_overused_images,
    estimate_similarity,
    minhash_signature,
    signature_from_shingles,
)
from mmdocs.documents import ImageSegment, MultimodalDocument, TextSegment
from mmdocs.filters import (
    DOCUMENT_DEFAULTS,
    PARAGRAPH_DEFAULTS,
    TextFilterProfile,
    evaluate_profile,
)
from mmdocs.metrics import TextMetrics
from mmdocs.ngram_lm import InterpolatedNgramModel, perplexity
from mmdocs.pipeline import run_pipeline
from mmdocs.quality import HashedTokenQualityClassifier
from mmdocs.simplify import SENTINEL_TEXT, simplify_to_html
from mmdocs.tokens import tokenize

ACCEPTANCE_LINES: list[str] = []


class _Criterion:
    """Collects check failures inside a block and records one verdict line."""

    def __init__(self, name: str, budget_s: float | None):
        self.name = name
        self.budget_s = budget_s
        self.failures: list[str] = []

    def __call__(self, ok: bool, label: str) -> None:
        if not ok:
            self.failures.append(label)

    def __enter__(self) -> "_Criterion":
        self.started = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb) -> bool:
        elapsed = time.perf_counter() - self.started
        if exc_type is not None:
            self.failures.append(f"unhandled {exc_type.__name__}: {exc}")
        timing = f"{elapsed:.1f}s"
        if self.budget_s is not None:
            timing += f", budget {self.budget_s:g}s"
            if elapsed > self.budget_s:
                self.failures.append(f"runtime {elapsed:.1f}s over budget")
        verdict = "FAIL" if self.failures else "PASS"
        ACCEPTANCE_LINES.append(f"{verdict} {self.name} ({timing})")
        if self.failures and exc_type is None:
            raise AssertionError(f"{self.name}: " + "; ".join(self.failures))
        return False


def criterion(name: str, budget_s: float | None = None) -> _Criterion:
    return _Criterion(name, budget_s)


# --- cutoff table boundaries ---

# Metric field paired with the gate it feeds; the gate name doubles as the
# profile attribute and the rejection reason code.
GATES = [
    ("word_count", "min_words"),
    ("word_count", "max_words"),
    ("char_repetition_ratio", "max_char_repetition_ratio"),
    ("word_repetition_ratio", "max_word_repetition_ratio"),
    ("special_char_ratio", "max_special_char_ratio"),
    ("stop_word_ratio", "min_stop_word_ratio"),
    ("flagged_word_ratio", "max_flagged_word_ratio"),
    ("punctuation_ratio", "min_punctuation_ratio"),
    ("spam_word_ratio", "max_spam_word_ratio"),
    ("common_word_ratio", "min_common_word_ratio"),
    ("lang_id_score", "min_lang_id_score"),
    ("perplexity", "max_perplexity"),
]

# Passes every gate of both profiles with room to spare; each probe perturbs
# exactly one field so a rejection can only come from the gate under test.
CLEAN_METRICS = TextMetrics(
    word_count=50,
    char_repetition_ratio=0.0,
    word_repetition_ratio=0.0,
    special_char_ratio=0.05,
    stop_word_ratio=0.5,
    flagged_word_ratio=0.0,
    punctuation_ratio=0.05,
    spam_word_ratio=0.0,
    common_word_ratio=1.0,
    lang_id_score=0.99,
    perplexity=120.0,
)


def test_cutoff_table_boundaries():
    with criterion("cutoff table boundaries", budget_s=5.0) as check:
        # both cutoff tables pinned wholesale so any default drift fails loudly
        check(
            PARAGRAPH_DEFAULTS
            == TextFilterProfile(
                min_words=4,
                max_words=1000,
                max_char_repetition_ratio=0.1,
                max_word_repetition_ratio=0.1,
                max_special_char_ratio=0.3,
                min_stop_word_ratio=0.3,
                max_flagged_word_ratio=0.01,
                min_punctuation_ratio=0.001,
                max_spam_word_ratio=0.12,
                min_common_word_ratio=0.8,
                min_lang_id_score=0.8,
                max_perplexity=1500.0,
            ),
            "paragraph cutoff defaults drifted",
        )
        check(
            DOCUMENT_DEFAULTS
            == TextFilterProfile(
                min_words=10,
                max_words=2000,
                max_char_repetition_ratio=0.1,
                max_word_repetition_ratio=0.2,
                max_special_char_ratio=0.275,
                min_stop_word_ratio=0.35,
                max_flagged_word_ratio=0.01,
                min_punctuation_ratio=0.03,
                max_spam_word_ratio=0.12,
                min_common_word_ratio=0.9,
                min_lang_id_score=0.8,
                max_perplexity=1500.0,
            ),
            "document cutoff defaults drifted",
        )
        pairs = 0
        for profile_name, profile in (
            ("paragraph", PARAGRAPH_DEFAULTS),
            ("document", DOCUMENT_DEFAULTS),
        ):
            check(
                evaluate_profile(CLEAN_METRICS, profile).accepted,
                f"{profile_name}: clean baseline rejected",
            )
            for field_name, gate in GATES:
                cutoff = getattr(profile, gate)
                eps = 1 if isinstance(cutoff, int) else 1e-6
                at_cutoff = replace(CLEAN_METRICS, **{field_name: cutoff})
                check(
                    evaluate_profile(at_cutoff, profile).accepted,
                    f"{profile_name}.{gate}: value at the cutoff must pass",
                )
                bad = cutoff - eps if gate.startswith("min") else cutoff + eps
                verdict = evaluate_profile(
                    replace(CLEAN_METRICS, **{field_name: bad}), profile
                )
                codes = [r.code for r in verdict.reasons]
                check(
                    not verdict.accepted and codes == [gate],
                    f"{profile_name}.{gate}: expected lone {gate} rejection, got {codes}",
                )
                if verdict.reasons:
                    reason = verdict.reasons[0]
                    check(
                        reason.observed == bad and reason.cutoff == cutoff,
                        f"{profile_name}.{gate}: reason payload wrong",
                    )
                pairs += 1
        check(pairs == 24, f"expected 24 boundary pairs, exercised {pairs}")


# --- dom simplification reduction ---

UNWRAP_PAGE = "<html><body><p>First <b>bold</b> and <i>italic</i> words.</p></body></html>"
REMOVAL_PAGE = (
    "<html><head><script>var x=1;</script><style>p{}</style></head>"
    "<body><header>site chrome</header><p>kept body text</p>"
    "<table><tr><td>tabular</td></tr></table><footer>legal</footer></body></html>"
)
BANNED_SECTION_PAGE = '<div id="main-navbar"><p>links links links</p></div><p>real text</p>'
SENTINEL_PAGE = (
    '<html><body><div class="article"><h1>The Article</h1>'
    "<p>First <strong>bold</strong> paragraph.</p>"
    '<img src="/pic.jpg" alt="a pic">'
    "<p>Second paragraph.</p></div>"
    "\nEND_OF_DOCUMENT_TOKEN_TO_BE_REPLACED\n</body></html>"
)
SENTINEL_PAGE_EXPECTED = (
    '<body><div class="article"><h1>The Article</h1><p>First bold paragraph.</p>'
    '<img src="/pic.jpg" alt="a pic"/><p>Second paragraph.</p></div>'
    "\nEND_OF_DOCUMENT_TOKEN_TO_BE_REPLACED\n</body>"
)


def test_dom_simplification_reduction(realpage_paths):
    with criterion("dom simplification reduction", budget_s=10.0) as check:
        check(
            len(realpage_paths) >= 10,
            f"need at least 10 bundled pages, found {len(realpage_paths)}",
        )
        ratios = []
        for path in realpage_paths:
            raw = path.read_bytes()
            out = simplify_to_html(raw).encode("utf-8")
            ratio = len(out) / len(raw)
            ratios.append(ratio)
            check(ratio <= 0.2, f"{path.name}: shrank only to {ratio:.3f} of raw")
        mean_ratio = statistics.mean(ratios)
        check(mean_ratio <= 0.1, f"mean size ratio {mean_ratio:.3f} above 0.1")

        check(
            simplify_to_html(UNWRAP_PAGE) == "<p>First bold and italic words.</p>",
            "inline formatting tags not unwrapped into surrounding text",
        )
        check(
            simplify_to_html(REMOVAL_PAGE) == "<p>kept body text</p>",
            "head scripts, chrome, or tables leaked through removal",
        )
        check(
            simplify_to_html(BANNED_SECTION_PAGE) == "<p>real text</p>",
            "boilerplate-id section leaked its content",
        )
        rendered = simplify_to_html(SENTINEL_PAGE)
        check(rendered == SENTINEL_PAGE_EXPECTED, f"full-page golden drifted: {rendered!r}")
        check(
            SENTINEL_TEXT in rendered.splitlines(),
            "topic-break sentinel lost its own line",
        )


# --- minhash similarity fidelity ---


def _oracle_shingles(text: str) -> set[str]:
    tokens = text.split()
    return {" ".join(tokens[i : i + 5]) for i in range(len(tokens) - 4)}


def test_minhash_similarity_fidelity():
    with criterion("minhash similarity fidelity", budget_s=30.0) as check:
        rng = random.Random(1234)

        def draw_tokens() -> list[str]:
            return [f"t{rng.randrange(500)}" for _ in range(rng.randrange(40, 121))]

        errors = []
        for _ in range(200):
            base = draw_tokens()
            mutated = list(base)
            rate = rng.random() * 0.6
            for j in range(len(mutated)):
                if rng.random() < rate:
                    mutated[j] = f"t{rng.randrange(500)}"
            text_a, text_b = " ".join(base), " ".join(mutated)
            sa, sb = _oracle_shingles(text_a), _oracle_shingles(text_b)
            exact = len(sa & sb) / len(sa | sb)
            estimate = estimate_similarity(
                minhash_signature(text_a), minhash_signature(text_b)
            )
            errors.append(abs(estimate - exact))
        mean_error = statistics.mean(errors)
        check(mean_error <= 0.15, f"mean |estimate - exact| {mean_error:.3f} above 0.15")

        # Overlap constructed directly in shingle space: with s shared and e
        # private shingles per side, exact similarity is s / (s + 2e).
        for target, shared, extra in ((0.2, 10, 20), (0.5, 20, 10), (0.8, 40, 5)):
            estimates = []
            for pair in range(1000):
                tag = f"{target}:{pair}"
                common = {f"s{tag}:{i}" for i in range(shared)}
                sig_a = signature_from_shingles(
                    common | {f"a{tag}:{i}" for i in range(extra)}
                )
                sig_b = signature_from_shingles(
                    common | {f"b{tag}:{i}" for i in range(extra)}
                )
                estimates.append(estimate_similarity(sig_a, sig_b))
            bias = abs(statistics.mean(estimates) - target)
            check(bias <= 0.02, f"similarity {target}: estimator bias {bias:.4f} above 0.02")


# --- dedup brute-force parity ---

IMG_POOL = [f"https://img.example.net/{i}.jpg" for i in range(15)]
Shape = tuple[str, tuple[tuple[str, str], ...]]


def _shape(doc: MultimodalDocument) -> Shape:
    parts = tuple(
        ("text", seg.body) if isinstance(seg, TextSegment) else ("img", seg.src_url)
        for seg in doc.segments
    )
    return (doc.doc_id or doc.url, parts)


def _merge_parts(parts: list[tuple[str, str]]) -> list[tuple[str, str]]:
    merged: list[tuple[str, str]] = []
    for kind, value in parts:
        if kind == "text" and merged and merged[-1][0] == "text":
            merged[-1] = ("text", merged[-1][1] + "\n" + value)
        else:
            merged.append((kind, value))
    return merged


def _paras(body: str) -> list[str]:
    return [p.strip() for p in body.split("\n") if p.strip()]


def _host(url: str) -> str:
    host = (urlsplit(url).hostname or "").lower()
    return host[4:] if host.startswith("www.") else host


def _stamp(doc: MultimodalDocument) -> tuple[int, str]:
    return (doc.fetch_time, doc.doc_id or doc.url)


def _oracle_overused(docs, limit: int = 10) -> list[Shape]:
    counts = Counter(
        seg.src_url for d in docs for seg in d.segments if isinstance(seg, ImageSegment)
    )
    out = []
    for doc in docs:
        seen: set[str] = set()
        parts: list[tuple[str, str]] = []
        changed = False
        for seg in doc.segments:
            if isinstance(seg, TextSegment):
                parts.append(("text", seg.body))
                continue
            if seg.src_url in seen:
                changed = True
                continue
            seen.add(seg.src_url)
            if counts[seg.src_url] > limit:
                changed = True
                continue
            parts.append(("img", seg.src_url))
        if not any(kind == "img" for kind, _ in parts):
            continue
        if changed:
            parts = _merge_parts(parts)
        out.append((doc.doc_id or doc.url, tuple(parts)))
    return out


def _oracle_recency(docs, group_key) -> list[Shape]:
    best: dict = {}
    for doc in docs:
        key = group_key(doc)
        if key is None:
            continue
        if key not in best or _stamp(doc) > best[key]:
            best[key] = _stamp(doc)
    return [
        _shape(doc)
        for doc in docs
        if group_key(doc) is None or best[group_key(doc)] == _stamp(doc)
    ]


def _oracle_domain_paragraphs(docs, min_count: int = 3) -> list[Shape]:
    counts: Counter = Counter()
    for doc in docs:
        domain = _host(doc.url)
        for seg in doc.segments:
            if isinstance(seg, TextSegment):
                for para in _paras(seg.body):
                    if para != SENTINEL_TEXT:
                        counts[(domain, para)] += 1
    out = []
    for doc in docs:
        domain = _host(doc.url)
        parts: list[tuple[str, str]] = []
        changed = False
        had_text = False
        has_text = False
        for seg in doc.segments:
            if not isinstance(seg, TextSegment):
                parts.append(("img", seg.src_url))
                continue
            had_text = True
            paras = _paras(seg.body)
            survivors = [
                p for p in paras if p == SENTINEL_TEXT or counts[(domain, p)] < min_count
            ]
            if len(survivors) != len(paras):
                changed = True
            if survivors:
                parts.append(("text", "\n".join(survivors)))
                has_text = True
        if had_text and not has_text:
            continue
        if changed:
            parts = _merge_parts(parts)
        out.append((doc.doc_id or doc.url, tuple(parts)))
    return out


def _synth_corpus(rng: random.Random) -> list[MultimodalDocument]:
    """100 documents engineered to trip every dedup rule somewhere.

    Text bodies are built canonical (stripped single-line paragraphs joined
    with a lone newline) so unchanged documents serialize identically on
    both sides of the comparison.
    """
    domains = [f"site{d}.example.com" for d in range(6)]
    hot_paras = {
        dom: [f"shared banner on {dom} number {k}" for k in range(3)] for dom in domains
    }
    serial = 0

    def pick_paragraph(dom: str) -> str:
        nonlocal serial
        roll = rng.random()
        if roll < 0.30:
            return rng.choice(hot_paras[dom])
        if roll < 0.38:
            return SENTINEL_TEXT
        if roll < 0.43:
            # identical wording on every site: domain scoping must keep it
            # unless one site alone repeats it enough
            return "cross-site boilerplate notice"
        serial += 1
        return f"unique paragraph {serial} about topic {rng.randrange(50)}"

    def pick_image() -> str:
        nonlocal serial
        roll = rng.random()
        if roll < 0.45:
            return IMG_POOL[rng.randrange(3)]  # hot: pushed past the reuse limit
        if roll < 0.80:
            return IMG_POOL[rng.randrange(3, 15)]
        serial += 1
        return f"https://img.example.net/unique{serial}.jpg"

    docs = []
    for i in range(100):
        dom = rng.choice(domains)
        if rng.random() < 0.35:
            url = f"https://{dom}/contested{rng.randrange(4)}"
        else:
            url = f"https://{dom}/page{i}"
        fetch_time = rng.randrange(100, 104)

        roll = rng.random()
        has_text = roll < 0.90
        has_images = roll > 0.05

        if rng.random() < 0.12 and has_images:
            # forced identical image set across unrelated documents
            images = [IMG_POOL[1], IMG_POOL[4]]
            rng.shuffle(images)
            if rng.random() < 0.5:
                images.append(images[0])
            n_text = rng.randrange(0, 2) if has_text else 0
        else:
            images = []
            if has_images:
                for _ in range(rng.randrange(1, 5)):
                    if images and rng.random() < 0.2:
                        images.append(rng.choice(images))
                    else:
                        images.append(pick_image())
            n_text = rng.randrange(1, 4) if has_text else 0
            if not has_images:
                n_text = 1

        bodies = []
        for _ in range(n_text):
            paras = [pick_paragraph(dom) for _ in range(rng.randrange(1, 4))]
            bodies.append("\n".join(paras))

        # distribute images around the text segments; interior slots stay
        # non-empty so text segments are never adjacent
        slots: list[list[str]] = [[] for _ in range(len(bodies) + 1)]
        for u in images:
            slots[rng.randrange(len(slots))].append(u)
        for k in range(1, len(bodies)):
            if not slots[k]:
                slots[k].append(pick_image())

        segments: list = []
        for k, body in enumerate(bodies):
            segments.extend(
                ImageSegment(u, width=400, height=300, format="jpg") for u in slots[k]
            )
            segments.append(TextSegment(body))
        segments.extend(
            ImageSegment(u, width=400, height=300, format="jpg") for u in slots[-1]
        )

        docs.append(
            MultimodalDocument(
                url=url, fetch_time=fetch_time, segments=segments, doc_id=f"d{i:03d}"
            )
        )
    return docs


def test_dedup_brute_force_parity():
    with criterion("dedup brute-force parity", budget_s=30.0) as check:
        coverage: Counter = Counter()
        for trial in range(20):
            rng = random.Random(3000 + trial)
            docs = _synth_corpus(rng)

            url_counts = Counter(
                seg.src_url
                for d in docs
                for seg in d.segments
                if isinstance(seg, ImageSegment)
            )
            coverage["image url over limit"] += sum(
                1 for c in url_counts.values() if c > 10
            )
            for d in docs:
                urls = d.image_urls()
                if len(urls) != len(set(urls)):
                    coverage["in-doc duplicate image"] += 1
                if urls and all(url_counts[u] > 10 for u in urls):
                    coverage["doc with only overused images"] += 1
                if not urls:
                    coverage["image-free doc"] += 1
                if not d.text_segments():
                    coverage["text-free doc"] += 1
            stamps = Counter((d.url, d.fetch_time) for d in docs)
            coverage["url timestamp tie"] += sum(1 for c in stamps.values() if c > 1)

            got, _ = drop_overused_images(docs)
            want = _oracle_overused(docs)
            check(
                [_shape(d) for d in got] == want,
                f"trial {trial}: overused-image dedup diverged from brute force",
            )
            coverage["docs dropped by image dedup"] += len(docs) - len(want)

            got, _ = dedup_documents_by_url(docs)
            want = _oracle_recency(docs, lambda d: d.url)
            check(
                [_shape(d) for d in got] == want,
                f"trial {trial}: url dedup diverged from brute force",
            )
            coverage["docs dropped by url dedup"] += len(docs) - len(want)

            got, _ = dedup_documents_by_image_set(docs)
            want = _oracle_recency(
                docs, lambda d: frozenset(d.image_urls()) if d.image_urls() else None
            )
            check(
                [_shape(d) for d in got] == want,
                f"trial {trial}: image-set dedup diverged from brute force",
            )
            coverage["docs dropped by image-set dedup"] += len(docs) - len(want)

            got, _ = dedup_paragraphs_by_domain(docs)
            want = _oracle_domain_paragraphs(docs)
            check(
                [_shape(d) for d in got] == want,
                f"trial {trial}: domain paragraph dedup diverged from brute force",
            )
            coverage["docs dropped by paragraph dedup"] += len(docs) - len(want)
            para_counts: Counter = Counter()
            for d in docs:
                for seg in d.text_segments():
                    for para in _paras(seg.body):
                        if para != SENTINEL_TEXT:
                            para_counts[(_host(d.url), para)] += 1
            coverage["paragraph over threshold"] += sum(
                1 for c in para_counts.values() if c >= 3
            )
            coverage["sentinel survived dedup"] += sum(
                SENTINEL_TEXT in value
                for _, parts in want
                for kind, value in parts
                if kind == "text"
            )

        for event in (
            "image url over limit",
            "in-doc duplicate image",
            "doc with only overused images",
            "image-free doc",
            "text-free doc",
            "url timestamp tie",
            "docs dropped by image dedup",
            "docs dropped by url dedup",
            "docs dropped by image-set dedup",
            "docs dropped by paragraph dedup",
            "paragraph over threshold",
            "sentinel survived dedup",
        ):
            check(coverage[event] > 0, f"generator never exercised: {event}")


# --- quality classifier separation ---

_STOPS = ["the", "of", "and", "to", "in", "a", "is", "was", "for", "on", "with", "as", "by", "at", "from"]
_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def _curated_doc(rng: random.Random) -> str:
    words = []
    for _ in range(rng.randrange(30, 81)):
        if rng.random() < 0.55:
            words.append(rng.choice(_STOPS))
        else:
            words.append(f"topic{min(int(rng.paretovariate(1.2)), 299)}")
    return " ".join(words)


def _noise_doc(rng: random.Random) -> str:
    words = []
    for _ in range(rng.randrange(30, 81)):
        if rng.random() < 0.5:
            words.append("".join(rng.choice(_LETTERS) for _ in range(rng.randrange(3, 13))))
        else:
            words.append(str(rng.randrange(100000)))
    return " ".join(words)


def _held_out_accuracy(positives: list[str], negatives: list[str]) -> float:
    model = HashedTokenQualityClassifier(hash_dim=1 << 13, epochs=50)
    model.fit(positives[:400] + negatives[:400], [1] * 400 + [0] * 400)
    preds = model.predict(positives[400:] + negatives[400:])
    wants = [1] * 100 + [0] * 100
    return sum(int(p) == w for p, w in zip(preds, wants)) / 200


def test_quality_classifier_separation():
    with criterion("quality classifier separation", budget_s=60.0) as check:
        rng = random.Random(77)
        curated = [_curated_doc(rng) for _ in range(500)]
        noise = [_noise_doc(rng) for _ in range(500)]
        accuracy = _held_out_accuracy(curated, noise)
        check(accuracy >= 0.90, f"held-out accuracy {accuracy:.3f} below 0.90")

        rng = random.Random(78)
        side_a = [_curated_doc(rng) for _ in range(500)]
        side_b = [_curated_doc(rng) for _ in range(500)]
        twin_accuracy = _held_out_accuracy(side_a, side_b)
        check(
            abs(twin_accuracy - 0.5) <= 0.1,
            f"identical-class accuracy {twin_accuracy:.3f} strays from 0.5",
        )


# --- perplexity ordering ---


def test_perplexity_ordering(corpus_lines):
    with criterion("perplexity ordering", budget_s=30.0) as check:
        rng = random.Random(41)
        held_idx = set(rng.sample(range(len(corpus_lines)), 50))
        held = [line for i, line in enumerate(corpus_lines) if i in held_idx]
        train = [line for i, line in enumerate(corpus_lines) if i not in held_idx]
        check(len(held) == 50, f"expected 50 held-out sentences, got {len(held)}")

        lm = InterpolatedNgramModel(order=5, alpha=0.1).fit(train)
        wins = 0
        for sentence in held:
            scrambled = " ".join(sentence.split()[::-1])
            if perplexity(lm, sentence) < perplexity(lm, scrambled):
                wins += 1
        check(wins >= 45, f"forward text beat word-reversed in only {wins}/50")


# --- end-to-end determinism ---

# Results shared with the funnel test below; populated only on success.
_E2E: dict = {}


def _run(corpus_dir, out_dir):
    cfg = config_from_mapping(
        {
            "input": {"path": str(corpus_dir / "pages.warc.gz"), "format": "warc"},
            "output_dir": str(out_dir),
            "fetch": {"kind": "cache", "source": str(corpus_dir / "fetch_cache.jsonl")},
            "quality": {"hash_dim": 1 << 16, "epochs": 50},
        }
    )
    return run_pipeline(cfg)


def _report_fingerprint(reports) -> list:
    # wall time varies run to run; everything else must not
    return [(r.name, r.records_in, r.records_out, dict(r.reasons)) for r in reports]


def test_end_to_end_determinism(fixture_corpus_dir, golden_final_path, tmp_path, monkeypatch):
    with criterion("end-to-end determinism", budget_s=120.0) as check:
        _, reports_a = _run(fixture_corpus_dir, tmp_path / "a")
        _run(fixture_corpus_dir, tmp_path / "b")
        bytes_a = (tmp_path / "a" / "final.jsonl").read_bytes()
        check(
            bytes_a == (tmp_path / "b" / "final.jsonl").read_bytes(),
            "two identical runs produced different bytes",
        )
        check(
            bytes_a == golden_final_path.read_bytes(),
            "output drifted from the reviewed golden file",
        )

        def boom(docs):
            raise RuntimeError("simulated crash")

        crash_dir = tmp_path / "c"
        monkeypatch.setattr(pipeline_mod, "dedup_documents_by_url", boom)
        crashed = False
        try:
            _run(fixture_corpus_dir, crash_dir)
        except RuntimeError:
            crashed = True
        monkeypatch.undo()
        check(crashed, "simulated crash did not interrupt the run")

        _, reports_resumed = _run(fixture_corpus_dir, crash_dir)
        check(
            (crash_dir / "final.jsonl").read_bytes() == bytes_a,
            "crash-and-resume output differs from the uninterrupted run",
        )
        check(
            _report_fingerprint(reports_resumed) == _report_fingerprint(reports_a),
            "crash-and-resume stage reports differ from the uninterrupted run",
        )
        if not check.failures:
            _E2E["out_dir"] = tmp_path / "a"


# --- funnel sanity ---


def test_funnel_sanity():
    with criterion("funnel sanity") as check:
        check(bool(_E2E), "no finished end-to-end run to inspect")
        if not _E2E:
            return
        out_dir = _E2E["out_dir"]
        payload = json.loads((out_dir / "reports.json").read_text("utf-8"))
        check(len(payload) == 16, f"expected 16 stage reports, found {len(payload)}")
        for entry in payload:
            check(
                entry["records_out"] <= entry["records_in"],
                f"{entry['name']}: out {entry['records_out']} exceeds in {entry['records_in']}",
            )

        filter_docs = []
        for shard in sorted((out_dir / "stages" / "08_filter").glob("*.jsonl")):
            filter_docs.extend(read_documents(shard))
        check(len(filter_docs) > 0, "document filter wrote no output")
        for doc in filter_docs:
            label = doc.doc_id or doc.url
            images = len(doc.image_urls())
            words = len(tokenize(doc.full_text().replace(SENTINEL_TEXT, " ")))
            check(1 <= images <= 30, f"{label}: {images} images outside 1..30")
            check(words >= 10, f"{label}: only {words} words after filtering")
