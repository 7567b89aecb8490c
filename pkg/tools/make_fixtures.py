"""Generate the deterministic fixture corpus used by the end-to-end tests.

Fifty pages across six invented sites, written as WARC (plain and
member-gzip, both salted with records the reader must skip), an HTML
directory with its metadata sidecar, and pages JSONL, plus the image fetch
cache and safety sidecars. Article prose is sampled from the bundled
reference corpus via a cycling deck so every line lands at least twice,
keeping corpus-frequency gates meaningful at this scale.

Run from the repository root:

    python3 tools/make_fixtures.py            # regenerate corpus inputs
    python3 tools/make_fixtures.py --freeze-golden   # also rerun + freeze golden output

The golden file is only rewritten with --freeze-golden; review the printed
funnel before committing a new one.
"""

from __future__ import annotations

import argparse
import gzip
import json
import random
import shutil
import sys
import tempfile
from pathlib import Path

from mmdocs.config import config_from_mapping
from mmdocs.corpus_io import (
    PageRecord,
    _record_bytes,
    write_html_dir,
    write_pages_jsonl,
)
from mmdocs.pipeline import bundled_corpus_lines, run_pipeline

SEED = 7
BASE_TIME = 1690000000  # 2023-07-21T14:26:40Z
FIXTURE_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

PROMO_IMAGE = "https://cdn.brightfield.net/promo/summer_fair.jpg"
BOILERPLATE_LINE_INDEX = 7

GOOD_SIZES = [(640, 480, "jpg"), (800, 600, "jpg"), (1024, 768, "png"), (512, 512, "webp"), (900, 620, "jpg")]

FRENCH = [
    "Le vieux moulin se dresse au bord de la rivière depuis trois siècles, et ses ailes tournent encore quand le vent du nord souffle sur la vallée.",
    "Les artisans du village préparent chaque automne une grande foire, où l'on vend du miel, des étoffes et des paniers tressés à la main.",
    "La bibliothèque municipale conserve des cartes anciennes de la région, dessinées par des arpenteurs qui suivaient le cours des ruisseaux.",
    "Au printemps, les vergers en fleurs attirent les visiteurs des villes voisines, qui repartent avec des confitures et du cidre doux.",
]
GERMAN = [
    "Die alte Brücke über den Fluss wurde im siebzehnten Jahrhundert aus Sandstein erbaut und trägt noch heute den Verkehr der kleinen Stadt.",
    "Im Herbst sammeln die Bauern der Umgebung Äpfel und Birnen, die auf dem Wochenmarkt neben frischem Brot und Honig verkauft werden.",
    "Das Heimatmuseum zeigt Werkzeuge der früheren Weber, deren Stoffe einst bis in die Hafenstädte des Nordens gehandelt wurden.",
    "Der Wanderweg führt durch einen dichten Buchenwald, vorbei an einer Quelle, deren Wasser schon die ersten Siedler schätzten.",
]
SPANISH = [
    "El mercado de la plaza mayor abre sus puertas cada jueves por la mañana, cuando los agricultores llegan con frutas y verduras de los valles cercanos.",
    "La torre del reloj fue restaurada hace veinte años, y desde su mirador se puede ver el río que cruza despacio la ciudad vieja.",
    "Los pescadores del puerto guardan sus redes en casetas de madera pintadas de azul, una costumbre que se mantiene desde hace generaciones.",
    "Durante las fiestas de verano, las calles se llenan de músicos y de puestos de dulces, y las familias pasean hasta bien entrada la noche.",
]


class LineDeck:
    """Deals reference-corpus lines so coverage stays near uniform."""

    def __init__(self, lines: list[str], rng: random.Random):
        self.lines = lines
        self.rng = rng
        self.deck: list[int] = []

    def draw(self, count: int, exclude: set[int]) -> list[int]:
        out: list[int] = []
        while len(out) < count:
            if not self.deck:
                self.deck = list(range(len(self.lines)))
                self.rng.shuffle(self.deck)
            idx = self.deck.pop()
            if idx in exclude or idx in out:
                continue
            out.append(idx)
        return out


class Corpus:
    def __init__(self):
        self.pages: list[PageRecord] = []
        self.cache: list[dict] = []
        self._size_cursor = 0
        self._cached_urls: set[str] = set()

    def add_image(self, url: str, status: str = "ok", size: tuple[int, int, str] | None = None) -> str:
        if url in self._cached_urls:
            return url
        self._cached_urls.add(url)
        if status != "ok":
            self.cache.append({"url": url, "status": status})
            return url
        if size is None:
            size = GOOD_SIZES[self._size_cursor % len(GOOD_SIZES)]
            self._size_cursor += 1
        width, height, fmt = size
        self.cache.append({"url": url, "status": "ok", "width": width, "height": height, "format": fmt})
        return url

    def add_page(self, url: str, minutes: int, html: str) -> None:
        self.pages.append(
            PageRecord(
                url=url,
                fetch_time=BASE_TIME + minutes * 60,
                raw_html=html.encode("utf-8"),
                content_type="text/html",
            )
        )


def chrome(title: str, body: str, flavor: int) -> str:
    """Wrap article markup in site chrome that simplification strips."""
    navs = [
        '<div id="site-nav"><a href="/">Home</a> <a href="/archive">Archive</a> <a href="/about">About</a></div>',
        '<div id="top-menu"><span>Home</span><span>Stories</span><span>Contact</span></div>',
        '<div id="main-header"><a href="/">Front page</a></div>',
    ]
    footers = [
        '<div class="footer">Copyright 2023. All rights reserved.</div>',
        '<div class="site-info">Powered by a very ordinary content system.</div>',
        '<div id="footer-links"><a href="/terms">Terms</a> <a href="/privacy">Privacy</a></div>',
    ]
    scripts = [
        "<script>var q=document.querySelectorAll('a');console.log(q.length);</script>",
        "<script type=\"text/javascript\">function track(){return 42;}</script>",
    ]
    return (
        "<!DOCTYPE html>\n<html><head>"
        f"<title>{title}</title>"
        '<meta charset="utf-8">'
        "<style>body{font-family:serif;margin:0} p{line-height:1.5}</style>"
        f"{scripts[flavor % 2]}"
        "</head><body>"
        f"{navs[flavor % 3]}"
        "<!-- rendered by staticgen 3.2 -->"
        f"{body}"
        f"{footers[flavor % 3]}"
        "</body></html>"
    )


def paragraphs_html(lines: list[str], groups: list[list[int]]) -> str:
    return "".join("<p>" + " ".join(lines[i] for i in group) + "</p>" for group in groups)


def build_corpus() -> Corpus:
    rng = random.Random(SEED)
    lines = bundled_corpus_lines()
    deck = LineDeck(lines, rng)
    corpus = Corpus()
    minute = 0

    def next_minute() -> int:
        nonlocal minute
        minute += 37
        return minute

    def grouped(idxs: list[int], sizes: list[int]) -> list[list[int]]:
        out, at = [], 0
        for size in sizes:
            out.append(idxs[at : at + size])
            at += size
        return out

    def article(
        domain: str,
        slug: str,
        title: str,
        heading: str,
        n_groups: list[int],
        images: list[str],
        flavor: int,
        extra_html: str = "",
        caption: str | None = None,
        exclude: set[int] | None = None,
    ) -> tuple[str, list[int]]:
        idxs = deck.draw(sum(n_groups), exclude or set())
        groups = grouped(idxs, n_groups)
        img_html = ""
        for k, img_url in enumerate(images):
            alt = f"illustration {k + 1}"
            if k == 0 and caption:
                img_html = f'<figure><img src="{img_url}" alt="{alt}"><figcaption>{caption}</figcaption></figure>'
            else:
                img_html += f'<img src="{img_url}" alt="{alt}">'
        paras = paragraphs_html(lines, groups)
        # put the first image after the first paragraph, the rest at the end
        first_break = paras.index("</p>") + len("</p>") if groups else 0
        body = (
            f"<h1>{heading}</h1>"
            + paras[:first_break]
            + img_html
            + paras[first_break:]
            + extra_html
        )
        url = f"https://{domain}/{slug}"
        corpus.add_page(url, next_minute(), chrome(title, body, flavor))
        return url, idxs

    # --- meridianpost.org: news articles, two of them near-duplicated ---
    news_slugs = [
        ("articles/harvest-market", "Harvest Market Returns", "The harvest market returns to the square"),
        ("articles/river-survey", "River Survey Complete", "Surveyors finish the river channel study"),
        ("articles/bridge-repairs", "Bridge Repairs Scheduled", "Stone bridge repairs begin next month"),
        ("articles/library-archive", "Library Opens Archive", "The town library opens its map archive"),
        ("articles/orchard-season", "Orchard Season Opens", "Orchards open for the picking season"),
        ("articles/winter-fair", "Winter Fair Planned", "Committee announces the winter fair"),
        ("articles/mill-restoration", "Mill Restoration Funded", "Restoration of the old mill is funded"),
        ("articles/choir-concert", "Choir Concert Review", "The valley choir gives a spring concert"),
        ("articles/ferry-timetable", "Ferry Timetable Change", "The seasonal ferry changes its timetable"),
        ("articles/school-garden", "School Garden Opens", "Pupils open the new school garden"),
    ]
    promo_carriers = 0
    near_dup_source_html = None
    near_dup_url = None
    for n, (slug, title, heading) in enumerate(news_slugs):
        images = [corpus.add_image(f"https://media.meridianpost.org/{slug.split('/')[1]}_{k}.jpg") for k in range(1 + n % 2)]
        if n < 5:
            images.append(corpus.add_image(PROMO_IMAGE))
            promo_carriers += 1
        url, _ = article(
            "news.meridianpost.org", slug, title, heading,
            [3, 2, 3] if n % 2 else [2, 3, 2, 2],
            images, flavor=n,
            caption="A view from the market square" if n == 0 else None,
        )
        if n == 2:
            near_dup_url = url
            near_dup_source_html = corpus.pages[-1].raw_html.decode("utf-8")

    # near duplicate of the bridge article: same prose, a clause appended
    assert near_dup_source_html is not None
    dup_html = near_dup_source_html.replace(
        "</body>", "<p>The council will post weekly progress updates.</p></body>", 1
    )
    corpus.add_page("https://news.meridianpost.org/articles/bridge-repairs-amp", next_minute(), dup_html)

    # --- fernwood.io: blog posts, one with a spam tail paragraph ---
    blog_slugs = [
        ("posts/kitchen-garden", "Notes from the kitchen garden"),
        ("posts/field-walk", "A long walk across the east fields"),
        ("posts/pantry-shelf", "Restocking the pantry shelf"),
        ("posts/rain-week", "A week of rain and what it changed"),
        ("posts/tool-bench", "Clearing out the tool bench"),
        ("posts/late-frost", "The late frost and the seedlings"),
        ("posts/seed-swap", "Notes from the village seed swap"),
        ("posts/quiet-sunday", "A quiet Sunday by the stove"),
    ]
    for n, (slug, heading) in enumerate(blog_slugs):
        images = [corpus.add_image(f"https://fernwood.io/media/{slug.split('/')[1]}_{k}.jpg") for k in range(1 + (n + 1) % 2)]
        if n < 4:
            images.append(corpus.add_image(PROMO_IMAGE))
            promo_carriers += 1
        extra = ""
        if n == 1:
            extra = "<p>Share this post, subscribe to the newsletter, and comment below to follow along.</p>"
        article(
            "blog.fernwood.io", slug, heading.title(), heading,
            [2, 2, 3] if n % 2 else [3, 3, 2],
            images, flavor=n + 1, extra_html=extra,
        )

    # second near duplicate: the last blog post mirrored with a closing line
    mirror_html = corpus.pages[-1].raw_html.decode("utf-8").replace(
        "</body>", "<p>Thanks for reading along this winter.</p></body>", 1
    )
    corpus.add_page("https://blog.fernwood.io/posts/quiet-sunday-mirror", next_minute(), mirror_html)

    # --- atlasbotanica.net: monographs with a shared boilerplate paragraph
    # and a read-more node the simplifier swaps for the topic-break sentinel ---
    boiler = f"<p>{bundled_corpus_lines()[BOILERPLATE_LINE_INDEX]}</p>"
    botany_slugs = [
        ("plants/meadow-sage", "Meadow Sage", "Meadow sage through the seasons"),
        ("plants/black-alder", "Black Alder", "The black alder beside slow water"),
        ("plants/wood-anemone", "Wood Anemone", "Wood anemone on the forest floor"),
        ("plants/dog-rose", "Dog Rose", "The dog rose in the old hedgerows"),
        ("plants/wild-marjoram", "Wild Marjoram", "Wild marjoram on the chalk slope"),
        ("plants/water-mint", "Water Mint", "Water mint along the mill stream"),
    ]
    for n, (slug, title, heading) in enumerate(botany_slugs):
        images = [corpus.add_image(f"https://img.atlasbotanica.net/{slug.split('/')[1]}_plate.jpg")]
        if n < 2:
            images.append(corpus.add_image(PROMO_IMAGE))
            promo_carriers += 1
        more = '<div class="more-link"><a href="/full">Read the full monograph</a></div>'
        article(
            "garden.atlasbotanica.net", slug, title, heading,
            [3, 2, 2],
            images, flavor=n,
            extra_html=more + boiler,
            exclude={BOILERPLATE_LINE_INDEX},
        )

    # --- oakandember.com: recipes; two share an identical image set ---
    recipe_slugs = [
        ("recipes/hearth-loaf", "Hearth Loaf", "A plain hearth loaf for cold mornings"),
        ("recipes/hearth-loaf-variant", "Hearth Loaf, Slower", "The same loaf on a slower schedule"),
        ("recipes/barley-soup", "Barley Soup", "Barley soup from the winter pantry"),
        ("recipes/plum-preserve", "Plum Preserve", "Putting up the late plums"),
        ("recipes/seed-crackers", "Seed Crackers", "Seed crackers from the odds and ends"),
        ("recipes/oat-griddle", "Oat Griddle Cakes", "Griddle cakes for a slow morning"),
    ]
    shared_set = [
        corpus.add_image("https://cdn.oakandember.com/plates/hearth_loaf_rise.jpg"),
        corpus.add_image("https://cdn.oakandember.com/plates/hearth_loaf_crumb.jpg"),
    ]
    for n, (slug, title, heading) in enumerate(recipe_slugs):
        if n < 2:
            images = list(shared_set)
        else:
            images = [corpus.add_image(f"https://cdn.oakandember.com/plates/{slug.split('/')[1]}_{k}.jpg") for k in range(2)]
            if n == 2:
                images.append(corpus.add_image(PROMO_IMAGE))
                promo_carriers += 1
        article(
            "recipes.oakandember.com", slug, title, heading,
            [2, 3, 2],
            images, flavor=n + 2,
        )

    # --- lanternroute.com: travel guides; a recrawled URL, some image trouble ---
    guide_specs = [
        ("guides/coastal-walk", "The Coastal Walk", "Walking the coast path in a day"),
        ("guides/hill-villages", "Hill Villages", "Five villages above the valley road"),
        ("guides/market-towns", "Market Towns", "Market towns along the old route"),
        ("guides/ferry-crossing", "The Ferry Crossing", "Notes on the seasonal ferry"),
        ("guides/forest-inns", "Forest Inns", "Inns on the forest road, reviewed"),
        ("guides/quarry-path", "The Quarry Path", "An afternoon on the quarry path"),
    ]
    for n, (slug, title, heading) in enumerate(guide_specs):
        base = f"https://img.lanternroute.com/{slug.split('/')[1]}"
        images = [corpus.add_image(f"{base}_main.jpg")]
        if n == 0:
            # substring rule fodder: removed at the safety stage, not before
            images.append(corpus.add_image(f"{base}_beach_xxx_sunset.jpg"))
        if n == 1:
            images.append(corpus.add_image(f"{base}_thumb.jpg", size=(90, 90, "jpg")))  # too small
        if n == 2:
            images.append(corpus.add_image(f"{base}_panorama.jpg", size=(1650, 520, "jpg")))  # aspect
            images.append(corpus.add_image(PROMO_IMAGE))
            promo_carriers += 1
        if n == 3:
            images.append(corpus.add_image(f"{base}_animated.gif", size=(480, 360, "gif")))  # format
        if n == 4:
            images.append(corpus.add_image(f"{base}_broken.jpg", status="failed"))
        if n == 5:
            images.append(f"https://img.lanternroute.com/{slug.split('/')[1]}_missing.jpg")  # absent from cache
            images.append(corpus.add_image(PROMO_IMAGE))
            promo_carriers += 1
        article(
            "travel.lanternroute.com", slug, title, heading,
            [3, 2, 3] if n % 2 else [2, 2, 3],
            images, flavor=n,
        )

    # recrawl of the first guide a day later with rewritten prose
    recrawl_images = [corpus.add_image("https://img.lanternroute.com/coastal-walk_revised.jpg")]
    idxs = deck.draw(8, set())
    groups = [idxs[:3], idxs[3:6], idxs[6:]]
    body = (
        "<h1>Walking the coast path in a day</h1>"
        + paragraphs_html(lines, groups[:1])
        + f'<img src="{recrawl_images[0]}" alt="the revised route">'
        + paragraphs_html(lines, groups[1:])
    )
    corpus.pages.append(
        PageRecord(
            url="https://travel.lanternroute.com/guides/coastal-walk",
            fetch_time=BASE_TIME + 86400,
            raw_html=chrome("The Coastal Walk", body, 3).encode("utf-8"),
            content_type="text/html",
        )
    )

    # --- cobaltworks.net: the reject gallery ---
    def reject_page(slug: str, title: str, body: str, flavor: int = 0) -> None:
        corpus.add_page(f"https://forum.cobaltworks.net/{slug}", next_minute(), chrome(title, body, flavor))

    reject_page(
        "threads/moulin",
        "Le moulin de la vallée",
        "<h1>Le moulin de la vallée</h1>" + "".join(f"<p>{s}</p>" for s in FRENCH),
        flavor=0,
    )
    reject_page(
        "threads/bruecke",
        "Die alte Brücke",
        "<h1>Die alte Brücke</h1>" + "".join(f"<p>{s}</p>" for s in GERMAN),
        flavor=1,
    )
    reject_page(
        "threads/mercado",
        "El mercado de la plaza",
        "<h1>El mercado de la plaza</h1>" + "".join(f"<p>{s}</p>" for s in SPANISH),
        flavor=2,
    )

    # repetition gate: a page of alternating duplicate lines
    rep_a = lines[11]
    rep_b = lines[23]
    reject_page(
        "threads/echo",
        "Echo thread",
        "<h1>Echo thread</h1>" + "".join(f"<p>{rep_a if i % 2 == 0 else rep_b}</p>" for i in range(16)),
        flavor=0,
    )
    # repetition gate: one chanted clause
    chant = "the drum beats low over the water and " * 18
    reject_page("threads/chant", "Chant thread", f"<h1>Chant thread</h1><p>{chant.strip()}.</p>", flavor=1)

    # quality gate: token soup drawn from the reference vocabulary
    vocab = sorted({tok for line in lines for tok in line.lower().split()})
    soup_rng = random.Random(SEED + 1)

    def soup(n_tokens: int) -> str:
        letters = "abcdefghijklmnopqrstuvwxyz"
        toks = []
        for _ in range(n_tokens):
            if soup_rng.random() < 0.25:
                toks.append("".join(soup_rng.choice(letters) for _ in range(soup_rng.randint(3, 11))))
            else:
                toks.append(soup_rng.choice(vocab))
        return " ".join(toks)

    reject_page("threads/driftnet", "driftnet dump", f"<h1>driftnet dump</h1><p>{soup(160)}</p><p>{soup(140)}</p>", flavor=2)
    reject_page("threads/scrapheap", "scrapheap paste", f"<h1>scrapheap paste</h1><p>{soup(180)}</p><p>{soup(120)}</p>", flavor=0)

    # filter gate: every image is chrome (banned substrings), text is fine
    logo_imgs = [
        corpus.add_image("https://forum.cobaltworks.net/static/site_logo.png"),
        corpus.add_image("https://forum.cobaltworks.net/static/feed_icon.png"),
    ]
    idxs = deck.draw(6, set())
    reject_page(
        "threads/badges",
        "About our badges",
        "<h1>About our badges</h1>"
        + "".join(f'<img src="{u}" alt="badge">' for u in logo_imgs)
        + paragraphs_html(lines, [idxs[:3], idxs[3:]]),
        flavor=1,
    )

    # fetch gate: images all fail to resolve, document ends image-free
    dead_imgs = [
        corpus.add_image("https://forum.cobaltworks.net/uploads/attachment_19.jpg", status="failed"),
        corpus.add_image("https://forum.cobaltworks.net/uploads/attachment_20.jpg", status="failed"),
    ]
    idxs = deck.draw(5, set())
    reject_page(
        "threads/attachments",
        "Old attachments",
        "<h1>Old attachments</h1>"
        + paragraphs_html(lines, [idxs[:3], idxs[3:]])
        + "".join(f'<img src="{u}" alt="attachment">' for u in dead_imgs),
        flavor=2,
    )

    # document gate: too little text once the heading dies
    tiny_img = corpus.add_image("https://forum.cobaltworks.net/uploads/attachment_21.jpg")
    reject_page(
        "threads/bump",
        "bump",
        f'<h1>Weekly bump thread</h1><p>Bumping this again.</p><img src="{tiny_img}" alt="bump">',
        flavor=0,
    )

    # flagged-vocabulary page: both paragraphs trip the flagged-word gate,
    # and the emptied document then fails its word floor
    reject_page(
        "threads/linkdump",
        "late night linkdump",
        "<h1>late night linkdump</h1>"
        "<p>Tonight the site opens its new porn gallery, and every sex clip in the archive is free for the weekend.</p>"
        "<p>Members get the full xxx catalogue, a nude photo set from the spring shoot, and an adult chat room that never closes.</p>",
        flavor=1,
    )

    assert promo_carriers >= 11, promo_carriers
    assert len(corpus.pages) == 50, len(corpus.pages)
    return corpus


def _metadata_record() -> bytes:
    body = b"hopsPerFetch: 2\r\nfetchDurationMs: 312\r\n"
    head = (
        "WARC/1.0\r\n"
        "WARC-Type: metadata\r\n"
        "WARC-Record-ID: <urn:uuid:0000feedbeef0000>\r\n"
        "WARC-Date: 2023-07-21T14:00:00Z\r\n"
        "WARC-Target-URI: https://news.meridianpost.org/articles/harvest-market\r\n"
        "Content-Type: application/warc-fields\r\n"
        f"Content-Length: {len(body)}\r\n"
        "\r\n"
    ).encode("ascii")
    return head + body + b"\r\n\r\n"


def _pdf_record() -> bytes:
    payload = b"%PDF-1.4 fake report body"
    return _record_bytes(
        PageRecord(
            url="https://news.meridianpost.org/reports/annual.pdf",
            fetch_time=BASE_TIME + 55,
            raw_html=payload,
            content_type="application/pdf",
        )
    )


_MALFORMED = b"WARC/1.0\r\nthis line has no colon\r\n\r\njunk body\r\n\r\n"


def write_warcs(corpus: Corpus, out_dir: Path) -> None:
    """Write plain and member-gzip WARCs, salted with skippable records."""
    pieces: list[bytes] = []
    for n, page in enumerate(corpus.pages):
        if n == 3:
            pieces.append(_metadata_record())
        if n == 5:
            pieces.append(_pdf_record())
        if n == 9:
            pieces.append(_MALFORMED)
        pieces.append(_record_bytes(page))
    (out_dir / "pages.warc").write_bytes(b"".join(pieces))
    with open(out_dir / "pages.warc.gz", "wb") as handle:
        for piece in pieces:
            handle.write(gzip.compress(piece, mtime=0))


def write_all(corpus: Corpus) -> None:
    corpus_dir = FIXTURE_DIR / "corpus"
    if corpus_dir.exists():
        shutil.rmtree(corpus_dir)
    corpus_dir.mkdir(parents=True)
    write_warcs(corpus, corpus_dir)
    write_html_dir(corpus.pages, corpus_dir / "html_dir")
    write_pages_jsonl(corpus.pages, corpus_dir / "pages.jsonl")
    with open(corpus_dir / "fetch_cache.jsonl", "w", encoding="utf-8") as handle:
        for entry in corpus.cache:
            handle.write(json.dumps(entry, sort_keys=True) + "\n")

    # safety sidecars for the unit tests; the golden run leaves safety open
    (corpus_dir / "optout_list.txt").write_text(
        "https://img.atlasbotanica.net/meadow-sage_plate.jpg\n"
        "https://cdn.oakandember.com/plates/barley-soup_0.jpg\n",
        encoding="utf-8",
    )
    with open(corpus_dir / "nsfw_scores.jsonl", "w", encoding="utf-8") as handle:
        handle.write(json.dumps({"url": "https://img.lanternroute.com/coastal-walk_main.jpg", "score": 0.97}) + "\n")
        handle.write(json.dumps({"url": PROMO_IMAGE, "score": 0.02}) + "\n")


# --- standalone page fixtures with production-grade chrome weight ---
#
# The funnel corpus above keeps its markup lean so stage routing stays legible.
# These pages instead carry the styling, script, and navigation mass of real
# crawled pages, for the size-reduction checks on the simplifier.

REALPAGE_SITES = [
    ("harborledger.com", "The Harbor Ledger", "#1a5276", "hl"),
    ("wrenandbarrow.net", "Wren & Barrow", "#7d6608", "wb"),
    ("stonecroft-kitchen.org", "Stonecroft Kitchen", "#922b21", "sk"),
    ("fieldnotesatlas.com", "Field Notes Atlas", "#1e8449", "fn"),
]

_NAV_SECTIONS = [
    ("News", ["Local", "Region", "Business", "Weather", "Traffic", "Schools", "Obituaries", "Archive"]),
    ("Living", ["Food", "Homes", "Gardens", "Health", "Family", "Faith", "Seniors", "Pets"]),
    ("Arts", ["Music", "Theater", "Books", "Film", "Galleries", "Events", "History", "Crafts"]),
    ("Sports", ["Prep", "College", "Outdoors", "Fishing", "Running", "Cycling", "Scores", "Photos"]),
    ("More", ["Podcasts", "Newsletters", "Contests", "Classifieds", "Jobs", "Autos", "Homes", "Deals"]),
]

_FOOTER_COLUMNS = [
    ("Company", ["About us", "Careers", "Staff directory", "Advertise", "Press kit", "Contact", "Support", "FAQ"]),
    ("Policies", ["Terms of use", "Privacy policy", "Cookie policy", "Accessibility", "Ethics code", "Corrections", "Licensing", "Sitemap"]),
    ("Network", ["Harbor Radio", "Valley Weekly", "Coast Magazine", "Market Watch", "Event Guide", "Photo Store", "Archives", "Mobile apps"]),
    ("Follow", ["Newsletter", "RSS feeds", "Podcast feed", "Video channel", "Photo stream", "Community", "Alerts", "Tips line"]),
]


def _meta_block(site: str, name: str, title: str, slug: str) -> str:
    lines = [
        '<meta charset="utf-8">',
        '<meta name="viewport" content="width=device-width, initial-scale=1">',
        f"<title>{title} | {name}</title>",
        f'<meta name="description" content="{title} - reporting and notes from {name}.">',
        f'<meta name="author" content="{name} staff">',
        '<meta name="robots" content="index,follow,max-image-preview:large">',
        f'<link rel="canonical" href="https://{site}/{slug}">',
        f'<link rel="alternate" type="application/rss+xml" href="https://{site}/feed.xml">',
        f'<link rel="icon" href="https://{site}/favicon.ico" sizes="32x32">',
        f'<link rel="apple-touch-icon" href="https://{site}/touch-icon.png">',
        f'<meta property="og:site_name" content="{name}">',
        f'<meta property="og:title" content="{title}">',
        f'<meta property="og:url" content="https://{site}/{slug}">',
        '<meta property="og:type" content="article">',
        f'<meta property="og:image" content="https://cdn.{site}/social/{slug.replace("/", "_")}.jpg">',
        '<meta property="og:image:width" content="1200">',
        '<meta property="og:image:height" content="630">',
        '<meta name="twitter:card" content="summary_large_image">',
        f'<meta name="twitter:site" content="@{name.replace(" ", "").replace("&", "")}">',
        f'<meta name="twitter:title" content="{title}">',
        '<meta name="theme-color" content="#ffffff">',
        '<meta http-equiv="x-ua-compatible" content="ie=edge">',
        f'<link rel="preconnect" href="https://cdn.{site}" crossorigin>',
        f'<link rel="dns-prefetch" href="https://metrics.{site}">',
        '<meta name="format-detection" content="telephone=no">',
    ]
    return "\n".join(lines)


def _css_block(prefix: str, accent: str, compact: bool = False) -> str:
    rules = [
        f"""*,*::before,*::after{{box-sizing:border-box;margin:0;padding:0}}
body{{font:16px/1.6 Georgia,'Times New Roman',serif;color:#222;background:#fff}}
.{prefix}-wrap{{max-width:1180px;margin:0 auto;padding:0 20px}}
.{prefix}-masthead{{display:flex;align-items:center;justify-content:space-between;padding:14px 0;border-bottom:3px solid {accent}}}
.{prefix}-brand{{font-size:28px;font-weight:700;letter-spacing:-0.5px;color:{accent};text-decoration:none}}
.{prefix}-tagline{{font-size:12px;text-transform:uppercase;letter-spacing:2px;color:#777}}
.{prefix}-topnav{{display:flex;gap:18px;list-style:none;font-family:Helvetica,Arial,sans-serif;font-size:14px}}
.{prefix}-topnav a{{color:#333;text-decoration:none;padding:8px 4px;display:block}}
.{prefix}-topnav a:hover{{color:{accent};border-bottom:2px solid {accent}}}
.{prefix}-mega{{position:absolute;left:0;right:0;background:#fff;box-shadow:0 8px 24px rgba(0,0,0,.12);display:none;padding:24px;z-index:40}}
.{prefix}-mega.open{{display:grid;grid-template-columns:repeat(4,1fr);gap:16px}}
.{prefix}-crumbs{{font-size:13px;color:#888;padding:10px 0}}
.{prefix}-crumbs a{{color:#888}}
.{prefix}-article h1{{font-size:38px;line-height:1.15;margin:18px 0 10px}}
.{prefix}-standfirst{{font-size:20px;color:#555;margin-bottom:14px}}
.{prefix}-byline{{font-family:Helvetica,Arial,sans-serif;font-size:13px;color:#666;padding:8px 0;border-top:1px solid #eee;border-bottom:1px solid #eee}}
.{prefix}-article p{{margin:16px 0}}
.{prefix}-article figure{{margin:22px 0}}
.{prefix}-article figcaption{{font-size:13px;color:#777;padding-top:6px;border-bottom:1px solid #eee;padding-bottom:8px}}
.{prefix}-share{{display:flex;gap:10px;margin:16px 0}}
.{prefix}-share button{{width:38px;height:38px;border:1px solid #ddd;border-radius:50%;background:#fff;cursor:pointer}}
.{prefix}-share button:hover{{background:{accent};border-color:{accent}}}
.{prefix}-share button:hover svg{{fill:#fff}}""",
    ]
    if not compact:
        cols = "\n".join(
            f".{prefix}-col-{n}{{flex:0 0 {n * 100 / 12:.4f}%;max-width:{n * 100 / 12:.4f}%;padding:0 12px}}"
            for n in range(1, 13)
        )
        buttons = "\n".join(
            f".{prefix}-btn-{kind}{{background:{color};color:#fff;border:none;padding:10px 22px;"
            f"font:600 14px Helvetica,Arial,sans-serif;border-radius:4px;cursor:pointer}}"
            f".{prefix}-btn-{kind}:hover{{opacity:.88;transform:translateY(-1px)}}"
            f".{prefix}-btn-{kind}:disabled{{background:#ccc;cursor:not-allowed;transform:none}}"
            for kind, color in [
                ("primary", accent), ("secondary", "#555"), ("danger", "#b03a2e"),
                ("success", "#1e8449"), ("ghost", "transparent"), ("warn", "#9a7d0a"),
            ]
        )
        rules.append(cols)
        rules.append(buttons)
        rules.append(
            f"""@media (max-width:1024px){{.{prefix}-wrap{{max-width:960px}}.{prefix}-article h1{{font-size:32px}}.{prefix}-rail{{display:none}}}}
@media (max-width:768px){{.{prefix}-topnav{{display:none}}.{prefix}-burger{{display:block}}.{prefix}-article h1{{font-size:27px}}[class*="{prefix}-col-"]{{flex:0 0 100%;max-width:100%}}}}
@media (max-width:480px){{.{prefix}-article h1{{font-size:23px}}.{prefix}-standfirst{{font-size:17px}}body{{font-size:15px}}}}
@media print{{.{prefix}-masthead,.{prefix}-rail,.{prefix}-share,.{prefix}-comments,.{prefix}-sitefooter{{display:none!important}}body{{font-size:11pt}}}}
.{prefix}-rail{{font-family:Helvetica,Arial,sans-serif}}
.{prefix}-rail h2{{font-size:15px;text-transform:uppercase;letter-spacing:1px;border-bottom:2px solid {accent};padding-bottom:6px;margin-bottom:12px}}
.{prefix}-rail ul{{list-style:none}}
.{prefix}-rail li{{padding:9px 0;border-bottom:1px dotted #ddd;font-size:14px}}
.{prefix}-rail li a{{color:#333;text-decoration:none}}
.{prefix}-newsletter{{background:#f4f6f7;padding:18px;border-radius:6px;margin:18px 0}}
.{prefix}-newsletter input{{width:100%;padding:10px;border:1px solid #ccc;border-radius:4px;margin:8px 0}}
.{prefix}-tagcloud a{{display:inline-block;background:#eef2f4;color:#456;padding:4px 10px;margin:3px;border-radius:12px;font-size:12px;text-decoration:none}}
.{prefix}-comments{{margin-top:36px;border-top:2px solid #eee;padding-top:18px;font-family:Helvetica,Arial,sans-serif}}
.{prefix}-comment{{display:flex;gap:12px;padding:14px 0;border-bottom:1px solid #f0f0f0}}
.{prefix}-avatar{{width:44px;height:44px;border-radius:50%;background:#d5dbdb;flex:none}}
.{prefix}-sitefooter{{background:#1b2631;color:#aeb6bf;margin-top:48px;padding:36px 0 18px;font-family:Helvetica,Arial,sans-serif;font-size:13px}}
.{prefix}-sitefooter h3{{color:#fff;font-size:14px;text-transform:uppercase;letter-spacing:1px;margin-bottom:10px}}
.{prefix}-sitefooter ul{{list-style:none}}
.{prefix}-sitefooter li{{padding:4px 0}}
.{prefix}-sitefooter a{{color:#aeb6bf;text-decoration:none}}
.{prefix}-sitefooter a:hover{{color:#fff;text-decoration:underline}}
.{prefix}-legal{{border-top:1px solid #2e4053;margin-top:24px;padding-top:14px;text-align:center;color:#78828c}}"""
        )
    return "<style>\n" + "\n".join(rules) + "\n</style>"


def _js_block(site: str, prefix: str, compact: bool = False) -> str:
    consent = f"""(function(w,d){{
  'use strict';
  var KEY='{prefix}_consent_v3';
  var state={{analytics:false,ads:false,personalization:false,ts:null}};
  function read(){{try{{var raw=w.localStorage.getItem(KEY);if(raw)state=JSON.parse(raw);}}catch(e){{}}}}
  function write(){{try{{state.ts=Date.now();w.localStorage.setItem(KEY,JSON.stringify(state));}}catch(e){{}}}}
  function banner(){{
    var el=d.createElement('div');
    el.id='{prefix}-consent';
    el.setAttribute('role','dialog');
    el.innerHTML='<p>We use cookies to improve your reading experience.</p>'+
      '<button data-act="accept">Accept all</button>'+
      '<button data-act="essential">Essential only</button>'+
      '<button data-act="manage">Manage choices</button>';
    el.addEventListener('click',function(ev){{
      var act=ev.target&&ev.target.getAttribute('data-act');
      if(!act)return;
      if(act==='accept'){{state.analytics=true;state.ads=true;state.personalization=true;}}
      if(act==='essential'){{state.analytics=false;state.ads=false;state.personalization=false;}}
      write();el.parentNode&&el.parentNode.removeChild(el);boot();
    }});
    d.body.appendChild(el);
  }}
  function boot(){{
    if(!state.analytics)return;
    var q=w.{prefix}q=w.{prefix}q||[];
    q.push(['page',d.location.pathname,d.referrer,Date.now()]);
    ['scroll25','scroll50','scroll75','scroll100'].forEach(function(m){{q.push(['mark',m,false]);}});
    var s=d.createElement('script');s.async=true;s.src='https://metrics.{site}/collect.js';
    d.head.appendChild(s);
  }}
  read();
  if(state.ts===null){{if(d.readyState!=='loading')banner();else d.addEventListener('DOMContentLoaded',banner);}}
  else boot();
}})(window,document);"""
    lazy = f"""(function(w,d){{
  'use strict';
  function inView(el,margin){{var r=el.getBoundingClientRect();return r.top<(w.innerHeight+margin)&&r.bottom>-margin;}}
  var pending=[].slice.call(d.querySelectorAll('img[data-src],iframe[data-src]'));
  function hydrate(el){{
    el.src=el.getAttribute('data-src');
    el.removeAttribute('data-src');
    if(el.getAttribute('data-srcset')){{el.srcset=el.getAttribute('data-srcset');el.removeAttribute('data-srcset');}}
    el.addEventListener('error',function(){{el.classList.add('{prefix}-img-broken');}});
  }}
  if('IntersectionObserver' in w){{
    var io=new IntersectionObserver(function(entries){{
      entries.forEach(function(en){{if(en.isIntersecting){{hydrate(en.target);io.unobserve(en.target);}}}});
    }},{{rootMargin:'320px 0px'}});
    pending.forEach(function(el){{io.observe(el);}});
  }}else{{
    var tick=null;
    function sweep(){{
      tick=null;
      pending=pending.filter(function(el){{if(inView(el,320)){{hydrate(el);return false;}}return true;}});
      if(!pending.length){{w.removeEventListener('scroll',onScroll);w.removeEventListener('resize',onScroll);}}
    }}
    function onScroll(){{if(tick===null)tick=w.setTimeout(sweep,120);}}
    w.addEventListener('scroll',onScroll);w.addEventListener('resize',onScroll);sweep();
  }}
}})(window,document);"""
    widgets = f"""(function(w,d){{
  'use strict';
  var nav=d.querySelector('.{prefix}-topnav');
  if(nav){{
    nav.addEventListener('mouseover',function(ev){{
      var li=ev.target.closest('li[data-mega]');
      d.querySelectorAll('.{prefix}-mega.open').forEach(function(m){{m.classList.remove('open');}});
      if(li){{var mega=d.getElementById(li.getAttribute('data-mega'));if(mega)mega.classList.add('open');}}
    }});
    nav.addEventListener('mouseleave',function(){{
      d.querySelectorAll('.{prefix}-mega.open').forEach(function(m){{m.classList.remove('open');}});
    }});
  }}
  var share=d.querySelector('.{prefix}-share');
  if(share)share.addEventListener('click',function(ev){{
    var btn=ev.target.closest('button[data-net]');
    if(!btn)return;
    var u=encodeURIComponent(d.location.href),t=encodeURIComponent(d.title);
    var map={{fb:'https://social.example/share?u='+u,tw:'https://social.example/post?t='+t+'&u='+u,
      em:'mailto:?subject='+t+'&body='+u,ln:'https://social.example/link?u='+u}};
    var dest=map[btn.getAttribute('data-net')];
    if(dest)w.open(dest,'share','width=600,height=440');
  }});
  var form=d.querySelector('.{prefix}-newsletter form');
  if(form)form.addEventListener('submit',function(ev){{
    ev.preventDefault();
    var email=form.querySelector('input[type=email]');
    if(!email||!/^[^@\\s]+@[^@\\s]+\\.[^@\\s]+$/.test(email.value)){{form.classList.add('{prefix}-invalid');return;}}
    var xhr=new XMLHttpRequest();
    xhr.open('POST','https://lists.{site}/subscribe');
    xhr.setRequestHeader('Content-Type','application/json');
    xhr.onload=function(){{form.innerHTML='<p>Check your inbox to confirm.</p>';}};
    xhr.onerror=function(){{form.classList.add('{prefix}-error');}};
    xhr.send(JSON.stringify({{email:email.value,source:'article-rail'}}));
  }});
}})(window,document);"""
    blocks = [consent, widgets] if compact else [consent, lazy, widgets]
    return "\n".join(f"<script>\n{b}\n</script>" for b in blocks)


def _jsonld(site: str, name: str, title: str, slug: str, published: str) -> str:
    data = {
        "@context": "https://schema.org",
        "@type": "NewsArticle",
        "headline": title,
        "url": f"https://{site}/{slug}",
        "datePublished": published,
        "dateModified": published,
        "publisher": {
            "@type": "Organization",
            "name": name,
            "logo": {"@type": "ImageObject", "url": f"https://cdn.{site}/brand/wordmark.png"},
        },
        "author": [{"@type": "Person", "name": f"{name} staff"}],
        "image": [f"https://cdn.{site}/social/{slug.replace('/', '_')}.jpg"],
        "mainEntityOfPage": {"@type": "WebPage", "@id": f"https://{site}/{slug}"},
        "isAccessibleForFree": True,
    }
    return f'<script type="application/ld+json">{json.dumps(data, indent=1)}</script>'


_SHARE_SVGS = {
    "fb": "M12 2C6.5 2 2 6.5 2 12c0 5 3.7 9.1 8.4 9.9v-7H7.9V12h2.5V9.8c0-2.5 1.5-3.9 3.8-3.9",
    "tw": "M22 5.9c-.7.3-1.5.6-2.3.7.8-.5 1.5-1.3 1.8-2.3-.8.5-1.7.8-2.6 1A4.1 4.1 0 0 0 12 8.8",
    "em": "M20 4H4c-1.1 0-2 .9-2 2v12c0 1.1.9 2 2 2h16c1.1 0 2-.9 2-2V6c0-1.1-.9-2-2-2zm0 4",
    "ln": "M10.6 13.4a1 1 0 0 1 0-1.4l2.8-2.8a3 3 0 0 1 4.2 4.2l-1.4 1.4-1.4-1.4 1.4-1.4a1 1",
    "pr": "M19 8H5c-1.7 0-3 1.3-3 3v6h4v4h12v-4h4v-6c0-1.7-1.3-3-3-3zm-3 11H8v-5h8v5zm3-7",
}


def _share_bar(prefix: str) -> str:
    buttons = "\n".join(
        f'<button data-net="{net}" aria-label="Share via {net}">'
        f'<svg viewBox="0 0 24 24" width="18" height="18" fill="#555"><path d="{path}"/></svg>'
        f"</button>"
        for net, path in _SHARE_SVGS.items()
    )
    return f'<div class="{prefix}-share" role="group" aria-label="Share this story">\n{buttons}\n</div>'


def _mega_nav(site: str, prefix: str) -> str:
    items = []
    megas = []
    for i, (section, children) in enumerate(_NAV_SECTIONS):
        items.append(
            f'<li data-mega="{prefix}-mega-{i}"><a href="https://{site}/{section.lower()}">{section}</a></li>'
        )
        links = "\n".join(
            f'<a href="https://{site}/{section.lower()}/{child.lower().replace(" ", "-")}" '
            f'title="{child} coverage from around the region">{child}</a>'
            for child in children
        )
        megas.append(f'<div class="{prefix}-mega" id="{prefix}-mega-{i}">\n{links}\n</div>')
    return (
        f'<nav class="{prefix}-mainnav" aria-label="Primary">\n'
        f'<ul class="{prefix}-topnav">\n' + "\n".join(items) + "\n</ul>\n" + "\n".join(megas) + "\n</nav>"
    )


def _rail(site: str, prefix: str, related: list[str]) -> str:
    rel_items = "\n".join(
        f'<li><a href="https://{site}/archive/{i}">{title}</a><span aria-hidden="true"> &rsaquo;</span></li>'
        for i, title in enumerate(related)
    )
    tags = "\n".join(
        f'<a href="https://{site}/topics/{t.lower().replace(" ", "-")}" rel="tag">{t}</a>'
        for t in ["Harbor", "Planning", "Heritage", "Commerce", "Footpaths", "Seasonal", "Markets", "Archives", "Tides", "Craft"]
    )
    return f"""<div class="{prefix}-rail" id="{prefix}-rail">
<h2>Most read</h2>
<ul>
{rel_items}
</ul>
<div class="{prefix}-newsletter">
<h2>Morning briefing</h2>
<form action="https://lists.{site}/subscribe" method="post">
<label for="{prefix}-nl-email">Get the day's headlines by email</label>
<input id="{prefix}-nl-email" type="email" name="email" placeholder="you@example.com" required>
<button class="{prefix}-btn-primary" type="submit">Sign up</button>
<small>By subscribing you agree to the terms of use and privacy policy.</small>
</form>
</div>
<h2>Topics</h2>
<div class="{prefix}-tagcloud">
{tags}
</div>
</div>"""


def _comments(site: str, prefix: str) -> str:
    fake = [
        ("R. Hale", "Walked past this exact spot on Sunday, good to see it covered properly."),
        ("m.okafor", "Small correction to the caption, the east pier reopened last spring, not this year."),
        ("gardengate22", "More of this kind of local reporting please, the newsletter keeps getting better."),
    ]
    rows = "\n".join(
        f'<li class="{prefix}-comment"><span class="{prefix}-avatar" aria-hidden="true"></span>'
        f"<span><strong>{who}</strong><br>{text}</span></li>"
        for who, text in fake
    )
    return f"""<section class="{prefix}-comments" id="comments">
<h2>Reader comments</h2>
<ul>
{rows}
</ul>
<form action="https://{site}/comments/post" method="post">
<label for="{prefix}-c-body">Join the discussion</label>
<textarea id="{prefix}-c-body" name="body" rows="4" placeholder="Be kind, stay on topic."></textarea>
<input type="hidden" name="thread" value="article">
<button class="{prefix}-btn-secondary" type="submit">Post comment</button>
</form>
</section>"""


def _footer_farm(site: str, name: str, prefix: str) -> str:
    cols = "\n".join(
        f'<div class="{prefix}-col-3"><h3>{heading}</h3><ul>'
        + "".join(
            f'<li><a href="https://{site}/{heading.lower()}/{item.lower().replace(" ", "-")}">{item}</a></li>'
            for item in items
        )
        + "</ul></div>"
        for heading, items in _FOOTER_COLUMNS
    )
    return f"""<div class="{prefix}-sitefooter" id="site-footer">
<div class="{prefix}-wrap">
<div class="{prefix}-row" style="display:flex;flex-wrap:wrap">
{cols}
</div>
<div class="{prefix}-legal">
<p>&copy; 2023 {name}. All rights reserved. Reproduction without permission is prohibited.</p>
<p>{name} is a member of the Independent Coastal Press Association.</p>
</div>
</div>
</div>"""


def build_realpage(
    site: str,
    name: str,
    accent: str,
    prefix: str,
    slug: str,
    title: str,
    standfirst: str,
    paragraphs: list[str],
    related: list[str],
    published: str,
    image_slugs: list[str],
    compact: bool = False,
) -> str:
    body_parts: list[str] = []
    for i, text in enumerate(paragraphs):
        body_parts.append(f"<p>{text}</p>")
        if i < len(image_slugs):
            img = image_slugs[i]
            body_parts.append(
                f'<figure><img src="https://cdn.{site}/photos/{img}.jpg" '
                f'alt="{img.replace("-", " ")}" width="1200" height="800" loading="lazy">'
                f"<figcaption>Photograph: {name}</figcaption></figure>"
            )
    article_html = "\n".join(body_parts)
    return f"""<!DOCTYPE html>
<html lang="en">
<head>
{_meta_block(site, name, title, slug)}
{_css_block(prefix, accent, compact=compact)}
{_jsonld(site, name, title, slug, published)}
</head>
<body>
<div class="{prefix}-wrap">
<header class="{prefix}-masthead" id="page-header">
<a class="{prefix}-brand" href="https://{site}/">{name}</a>
<span class="{prefix}-tagline">Independent reporting since 1987</span>
{_mega_nav(site, prefix)}
</header>
<div class="{prefix}-crumbs"><a href="https://{site}/">Home</a> &rsaquo; <a href="https://{site}/news">News</a> &rsaquo; {title}</div>
<!-- article:{slug} rendered {published} by edition-builder -->
<main class="{prefix}-main" style="display:flex;gap:32px">
<article class="{prefix}-article" style="flex:1">
<h1>{title}</h1>
<p class="{prefix}-standfirst">{standfirst}</p>
<div class="{prefix}-byline">By <b>{name} staff</b> | Published {published}</div>
{_share_bar(prefix)}
{article_html}
<div class="more-link"><a href="https://{site}/{slug}/full">Continue reading the full report</a></div>
{_comments(site, prefix)}
</article>
<aside style="flex:0 0 300px">
{_rail(site, prefix, related)}
</aside>
</main>
</div>
{_footer_farm(site, name, prefix)}
{_js_block(site, prefix, compact=compact)}
</body>
</html>"""


def write_realpages() -> None:
    """Twelve chrome-heavy standalone pages for the simplifier size checks."""
    from mmdocs.simplify import simplify_to_html

    out_dir = FIXTURE_DIR / "realpages"
    if out_dir.exists():
        shutil.rmtree(out_dir)
    out_dir.mkdir(parents=True)

    rng = random.Random(SEED + 9)
    deck = LineDeck(bundled_corpus_lines(), rng)
    topics = [
        ("ferry-landing-repairs", "Ferry landing repairs enter their final week"),
        ("harvest-supper-returns", "The harvest supper returns to the old grange hall"),
        ("tide-tables-centenary", "A century of printed tide tables, and counting"),
        ("orchard-grafting-day", "Volunteers gather for the orchard grafting day"),
        ("quarry-path-reopens", "The quarry path reopens after winter storm damage"),
        ("lighthouse-lens-cleaned", "The lighthouse lens gets its five-yearly cleaning"),
        ("market-hall-survey", "Structural survey clears the Victorian market hall"),
        ("rowing-club-centennial", "Rowing club marks one hundred years on the water"),
        ("heritage-apple-census", "The heritage apple census finds two lost varieties"),
        ("winter-shelter-opens", "The winter shelter opens early after a cold snap"),
        ("salt-marsh-restoration", "Salt marsh restoration shows its first results"),
        ("printing-press-returns", "A restored printing press returns to the museum"),
    ]
    ratios = []
    for i, (slug, title) in enumerate(topics):
        site, name, accent, prefix = REALPAGE_SITES[i % len(REALPAGE_SITES)]
        compact = i >= 10  # the last two carry lighter chrome for texture
        para_count = 5 + (i % 4)
        lines = deck.draw(para_count, exclude=set())
        paragraphs = [deck.lines[j] for j in lines]
        related = [t for _, t in topics if t != title][: 6 + (i % 3)]
        page = build_realpage(
            site,
            name,
            accent,
            prefix,
            f"news/{slug}",
            title,
            paragraphs[0],
            paragraphs[1:],
            related,
            published=f"2023-0{1 + i % 9}-{10 + i:02d}",
            image_slugs=[f"{slug}-{k}" for k in range(1 + i % 3)],
            compact=compact,
        )
        raw = page.encode("utf-8")
        (out_dir / f"{i:02d}_{slug}.html").write_bytes(raw)
        small = simplify_to_html(raw).encode("utf-8")
        ratios.append(len(small) / len(raw))

    # regeneration must not drift out of the documented reduction bounds
    assert max(ratios) <= 1 / 5, f"worst page ratio {max(ratios):.3f} above 1/5"
    mean = sum(ratios) / len(ratios)
    assert mean <= 1 / 10, f"mean ratio {mean:.3f} above 1/10"
    print(
        f"wrote {len(topics)} chrome-heavy pages -> {out_dir} "
        f"(reduction mean {mean:.3f}, worst {max(ratios):.3f})"
    )


def golden_config(corpus_dir: Path, out_dir: Path) -> dict:
    return {
        "input": {"path": str(corpus_dir / "pages.warc.gz"), "format": "warc"},
        "output_dir": str(out_dir),
        "fetch": {"kind": "cache", "source": str(corpus_dir / "fetch_cache.jsonl")},
        "quality": {"hash_dim": 1 << 16, "epochs": 50},
    }


def freeze_golden() -> None:
    corpus_dir = FIXTURE_DIR / "corpus"
    with tempfile.TemporaryDirectory() as tmp:
        out_dir = Path(tmp) / "out"
        cfg = config_from_mapping(golden_config(corpus_dir, out_dir))
        docs, reports = run_pipeline(cfg)
        print("\nfunnel:")
        for r in reports:
            line = f"  {r.name:24s} {r.records_in:3d} -> {r.records_out:3d}"
            if r.reasons:
                line += "  " + json.dumps(dict(sorted(r.reasons.items())))
            print(line)
        shutil.copy(out_dir / "final.jsonl", FIXTURE_DIR / "golden_final.jsonl")
        print(f"\nfroze {len(docs)} documents -> tests/fixtures/golden_final.jsonl")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--freeze-golden", action="store_true")
    args = parser.parse_args()
    corpus = build_corpus()
    write_all(corpus)
    print(f"wrote {len(corpus.pages)} pages, {len(corpus.cache)} cache entries -> {FIXTURE_DIR / 'corpus'}")
    write_realpages()
    if args.freeze_golden:
        freeze_golden()


if __name__ == "__main__":
    main()
