"""HTML simplification: the tree-cleaning passes applied before extraction.

Pass order: line-break conversion, comment stripping, tag unwrapping,
node removal by keep-list, special-node modification, attribute pruning,
then a fixpoint collapse (empty-leaf elimination + unnesting) to clear
whatever the removal passes left behind.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from sklearn.base import BaseEstimator, TransformerMixin

from .domtree import ROOT_TAG, DomNode, parse_html, serialize, text_node

SENTINEL_TEXT = "END_OF_DOCUMENT_TOKEN_TO_BE_REPLACED"

UNWRAP_TAGS = frozenset(
    "a abbr acronym b bdi bdo big cite code data dfn em font i ins kbd mark q s samp "
    "shadow small span strike strong sub sup time tt u var wbr".split()
)

STRUCTURE_TAGS = frozenset(
    "address article aside blink blockquote body br caption center dd dl dt div "
    "figcaption h h1 h2 h3 h4 h5 h6 hgroup html legend main marquee ol p section "
    "summary title ul".split()
)

MEDIA_TAGS = frozenset("audio embed figure iframe img object picture video".split())

# src-like URL carriers plus the attributes the special-node rules and
# downstream filters inspect; everything else (styling, data-*) is dropped.
KEPT_ATTRIBUTES = frozenset("src href srcset id class alt width height".split())

_SPACE_RUN = re.compile(r"[^\S\n]+")
_NEWLINE_RUN = re.compile(r"\s*\n\s*")


@dataclass
class SimplifyConfig:
    unwrap_tags: frozenset[str] = UNWRAP_TAGS
    structure_tags: frozenset[str] = STRUCTURE_TAGS
    media_tags: frozenset[str] = MEDIA_TAGS
    banned_div_id_substrings: frozenset[str] = frozenset(
        {"footer", "header", "navigation", "nav", "navbar", "menu"}
    )
    banned_attribute_names: frozenset[str] = frozenset({"date"})
    banned_class_names: frozenset[str] = frozenset({"footer", "site-info"})
    sentinel_class: str = "more-link"
    sentinel_text: str = SENTINEL_TEXT
    kept_attributes: frozenset[str] = KEPT_ATTRIBUTES

    def __post_init__(self) -> None:
        keep = self.structure_tags | self.media_tags
        overlap = self.unwrap_tags & keep
        if overlap:
            raise ValueError(f"unwrap and keep tag sets overlap: {sorted(overlap)}")

    @property
    def kept_tags(self) -> frozenset[str]:
        return self.structure_tags | self.media_tags | {"source"}

    @classmethod
    def from_mapping(cls, data: dict) -> "SimplifyConfig":
        kwargs = {}
        fields = {f.name for f in cls.__dataclass_fields__.values()}  # type: ignore[attr-defined]
        for key, value in data.items():
            if key not in fields:
                raise ValueError(f"unknown simplify config key: {key!r}")
            kwargs[key] = frozenset(value) if isinstance(value, (list, set)) else value
        return cls(**kwargs)


DEFAULT_CONFIG = SimplifyConfig()


def _merge_text_children(node: DomNode) -> None:
    merged: list[DomNode] = []
    for child in node.children:
        if child.is_text and merged and merged[-1].is_text:
            merged[-1].text += child.text
        else:
            merged.append(child)
    node.children = merged


def _condense_whitespace(text: str) -> str:
    text = _NEWLINE_RUN.sub("\n", text)
    return _SPACE_RUN.sub(" ", text)


def convert_linebreaks(root: DomNode) -> DomNode:
    """Turn <br> into literal newlines and condense runs of breaks/spaces."""
    for node in root.iter():
        if node.is_text:
            continue
        node.children = [text_node("\n") if c.tag == "br" else c for c in node.children]
        _merge_text_children(node)
        for child in node.children:
            if child.is_text:
                child.text = _condense_whitespace(child.text)
    return root


def strip_comments(root: DomNode) -> DomNode:
    for node in root.iter():
        if not node.is_text:
            node.children = [c for c in node.children if c.tag != "#comment"]
    return root


def unwrap_tags(root: DomNode, config: SimplifyConfig = DEFAULT_CONFIG) -> DomNode:
    """Replace styling wrappers by their children, recursively to fixpoint."""

    def walk(node: DomNode) -> None:
        new_children: list[DomNode] = []
        for child in node.children:
            walk(child)
            if child.tag in config.unwrap_tags:
                new_children.extend(child.children)
            else:
                new_children.append(child)
        node.children = new_children
        _merge_text_children(node)

    walk(root)
    return root


def remove_disallowed_nodes(root: DomNode, config: SimplifyConfig = DEFAULT_CONFIG) -> DomNode:
    """Drop every subtree whose root tag is outside the keep lists."""
    kept = config.kept_tags

    def walk(node: DomNode) -> None:
        node.children = [c for c in node.children if c.is_text or c.tag in kept]
        for child in node.children:
            walk(child)

    walk(root)
    return root


def _div_is_banned(node: DomNode, config: SimplifyConfig) -> bool:
    node_id = (node.attr("id") or "").lower()
    if node_id and any(sub in node_id for sub in config.banned_div_id_substrings):
        return True
    if any(node.has_attr(name) for name in config.banned_attribute_names):
        return True
    if any(tok in config.banned_class_names for tok in node.class_tokens()):
        return True
    return False


def modify_special_nodes(root: DomNode, config: SimplifyConfig = DEFAULT_CONFIG) -> DomNode:
    """Remove navigation/footer-flavored divs; swap topic-break nodes for the sentinel."""

    def walk(node: DomNode) -> None:
        new_children: list[DomNode] = []
        for child in node.children:
            if child.is_text:
                new_children.append(child)
                continue
            if config.sentinel_class in child.class_tokens():
                new_children.append(text_node(config.sentinel_text))
                continue
            if child.tag == "div" and _div_is_banned(child, config):
                continue
            walk(child)
            new_children.append(child)
        node.children = new_children

    walk(root)
    return root


def prune_attributes(root: DomNode, config: SimplifyConfig = DEFAULT_CONFIG) -> DomNode:
    for node in root.iter():
        if not node.is_text and node.tag != ROOT_TAG:
            node.attributes = [(k, v) for k, v in node.attributes if k in config.kept_attributes]
    return root


def collapse(root: DomNode, config: SimplifyConfig = DEFAULT_CONFIG) -> DomNode:
    """Eliminate empty leaves and unnest textless single-child parents, to fixpoint."""
    content_bearing = config.media_tags | {"source"}

    def pass_once(node: DomNode) -> bool:
        changed = False
        _merge_text_children(node)
        kept: list[DomNode] = []
        for child in node.children:
            if child.is_text:
                if child.text.strip():
                    kept.append(child)
                else:
                    changed = True
                continue
            if pass_once(child):
                changed = True
            if not child.children and child.tag not in content_bearing:
                changed = True  # empty leaf
                continue
            # A parent without attached text and a single child is replaced
            # by that child (a lone #text child counts as attached text).
            if len(child.children) == 1 and not child.children[0].is_text:
                kept.append(child.children[0])
                changed = True
            else:
                kept.append(child)
        node.children = kept
        return changed

    while pass_once(root):
        pass
    return root


def simplify(raw_html: bytes | str, config: SimplifyConfig = DEFAULT_CONFIG) -> DomNode:
    """Full cleaning pipeline from raw HTML to a simplified tree.

    The special-node pass must run before any collapse: unnesting first
    would dissolve single-child banned divs and leak their content.
    """
    root = parse_html(raw_html)
    convert_linebreaks(root)
    strip_comments(root)
    unwrap_tags(root, config)
    remove_disallowed_nodes(root, config)
    modify_special_nodes(root, config)
    prune_attributes(root, config)
    collapse(root, config)
    return root


def simplify_to_html(raw_html: bytes | str, config: SimplifyConfig = DEFAULT_CONFIG) -> str:
    return serialize(simplify(raw_html, config))


class HtmlSimplifier(BaseEstimator, TransformerMixin):
    """Stateless transformer over raw HTML pages; composes with sklearn pipelines."""

    def __init__(self, config: SimplifyConfig = DEFAULT_CONFIG):
        self.config = config

    def fit(self, X=None, y=None):
        return self

    def transform(self, X):
        return [simplify(page, self.config) for page in X]
