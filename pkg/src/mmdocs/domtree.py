"""Mutable DOM tree and a tolerant HTML parser built on html.parser.

The parser never fails: malformed markup produces a best-effort tree.
Recovery model (pinned by golden tests): void elements never open a scope,
a handful of elements auto-close a same-group open sibling (p closes p,
li closes li, ...), and stray end tags close up to the nearest matching
open element or are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from html import escape
from html.parser import HTMLParser
from typing import Iterator, Optional

TEXT_TAG = "#text"
ROOT_TAG = "#root"

VOID_ELEMENTS = {
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "param", "source", "track", "wbr",
}

# Opening the key closes the nearest open element whose tag is in the value set.
_AUTO_CLOSE = {
    "p": {"p"},
    "li": {"li"},
    "dt": {"dt", "dd"},
    "dd": {"dt", "dd"},
    "tr": {"tr", "td", "th"},
    "td": {"td", "th"},
    "th": {"td", "th"},
    "option": {"option"},
}


@dataclass
class DomNode:
    tag: str
    attributes: list[tuple[str, str]] = field(default_factory=list)
    children: list["DomNode"] = field(default_factory=list)
    text: str = ""

    @property
    def is_text(self) -> bool:
        return self.tag == TEXT_TAG

    def attr(self, name: str) -> Optional[str]:
        for key, value in self.attributes:
            if key == name:
                return value
        return None

    def has_attr(self, name: str) -> bool:
        return any(key == name for key, _ in self.attributes)

    def class_tokens(self) -> list[str]:
        return (self.attr("class") or "").split()

    def iter(self) -> Iterator["DomNode"]:
        """Pre-order traversal including self."""
        yield self
        for child in self.children:
            yield from child.iter()

    def copy(self) -> "DomNode":
        return DomNode(
            tag=self.tag,
            attributes=list(self.attributes),
            children=[c.copy() for c in self.children],
            text=self.text,
        )

    def __repr__(self) -> str:
        if self.is_text:
            return f"DomNode(#text {self.text!r})"
        return f"DomNode(<{self.tag}> {len(self.children)} children)"


def text_node(text: str) -> DomNode:
    return DomNode(tag=TEXT_TAG, text=text)


class _TreeBuilder(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.root = DomNode(tag=ROOT_TAG)
        self.stack = [self.root]

    def handle_starttag(self, tag, attrs):
        auto = _AUTO_CLOSE.get(tag)
        if auto:
            # tr after an unclosed td must pop both the cell and the row
            while len(self.stack) > 1 and self.stack[-1].tag in auto:
                self.stack.pop()
        node = DomNode(tag=tag, attributes=[(k, v if v is not None else "") for k, v in attrs])
        self.stack[-1].children.append(node)
        if tag not in VOID_ELEMENTS:
            self.stack.append(node)

    def handle_startendtag(self, tag, attrs):
        node = DomNode(tag=tag, attributes=[(k, v if v is not None else "") for k, v in attrs])
        self.stack[-1].children.append(node)

    def handle_endtag(self, tag):
        if tag in VOID_ELEMENTS:
            return
        for depth in range(len(self.stack) - 1, 0, -1):
            if self.stack[depth].tag == tag:
                del self.stack[depth:]
                return
        # No matching open element: ignore the stray end tag.

    def handle_data(self, data):
        if data:
            self.stack[-1].children.append(text_node(data))

    def handle_comment(self, data):
        self.stack[-1].children.append(DomNode(tag="#comment", text=data))

    def handle_decl(self, decl):
        pass

    def handle_pi(self, data):
        pass


def parse_html(raw_html: bytes | str) -> DomNode:
    """Parse HTML bytes (UTF-8, lossy) or text into a tree rooted at #root."""
    if isinstance(raw_html, bytes):
        raw_html = raw_html.decode("utf-8", errors="replace")
    builder = _TreeBuilder()
    builder.feed(raw_html)
    builder.close()
    return builder.root


def serialize(node: DomNode) -> str:
    """Serialize a tree back to HTML. The #root wrapper is not emitted."""
    parts: list[str] = []
    _serialize_into(node, parts)
    return "".join(parts)


def _serialize_into(node: DomNode, parts: list[str]) -> None:
    if node.is_text:
        parts.append(escape(node.text, quote=False))
        return
    if node.tag == "#comment":
        return
    if node.tag == ROOT_TAG:
        for child in node.children:
            _serialize_into(child, parts)
        return
    attrs = "".join(f' {k}="{escape(v)}"' for k, v in node.attributes)
    if node.tag in VOID_ELEMENTS and not node.children:
        parts.append(f"<{node.tag}{attrs}/>")
        return
    parts.append(f"<{node.tag}{attrs}>")
    for child in node.children:
        _serialize_into(child, parts)
    parts.append(f"</{node.tag}>")
