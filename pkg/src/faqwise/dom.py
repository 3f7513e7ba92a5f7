"""Tolerant HTML parsing into a minimal DOM tree.

Built on the stdlib ``html.parser`` tokenizer with browser-style recovery:
void elements never open a scope, implied end tags are honored (a ``<li>``
closes the previous ``<li>``), stray end tags are dropped, and unclosed
elements are closed at end of input. The resulting tree carries ``depth``
(root document node = 0) and ``doc_order`` (pre-order position) on every
node, which the FAQ pattern miner relies on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from html.parser import HTMLParser
from typing import Iterator, Optional

from .errors import EmptyDocument

# Subtrees whose text is never page content.
NON_CONTENT_TAGS = frozenset({"script", "style", "noscript", "template"})

VOID_ELEMENTS = frozenset({
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "param", "source", "track", "wbr",
})

# An open element (key) is implicitly closed when one of the tags in the
# value set starts while it is on top of the stack.
_BLOCKISH = frozenset({
    "address", "article", "aside", "blockquote", "details", "div", "dl",
    "fieldset", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5",
    "h6", "header", "hr", "main", "nav", "ol", "p", "pre", "section",
    "table", "ul",
})
_CLOSED_BY = {
    "p": _BLOCKISH,
    "li": frozenset({"li"}),
    "dt": frozenset({"dt", "dd"}),
    "dd": frozenset({"dt", "dd"}),
    "tr": frozenset({"tr", "thead", "tbody", "tfoot"}),
    "td": frozenset({"td", "th", "tr", "thead", "tbody", "tfoot"}),
    "th": frozenset({"td", "th", "tr", "thead", "tbody", "tfoot"}),
    "thead": frozenset({"tbody", "tfoot"}),
    "tbody": frozenset({"tbody", "tfoot"}),
    "option": frozenset({"option", "optgroup"}),
    "optgroup": frozenset({"optgroup"}),
}

_HEAD_ONLY_TAGS = frozenset({"base", "link", "meta", "title"})

_WS_RE = re.compile(r"\s+")


def normalize_text(text: str) -> str:
    """Collapse whitespace runs to single spaces and trim the ends."""
    return _WS_RE.sub(" ", text).strip()


@dataclass(eq=False)
class DomNode:
    """Element or text node. Text nodes have ``tag is None``."""

    tag: Optional[str]
    parent: Optional["DomNode"] = None
    text: str = ""
    children: list["DomNode"] = field(default_factory=list)
    depth: int = 0
    doc_order: int = 0

    @property
    def is_text(self) -> bool:
        return self.tag is None

    @property
    def is_element(self) -> bool:
        return self.tag is not None and self.tag != "#document"

    def append(self, node: "DomNode") -> None:
        node.parent = self
        self.children.append(node)

    def iter(self) -> Iterator["DomNode"]:
        """Pre-order traversal of the subtree, including this node."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def iter_elements(self) -> Iterator["DomNode"]:
        for node in self.iter():
            if node.is_element:
                yield node

    def ancestors(self) -> Iterator["DomNode"]:
        """Walk parents from nearest to the document root."""
        node = self.parent
        while node is not None:
            yield node
            node = node.parent

    def contains(self, other: "DomNode") -> bool:
        return other is self or any(a is self for a in other.ancestors())

    def text_nodes(self) -> Iterator["DomNode"]:
        """Content text nodes of the subtree, skipping script-like scopes."""
        stack = [self]
        while stack:
            node = stack.pop()
            if node.tag in NON_CONTENT_TAGS:
                continue
            if node.is_text:
                yield node
            stack.extend(reversed(node.children))

    def subtree_text(self) -> str:
        """Normalized concatenation of the subtree's content text."""
        return normalize_text(" ".join(t.text for t in self.text_nodes()))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        label = self.tag if self.tag is not None else f"text({self.text!r})"
        return f"<DomNode {label} depth={self.depth} order={self.doc_order}>"


class _TreeBuilder(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.root = DomNode("#document")
        self.stack = [self.root]
        self.saw_element = False

    def _top(self) -> DomNode:
        return self.stack[-1]

    def handle_starttag(self, tag, attrs):
        closers = _CLOSED_BY.get(self._top().tag or "")
        while closers is not None and tag in closers:
            self.stack.pop()
            closers = _CLOSED_BY.get(self._top().tag or "")
        node = DomNode(tag)
        self._top().append(node)
        self.saw_element = True
        if tag not in VOID_ELEMENTS:
            self.stack.append(node)

    def handle_startendtag(self, tag, attrs):
        node = DomNode(tag)
        self._top().append(node)
        self.saw_element = True

    def handle_endtag(self, tag):
        # Close up to the matching open element; ignore stray end tags.
        for i in range(len(self.stack) - 1, 0, -1):
            if self.stack[i].tag == tag:
                del self.stack[i:]
                return

    def handle_data(self, data):
        if not data:
            return
        self._top().append(DomNode(None, text=data))


def _normalize_document(root: DomNode) -> DomNode:
    """Guarantee an html/body skeleton so depths are layout-independent."""
    html = next((c for c in root.children if c.tag == "html"), None)
    if html is None:
        orphans = root.children
        html = DomNode("html")
        root.children = []
        root.append(html)
    else:
        orphans = [c for c in root.children if c is not html]
        root.children = []
        root.append(html)

    body = next((c for c in html.children if c.tag == "body"), None)
    head = next((c for c in html.children if c.tag == "head"), None)
    if body is None:
        body = DomNode("body")
    if head is None:
        head = DomNode("head")

    # Everything that is neither head nor body gets re-homed.
    loose = [c for c in html.children if c.tag not in ("head", "body")]
    loose.extend(orphans)
    html.children = []
    html.append(head)
    html.append(body)
    for node in loose:
        if node.tag in ("body", "head"):
            # A stray body/head outside <html>: merge its children.
            target = body if node.tag == "body" else head
            for child in node.children:
                target.append(child)
            continue
        target = head if node.tag in _HEAD_ONLY_TAGS else body
        target.append(node)
    return root


def _assign_positions(root: DomNode) -> None:
    order = 0
    stack = [(root, 0)]
    while stack:
        node, depth = stack.pop()
        node.depth = depth
        node.doc_order = order
        order += 1
        stack.extend((c, depth + 1) for c in reversed(node.children))


def parse_html(html: str | bytes) -> DomNode:
    """Parse arbitrary markup into a document tree, recovering from errors.

    Raises :class:`EmptyDocument` when the input yields neither an element
    nor any non-blank text.
    """
    if isinstance(html, bytes):
        html = html.decode("utf-8", errors="replace")
    builder = _TreeBuilder()
    builder.feed(html)
    builder.close()
    root = builder.root
    has_text = any(t.text.strip() for t in root.text_nodes())
    if not builder.saw_element and not has_text:
        raise EmptyDocument("input contains no elements and no text")
    root = _normalize_document(root)
    _assign_positions(root)
    return root
