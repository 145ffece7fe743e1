"""Lenient HTML tree builder and a small selector engine.

Clone-journal pages are frequently malformed (unclosed tags, stray markup),
so parsing is best-effort: unknown end tags are ignored and unclosed elements
are implicitly closed when an ancestor closes. Selectors support what the
extraction profiles need:

    tag            element name
    .cls           class name (multiple allowed: "div.a.b")
    #id            id attribute
    a b            descendant combinator
    sel@attr       return the attribute value instead of text

Matching is case-insensitive on tag names and returns nodes in document order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from html.parser import HTMLParser

_VOID_TAGS = {
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "param", "source", "track", "wbr",
}


@dataclass
class Node:
    tag: str
    attrs: dict[str, str] = field(default_factory=dict)
    children: list["Node"] = field(default_factory=list)
    text_chunks: list[str] = field(default_factory=list)

    @property
    def classes(self) -> set[str]:
        return set(self.attrs.get("class", "").split())

    def text(self) -> str:
        """Concatenated descendant text with whitespace collapsed."""
        parts: list[str] = []
        self._collect_text(parts)
        return " ".join(" ".join(parts).split())

    def _collect_text(self, parts: list[str]) -> None:
        for chunk in self.text_chunks:
            parts.append(chunk)
        for child in self.children:
            child._collect_text(parts)

    def iter(self):
        """Depth-first iteration over this node and all descendants."""
        yield self
        for child in self.children:
            yield from child.iter()


class _TreeBuilder(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.root = Node(tag="#document")
        self.stack = [self.root]

    def handle_starttag(self, tag, attrs):
        node = Node(tag=tag.lower(), attrs={k: (v or "") for k, v in attrs})
        self.stack[-1].children.append(node)
        if tag.lower() not in _VOID_TAGS:
            self.stack.append(node)

    def handle_startendtag(self, tag, attrs):
        node = Node(tag=tag.lower(), attrs={k: (v or "") for k, v in attrs})
        self.stack[-1].children.append(node)

    def handle_endtag(self, tag):
        tag = tag.lower()
        # Pop to the nearest matching open element; ignore stray end tags.
        for i in range(len(self.stack) - 1, 0, -1):
            if self.stack[i].tag == tag:
                del self.stack[i:]
                return

    def handle_data(self, data):
        if data and not data.isspace():
            self.stack[-1].text_chunks.append(data)


def parse_html(text: str) -> Node:
    """Parse HTML into a document node; never raises on malformed input."""
    builder = _TreeBuilder()
    try:
        builder.feed(text)
        builder.close()
    except Exception:
        pass  # keep whatever tree was built so far
    return builder.root


@dataclass(frozen=True)
class _Step:
    tag: str | None
    classes: frozenset[str]
    node_id: str | None

    def matches(self, node: Node) -> bool:
        if node.tag.startswith("#"):
            return False
        if self.tag and node.tag != self.tag:
            return False
        if self.classes and not self.classes <= node.classes:
            return False
        if self.node_id and node.attrs.get("id") != self.node_id:
            return False
        return True


def _parse_step(token: str) -> _Step:
    tag: str | None = None
    classes: list[str] = []
    node_id: str | None = None
    buf = ""
    mode = "tag"
    for ch in token + "\0":
        if ch in ".#\0":
            if buf:
                if mode == "tag":
                    tag = buf.lower()
                elif mode == "class":
                    classes.append(buf)
                else:
                    node_id = buf
            buf = ""
            mode = "class" if ch == "." else "id" if ch == "#" else mode
        else:
            buf += ch
    return _Step(tag=tag, classes=frozenset(classes), node_id=node_id)


def parse_selector(selector: str) -> tuple[list[_Step], str | None]:
    """Split ``"div.entry h3@title"`` into descendant steps + optional attr."""
    attr = None
    if "@" in selector:
        selector, attr = selector.rsplit("@", 1)
        attr = attr.strip() or None
    steps = [_parse_step(tok) for tok in selector.split() if tok]
    return steps, attr


def select(root: Node, selector: str) -> list[Node]:
    """All nodes under `root` matching the selector, in document order."""
    steps, _ = parse_selector(selector)
    if not steps:
        return []
    matched = [root]
    for step in steps:
        next_matched: list[Node] = []
        seen: set[int] = set()
        for scope in matched:
            for node in scope.iter():
                if node is scope:
                    continue
                if step.matches(node) and id(node) not in seen:
                    seen.add(id(node))
                    next_matched.append(node)
        matched = next_matched
    return matched


def select_one(root: Node, selector: str) -> Node | None:
    found = select(root, selector)
    return found[0] if found else None


def select_value(root: Node, selector: str) -> str | None:
    """Text (or attribute, with ``@attr``) of the first matching node."""
    steps, attr = parse_selector(selector)
    if not steps:
        return None
    base = selector.rsplit("@", 1)[0] if attr else selector
    node = select_one(root, base)
    if node is None:
        return None
    if attr:
        return node.attrs.get(attr)
    return node.text()


def links(root: Node) -> list[tuple[str, str]]:
    """All (href, anchor text) pairs in document order."""
    out = []
    for node in root.iter():
        if node.tag == "a" and node.attrs.get("href"):
            out.append((node.attrs["href"], node.text()))
    return out
