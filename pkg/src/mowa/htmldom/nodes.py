"""Mutable document tree: node types, cloning, comparison, serialization.

Provides:
- Node hierarchy (Element, Text, Comment) plus a Document wrapper
- deep cloning with fresh parent links
- preorder iteration and structural (isomorphism) comparison
- UTF-8 serialization that reaches a fixed point after one round trip
"""

from __future__ import annotations

from typing import Iterator, Union

# Elements that never take children and serialize without a closing tag.
VOID_ELEMENTS = frozenset(
    {
        "area",
        "base",
        "br",
        "col",
        "embed",
        "hr",
        "img",
        "input",
        "link",
        "meta",
        "param",
        "source",
        "track",
        "wbr",
    }
)

# Elements whose text content is taken verbatim (no entity decoding, no markup).
RAWTEXT_ELEMENTS = frozenset({"script", "style"})


class Node:
    """Base class; only carries the parent link."""

    __slots__ = ("parent",)

    def __init__(self) -> None:
        self.parent: Element | None = None

    def clone(self) -> "Node":
        raise NotImplementedError


class Text(Node):
    __slots__ = ("content",)

    def __init__(self, content: str) -> None:
        super().__init__()
        self.content = content

    def clone(self) -> "Text":
        return Text(self.content)

    def __repr__(self) -> str:
        return f"Text({self.content!r})"


class Comment(Node):
    __slots__ = ("content",)

    def __init__(self, content: str) -> None:
        super().__init__()
        self.content = content

    def clone(self) -> "Comment":
        return Comment(self.content)

    def __repr__(self) -> str:
        return f"Comment({self.content!r})"


class Element(Node):
    __slots__ = ("tag", "attrs", "children")

    def __init__(self, tag: str, attrs: dict[str, str] | None = None) -> None:
        super().__init__()
        self.tag = tag
        self.attrs: dict[str, str] = dict(attrs) if attrs else {}
        self.children: list[Node] = []

    def append(self, child: Node) -> None:
        child.parent = self
        self.children.append(child)

    def insert(self, index: int, child: Node) -> None:
        child.parent = self
        self.children.insert(index, child)

    def remove(self, child: Node) -> None:
        self.children.remove(child)
        child.parent = None

    def clone(self) -> "Element":
        el = Element(self.tag, dict(self.attrs))
        for child in self.children:
            el.append(child.clone())
        return el

    def text_content(self) -> str:
        parts: list[str] = []
        for node in iter_nodes(self):
            if isinstance(node, Text):
                parts.append(node.content)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Element({self.tag!r}, attrs={self.attrs!r}, children={len(self.children)})"


class Document:
    """Holds the single root element plus the source URL it was loaded from."""

    __slots__ = ("root", "source_url")

    def __init__(self, root: Element, source_url: str | None = None) -> None:
        self.root = root
        self.source_url = source_url
        root.parent = None

    def clone(self) -> "Document":
        return Document(self.root.clone(), self.source_url)

    def __repr__(self) -> str:
        return f"Document(root=<{self.root.tag}>, source_url={self.source_url!r})"


Treeish = Union[Document, Node]


def iter_nodes(tree: Treeish) -> Iterator[Node]:
    """Preorder walk. For a Document or Element the node itself comes first."""
    if isinstance(tree, Document):
        yield from iter_nodes(tree.root)
        return
    yield tree
    if isinstance(tree, Element):
        for child in tree.children:
            yield from iter_nodes(child)


def _clean_attrs(el: Element, ignore_marker_attrs: bool) -> dict[str, str]:
    if not ignore_marker_attrs:
        return el.attrs
    return {k: v for k, v in el.attrs.items() if not k.startswith("data-mowa-")}


def isomorphic(a: Treeish, b: Treeish, ignore_marker_attrs: bool = False) -> bool:
    """Structural equality: tags, attributes (as sets of pairs), text, child order."""
    if isinstance(a, Document):
        a = a.root
    if isinstance(b, Document):
        b = b.root
    if type(a) is not type(b):
        return False
    if isinstance(a, Text):
        return a.content == b.content  # type: ignore[union-attr]
    if isinstance(a, Comment):
        return a.content == b.content  # type: ignore[union-attr]
    assert isinstance(a, Element) and isinstance(b, Element)
    if a.tag != b.tag:
        return False
    if _clean_attrs(a, ignore_marker_attrs) != _clean_attrs(b, ignore_marker_attrs):
        return False
    if len(a.children) != len(b.children):
        return False
    return all(
        isomorphic(ca, cb, ignore_marker_attrs)
        for ca, cb in zip(a.children, b.children)
    )


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def escape_text(value: str) -> str:
    return value.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def escape_attr(value: str) -> str:
    return (
        value.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _emit(node: Node, out: list[str], raw: bool) -> None:
    if isinstance(node, Text):
        out.append(node.content if raw else escape_text(node.content))
        return
    if isinstance(node, Comment):
        out.append(f"<!--{node.content}-->")
        return
    assert isinstance(node, Element)
    out.append(f"<{node.tag}")
    for name, value in node.attrs.items():
        out.append(f' {name}="{escape_attr(value)}"')
    out.append(">")
    if node.tag in VOID_ELEMENTS:
        return
    child_raw = node.tag in RAWTEXT_ELEMENTS
    for child in node.children:
        _emit(child, out, child_raw)
    out.append(f"</{node.tag}>")


def serialize_html(doc: Document) -> bytes:
    """UTF-8 bytes; attribute order is the stored order, void elements unclosed."""
    out: list[str] = []
    _emit(doc.root, out, raw=False)
    return "".join(out).encode("utf-8")
