"""Reversible document edits: marked fragment insertion and stripping.

Inserted content is tracked with two marker attributes on each top-level
inserted element:
- data-mowa-layer: which layer put it there
- data-mowa-kind: which augmenter kind rendered it

Attribute mutations performed by augmenters stamp data-mowa-layer (without
data-mowa-kind) on the touched element; stripping such an element removes all
data-mowa-* attributes but keeps the element. That split is what makes both
insertion and in-place mutation reversible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .nodes import Document, Element, Node, VOID_ELEMENTS
from .xpath import XPathExpr

LAYER_ATTR = "data-mowa-layer"
KIND_ATTR = "data-mowa-kind"
MARKER_PREFIX = "data-mowa-"

POSITIONS = ("before", "after", "first_child", "last_child", "replace_children")


class DetachedAnchor(ValueError):
    """Anchor node is not part of the target document (or has no sibling slot)."""


class VoidElementTarget(ValueError):
    """Child-position insertion into a void element."""


@dataclass
class Fragment:
    """Nodes to insert plus attribute mutations to perform.

    attr_ops entries are (xpath, attribute-name, value); they are executed by
    the caller against the whole document after the nodes go in.
    """

    nodes: list[Node] = field(default_factory=list)
    attr_ops: list[tuple[XPathExpr, str, str]] = field(default_factory=list)


def _in_document(doc: Document, node: Node) -> bool:
    current: Node | None = node
    while current is not None:
        if current is doc.root:
            return True
        current = current.parent
    return False


def insert_fragment(doc: Document, anchor: Node, position: str, fragment: Fragment) -> Document:
    """Insert fragment.nodes relative to anchor. Mutates and returns doc."""
    if position not in POSITIONS:
        raise ValueError(f"unknown position {position!r}")
    if not _in_document(doc, anchor):
        raise DetachedAnchor(f"anchor {anchor!r} is not attached to the document")
    for node in fragment.nodes:
        if isinstance(node, Element):
            if LAYER_ATTR not in node.attrs or KIND_ATTR not in node.attrs:
                raise ValueError("top-level fragment elements must carry both marker attributes")

    if position in ("before", "after"):
        parent = anchor.parent
        if parent is None:
            raise DetachedAnchor("document root has no sibling slot")
        index = next(i for i, c in enumerate(parent.children) if c is anchor)
        if position == "after":
            index += 1
        for offset, node in enumerate(fragment.nodes):
            parent.insert(index + offset, node)
        return doc

    if not isinstance(anchor, Element):
        raise VoidElementTarget("child positions need an element anchor")
    if anchor.tag in VOID_ELEMENTS:
        raise VoidElementTarget(f"<{anchor.tag}> cannot take children")
    if position == "first_child":
        for offset, node in enumerate(fragment.nodes):
            anchor.insert(offset, node)
    elif position == "last_child":
        for node in fragment.nodes:
            anchor.append(node)
    else:  # replace_children
        for child in list(anchor.children):
            anchor.remove(child)
        for node in fragment.nodes:
            anchor.append(node)
    return doc


def strip_augmentations(doc: Document, layer_id: str | None = None) -> Document:
    """Remove augmentations (all layers, or just one). Mutates and returns doc."""

    def in_scope(el: Element) -> bool:
        marker = el.attrs.get(LAYER_ATTR)
        if marker is None:
            return False
        return layer_id is None or marker == layer_id

    def walk(el: Element) -> None:
        kept: list[Node] = []
        for child in el.children:
            if isinstance(child, Element) and in_scope(child) and KIND_ATTR in child.attrs:
                child.parent = None
                continue
            kept.append(child)
        el.children = kept
        if in_scope(el) and KIND_ATTR not in el.attrs:
            for name in [a for a in el.attrs if a.startswith(MARKER_PREFIX)]:
                del el.attrs[name]
        for child in el.children:
            if isinstance(child, Element):
                walk(child)

    walk(doc.root)
    return doc
