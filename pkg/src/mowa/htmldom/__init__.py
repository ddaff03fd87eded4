"""Lenient HTML document trees with a small XPath dialect and reversible edits."""

from .nodes import (
    Comment,
    Document,
    Element,
    Node,
    Text,
    VOID_ELEMENTS,
    iter_nodes,
    isomorphic,
    serialize_html,
)
from .parser import parse_html
from .xpath import XPathExpr, XPathSyntax, parse_xpath, eval_xpath
from .edit import (
    DetachedAnchor,
    Fragment,
    VoidElementTarget,
    LAYER_ATTR,
    KIND_ATTR,
    insert_fragment,
    strip_augmentations,
)

__all__ = [
    "Comment",
    "Document",
    "Element",
    "Node",
    "Text",
    "VOID_ELEMENTS",
    "iter_nodes",
    "isomorphic",
    "serialize_html",
    "parse_html",
    "XPathExpr",
    "XPathSyntax",
    "parse_xpath",
    "eval_xpath",
    "DetachedAnchor",
    "Fragment",
    "VoidElementTarget",
    "LAYER_ATTR",
    "KIND_ATTR",
    "insert_fragment",
    "strip_augmentations",
]
