"""Small XPath dialect: absolute paths, child/descendant axes, simple predicates.

Grammar (anything outside it is a syntax error):

    path     := step+ ( "/@" name )?
    step     := ("/" | "//") nodetest pred*
    nodetest := name | "*" | "text()"
    pred     := "[" positive-integer "]" | "[@" name "='" value "']"

"//" is the descendant axis, "/" the child axis. A positional predicate
selects nodes whose 1-based position among siblings matching the same node
test equals n; predicates are conjunctive. The optional trailing "/@name"
restricts the result to elements carrying that attribute (child axis only).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from .nodes import Document, Element, Node, Text, iter_nodes


class XPathSyntax(ValueError):
    """Raised when an expression is outside the supported dialect."""

    def __init__(self, expression: str, position: int, reason: str) -> None:
        super().__init__(f"bad xpath at offset {position}: {reason} in {expression!r}")
        self.expression = expression
        self.position = position
        self.reason = reason


# node tests: ("name", tag) | ("wild",) | ("text",)
NodeTest = tuple


@dataclass(frozen=True)
class Predicate:
    kind: str  # "pos" | "attr"
    index: int = 0
    name: str = ""
    value: str = ""


@dataclass(frozen=True)
class Step:
    axis: str  # "child" | "descendant"
    test: NodeTest
    predicates: tuple[Predicate, ...] = ()


@dataclass(frozen=True)
class XPathExpr:
    steps: tuple[Step, ...]
    attribute: str | None = None
    source: str = field(default="", compare=False)

    def __str__(self) -> str:
        return self.source


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.-]*")


def parse_xpath(expression: str) -> XPathExpr:
    s = expression
    i = 0
    steps: list[Step] = []
    attribute: str | None = None
    if not s.startswith("/"):
        raise XPathSyntax(s, 0, "path must start with '/' or '//'")
    while i < len(s):
        if s.startswith("//", i):
            axis = "descendant"
            i += 2
        elif s[i] == "/":
            axis = "child"
            i += 1
        else:
            raise XPathSyntax(s, i, "expected '/' or '//'")
        if i >= len(s):
            raise XPathSyntax(s, i, "trailing slash")
        if s[i] == "@":
            if axis != "child":
                raise XPathSyntax(s, i, "attribute tail needs '/@', not '//@'")
            if not steps:
                raise XPathSyntax(s, i, "attribute tail needs at least one step")
            m = _NAME_RE.match(s, i + 1)
            if not m:
                raise XPathSyntax(s, i + 1, "expected attribute name")
            attribute = m.group(0)
            i = m.end()
            if i != len(s):
                raise XPathSyntax(s, i, "attribute tail must end the path")
            break
        if s.startswith("text()", i):
            test: NodeTest = ("text",)
            i += 6
        elif s[i] == "*":
            test = ("wild",)
            i += 1
        else:
            m = _NAME_RE.match(s, i)
            if not m:
                raise XPathSyntax(s, i, "expected node test")
            test = ("name", m.group(0))
            i = m.end()
        predicates: list[Predicate] = []
        while i < len(s) and s[i] == "[":
            i += 1
            if i < len(s) and s[i] == "@":
                m = _NAME_RE.match(s, i + 1)
                if not m:
                    raise XPathSyntax(s, i + 1, "expected attribute name")
                name = m.group(0)
                i = m.end()
                if not s.startswith("='", i):
                    raise XPathSyntax(s, i, "expected ='value'")
                i += 2
                end = s.find("'", i)
                if end < 0:
                    raise XPathSyntax(s, i, "unterminated attribute value")
                predicates.append(Predicate("attr", name=name, value=s[i:end]))
                i = end + 1
            else:
                m = re.match(r"[0-9]+", s[i:])
                if not m:
                    raise XPathSyntax(s, i, "expected position or @attribute")
                index = int(m.group(0))
                if index < 1:
                    raise XPathSyntax(s, i, "positions are 1-based")
                i += m.end()
                predicates.append(Predicate("pos", index=index))
            if i >= len(s) or s[i] != "]":
                raise XPathSyntax(s, i, "expected ']'")
            i += 1
        steps.append(Step(axis, test, tuple(predicates)))
    if not steps:
        raise XPathSyntax(s, 0, "empty path")
    return XPathExpr(tuple(steps), attribute, source=expression)


def _matches_test(node: Node, test: NodeTest) -> bool:
    if test[0] == "text":
        return isinstance(node, Text)
    if not isinstance(node, Element):
        return False
    if test[0] == "wild":
        return True
    return node.tag == test[1]


def _siblings(node: Node, root_children: list[Node]) -> list[Node]:
    if any(node is top for top in root_children):
        return root_children
    if node.parent is not None:
        return node.parent.children
    return [node]


def _passes(node: Node, test: NodeTest, pred: Predicate, root_children: list[Node]) -> bool:
    if pred.kind == "attr":
        return isinstance(node, Element) and node.attrs.get(pred.name) == pred.value
    position = 0
    for sib in _siblings(node, root_children):
        if _matches_test(sib, test):
            position += 1
        if sib is node:
            return position == pred.index
    return False


def eval_xpath(tree: Union[Document, Element], expr: XPathExpr) -> list[Node]:
    """All matches in document order; empty list when nothing matches."""
    if isinstance(tree, Document):
        top_children: list[Node] = [tree.root]
    else:
        top_children = [tree]
    order: dict[int, int] = {}
    for top in top_children:
        for node in iter_nodes(top):
            order[id(node)] = len(order)

    virtual_doc = object()

    def children_of(ctx: object) -> list[Node]:
        if ctx is virtual_doc:
            return top_children
        if isinstance(ctx, Element):
            return ctx.children
        return []

    def descendants_of(ctx: object) -> list[Node]:
        out: list[Node] = []
        for child in children_of(ctx):
            for node in iter_nodes(child):
                out.append(node)
        return out

    context: list[object] = [virtual_doc]
    for step in expr.steps:
        picked: list[Node] = []
        seen: set[int] = set()
        for ctx in context:
            pool = children_of(ctx) if step.axis == "child" else descendants_of(ctx)
            for node in pool:
                if not _matches_test(node, step.test):
                    continue
                if not all(_passes(node, step.test, p, top_children) for p in step.predicates):
                    continue
                if id(node) not in seen:
                    seen.add(id(node))
                    picked.append(node)
        picked.sort(key=lambda n: order[id(n)])
        context = list(picked)
    result = [n for n in context if isinstance(n, Node)]
    if expr.attribute is not None:
        result = [
            n for n in result if isinstance(n, Element) and expr.attribute in n.attrs
        ]
    return result
