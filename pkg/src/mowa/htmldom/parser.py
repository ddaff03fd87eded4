"""Lenient HTML parser with fixed, enumerated recovery rules.

Deterministic by construction: the same bytes always produce the same tree.
Recovery rules (all of them):
- unknown/unmatched end tags are ignored
- an end tag matching an open ancestor closes everything down to it
- a start tag listed in AUTOCLOSE first closes the named open elements
- void elements never take children; <x/> self-closing is honored
- open elements are auto-closed at end of input
- doctypes and processing instructions are skipped
- comments are kept
- only the five named entities (amp, lt, gt, quot, apos) are decoded;
  any other ampersand sequence stays literal
- script/style content is raw text up to the matching end tag
- tag and attribute names are lowercased; last duplicate attribute wins
- whitespace-only text between top-level elements is dropped
- a document with exactly one top-level element uses it as the root;
  anything else (including empty input) is wrapped in a synthetic <html> root
"""

from __future__ import annotations

import re

from .nodes import Comment, Document, Element, Node, RAWTEXT_ELEMENTS, Text, VOID_ELEMENTS

# Opening the key tag first closes any open element whose tag is in the value set.
AUTOCLOSE: dict[str, frozenset[str]] = {
    "p": frozenset({"p"}),
    "li": frozenset({"li"}),
    "td": frozenset({"td", "th"}),
    "th": frozenset({"td", "th"}),
    "tr": frozenset({"tr", "td", "th"}),
}

_ENTITY = {"amp": "&", "lt": "<", "gt": ">", "quot": '"', "apos": "'"}
_ENTITY_RE = re.compile(r"&(amp|lt|gt|quot|apos);")

_NAME_START = re.compile(r"[A-Za-z]")
_WS = " \t\n\r\f"


def _decode_entities(text: str) -> str:
    return _ENTITY_RE.sub(lambda m: _ENTITY[m.group(1)], text)


def _append_text(parent: Element, content: str) -> None:
    # merge with a trailing text node so reparsing a serialization never
    # changes the tree shape
    if parent.children and isinstance(parent.children[-1], Text):
        parent.children[-1].content += content
        return
    parent.append(Text(content))


class _Scanner:
    def __init__(self, source: str) -> None:
        self.s = source
        self.i = 0

    def eof(self) -> bool:
        return self.i >= len(self.s)

    def skip_ws(self) -> None:
        while self.i < len(self.s) and self.s[self.i] in _WS:
            self.i += 1

    def read_name(self) -> str:
        start = self.i
        while self.i < len(self.s) and self.s[self.i] not in _WS and self.s[self.i] not in "=/><\"'":
            self.i += 1
        return self.s[start : self.i]

    def read_attrs(self) -> tuple[dict[str, str], bool]:
        """Consume up to and including '>'. Returns (attrs, self_closing)."""
        attrs: dict[str, str] = {}
        self_closing = False
        while True:
            self.skip_ws()
            if self.eof():
                return attrs, self_closing
            ch = self.s[self.i]
            if ch == ">":
                self.i += 1
                return attrs, self_closing
            if ch == "/":
                self.i += 1
                self.skip_ws()
                if not self.eof() and self.s[self.i] == ">":
                    self.i += 1
                    return attrs, True
                continue
            name = self.read_name()
            if not name:
                # unparseable byte inside a tag: skip it
                self.i += 1
                continue
            name = name.lower()
            self.skip_ws()
            value = ""
            if not self.eof() and self.s[self.i] == "=":
                self.i += 1
                self.skip_ws()
                if not self.eof() and self.s[self.i] in "\"'":
                    quote = self.s[self.i]
                    self.i += 1
                    end = self.s.find(quote, self.i)
                    if end < 0:
                        value = self.s[self.i :]
                        self.i = len(self.s)
                    else:
                        value = self.s[self.i : end]
                        self.i = end + 1
                else:
                    start = self.i
                    while self.i < len(self.s) and self.s[self.i] not in _WS and self.s[self.i] != ">":
                        self.i += 1
                    value = self.s[start : self.i]
            attrs[name] = _decode_entities(value)


def parse_html(data: bytes | str, source_url: str | None = None) -> Document:
    """Parse leniently; never raises on malformed markup."""
    if isinstance(data, bytes):
        source = data.decode("utf-8", errors="replace")
    else:
        source = data
    top = Element("#top")
    stack: list[Element] = [top]
    sc = _Scanner(source)
    s = source

    while not sc.eof():
        lt = s.find("<", sc.i)
        if lt < 0:
            _append_text(stack[-1], _decode_entities(s[sc.i :]))
            break
        if lt > sc.i:
            _append_text(stack[-1], _decode_entities(s[sc.i : lt]))
        sc.i = lt

        if s.startswith("<!--", sc.i):
            end = s.find("-->", sc.i + 4)
            if end < 0:
                stack[-1].append(Comment(s[sc.i + 4 :]))
                break
            stack[-1].append(Comment(s[sc.i + 4 : end]))
            sc.i = end + 3
            continue
        if s.startswith("<!", sc.i) or s.startswith("<?", sc.i):
            end = s.find(">", sc.i)
            sc.i = len(s) if end < 0 else end + 1
            continue
        if s.startswith("</", sc.i):
            sc.i += 2
            name = sc.read_name().lower()
            end = s.find(">", sc.i)
            sc.i = len(s) if end < 0 else end + 1
            if not name:
                continue
            open_tags = [el.tag for el in stack[1:]]
            if name in open_tags:
                while stack[-1].tag != name:
                    stack.pop()
                stack.pop()
            continue
        if len(s) > sc.i + 1 and _NAME_START.match(s[sc.i + 1]):
            sc.i += 1
            name = sc.read_name().lower()
            attrs, self_closing = sc.read_attrs()
            rule = AUTOCLOSE.get(name)
            if rule is not None:
                while len(stack) > 1 and stack[-1].tag in rule:
                    stack.pop()
            el = Element(name, attrs)
            stack[-1].append(el)
            if name in VOID_ELEMENTS or self_closing:
                continue
            if name in RAWTEXT_ELEMENTS:
                close_re = re.compile(rf"</{re.escape(name)}\b", re.IGNORECASE)
                m = close_re.search(s, sc.i)
                if m is None:
                    raw = s[sc.i :]
                    sc.i = len(s)
                else:
                    raw = s[sc.i : m.start()]
                    gt = s.find(">", m.end())
                    sc.i = len(s) if gt < 0 else gt + 1
                if raw:
                    el.append(Text(raw))
                continue
            stack.append(el)
            continue
        # bare '<' that does not open anything: literal text
        _append_text(stack[-1], "<")
        sc.i += 1

    roots: list[Node] = []
    for child in top.children:
        if isinstance(child, Text) and not child.content.strip():
            continue
        roots.append(child)
    if len(roots) == 1 and isinstance(roots[0], Element):
        root = roots[0]
        root.parent = None
        return Document(root, source_url)
    html = Element("html")
    for node in roots:
        html.append(node)
    return Document(html, source_url)
