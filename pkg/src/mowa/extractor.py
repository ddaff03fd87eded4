"""External content extraction over a snapshot cache.

Resolution is cache-first. Network is only touched when the policy is
cache_then_network AND a fetch callable was injected; the default
configuration is fully hermetic. Snapshots are keyed by normalized URL in
an index.json next to the page files.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
import time
from pathlib import Path
from typing import Callable

from .htmldom import Element, Text, parse_html, parse_xpath
from .htmldom.xpath import XPathExpr
from .urls import normalize_url

logger = logging.getLogger(__name__)

INDEX_NAME = "index.json"


class ExtractorError(Exception):
    pass


class PageUnavailable(ExtractorError):
    def __init__(self, url: str) -> None:
        super().__init__(f"page unavailable: {url}")
        self.url = url


class NoMatch(ExtractorError):
    def __init__(self, url: str, xpath: str) -> None:
        super().__init__(f"no node matches {xpath!r} at {url}")
        self.url = url
        self.xpath = xpath


class AttributeAbsent(ExtractorError):
    def __init__(self, name: str) -> None:
        super().__init__(f"matched node has no attribute {name!r}")
        self.name = name


FetchFn = Callable[[str], bytes]


class ExtractCache:
    """Directory of page snapshots keyed by normalized URL.

    policy: "cache_only" (never fetch) or "cache_then_network" (fetch misses
    through the injected callable and store the result).
    """

    def __init__(
        self,
        directory: str | Path,
        policy: str = "cache_only",
        fetch: FetchFn | None = None,
    ) -> None:
        if policy not in ("cache_only", "cache_then_network"):
            raise ValueError(f"unknown policy {policy!r}")
        self.directory = Path(directory)
        self.policy = policy
        self.fetch = fetch
        self._global_lock = threading.Lock()
        self._url_locks: dict[str, threading.Lock] = {}
        self._entries: dict[str, dict] = {}
        index_path = self.directory / INDEX_NAME
        if index_path.exists():
            self._entries = json.loads(index_path.read_text(encoding="utf-8"))

    @classmethod
    def from_corpus(cls, corpus_dir: str | Path) -> "ExtractCache":
        """Read-only view over a page corpus (manifest.json: url → path)."""
        corpus_dir = Path(corpus_dir)
        manifest = json.loads((corpus_dir / "manifest.json").read_text(encoding="utf-8"))
        cache = cls(corpus_dir, policy="cache_only")
        cache._entries = {url: {"file": rel, "fetched_at": None} for url, rel in manifest.items()}
        return cache

    def _lock_for(self, key: str) -> threading.Lock:
        with self._global_lock:
            if key not in self._url_locks:
                self._url_locks[key] = threading.Lock()
            return self._url_locks[key]

    def urls(self) -> set[str]:
        return set(self._entries)

    def has(self, url: str) -> bool:
        return normalize_url(url) in self._entries

    def path_for(self, url: str) -> Path:
        key = normalize_url(url)
        entry = self._entries.get(key)
        if entry is None:
            raise PageUnavailable(url)
        return self.directory / entry["file"]

    def load_page(self, url: str) -> bytes:
        key = normalize_url(url)
        if key not in self._entries:
            self.snapshot(url)
        path = self.path_for(url)
        if not path.exists():
            raise PageUnavailable(url)
        return path.read_bytes()

    def snapshot(self, url: str) -> Path:
        """Idempotent: returns the existing path when already cached."""
        key = normalize_url(url)
        with self._lock_for(key):
            if key in self._entries:
                return self.directory / self._entries[key]["file"]
            if self.policy != "cache_then_network" or self.fetch is None:
                raise PageUnavailable(url)
            body = self.fetch(url)
            name = hashlib.sha256(key.encode("utf-8")).hexdigest()[:16] + ".html"
            self.directory.mkdir(parents=True, exist_ok=True)
            (self.directory / name).write_bytes(body)
            self._entries[key] = {"file": name, "fetched_at": int(time.time())}
            self._write_index()
            logger.info("snapshotted %s -> %s", url, name)
            return self.directory / name

    def _write_index(self) -> None:
        # write-then-rename keeps readers from seeing a torn index
        index_path = self.directory / INDEX_NAME
        tmp = index_path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(self._entries, indent=2, sort_keys=True), encoding="utf-8")
        tmp.replace(index_path)


def _collapse_ws(text: str) -> str:
    return " ".join(text.split())


def extract(url: str, xpath: XPathExpr | str, mode: str, cache: ExtractCache) -> str:
    """First match wins. mode: "text" | "attribute:<name>"."""
    from .htmldom import eval_xpath

    expr = parse_xpath(xpath) if isinstance(xpath, str) else xpath
    body = cache.load_page(url)
    doc = parse_html(body, source_url=url)
    nodes = eval_xpath(doc, expr)
    if not nodes:
        raise NoMatch(url, str(expr) or "<xpath>")
    first = nodes[0]
    if mode == "text":
        if expr.attribute is not None and isinstance(first, Element):
            return _collapse_ws(first.attrs[expr.attribute])
        if isinstance(first, Text):
            return _collapse_ws(first.content)
        assert isinstance(first, Element)
        return _collapse_ws(first.text_content())
    if mode.startswith("attribute:") and len(mode) > len("attribute:"):
        name = mode.split(":", 1)[1]
        if not isinstance(first, Element) or name not in first.attrs:
            raise AttributeAbsent(name)
        return first.attrs[name]
    raise ValueError(f"unknown extract mode {mode!r}")


def snapshot(url: str, cache: ExtractCache) -> Path:
    return cache.snapshot(url)
