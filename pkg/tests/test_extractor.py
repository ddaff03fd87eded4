from __future__ import annotations

from pathlib import Path

import pytest

from mowa.extractor import (
    AttributeAbsent,
    ExtractCache,
    NoMatch,
    PageUnavailable,
    extract,
    snapshot,
)

from oracles import stdlib_attr_by_id, stdlib_text_by_id

PAGE = b"""
<html><body>
  <h1 id="title">  Hello
     world </h1>
  <img id="pic" src="/a.png">
  <p id="empty"></p>
</body></html>
"""


def counting_fetch(pages: dict[str, bytes]):
    calls: list[str] = []

    def fetch(url: str) -> bytes:
        calls.append(url)
        return pages[url]

    return fetch, calls


@pytest.fixture()
def cache(tmp_path: Path):
    fetch, calls = counting_fetch({"https://site.example/p": PAGE})
    c = ExtractCache(tmp_path / "cache", policy="cache_then_network", fetch=fetch)
    return c, calls


# ---------------------------------------------------------------------------
# hermeticity
# ---------------------------------------------------------------------------

def test_cache_only_never_touches_network(tmp_path):
    def forbidden(url: str) -> bytes:
        raise AssertionError("cache_only must not fetch")

    c = ExtractCache(tmp_path, policy="cache_only", fetch=forbidden)
    with pytest.raises(PageUnavailable):
        snapshot("https://site.example/p", c)
    with pytest.raises(PageUnavailable):
        extract("https://site.example/p", "//h1", "text", c)


def test_network_policy_without_fetch_is_still_hermetic(tmp_path):
    c = ExtractCache(tmp_path, policy="cache_then_network")
    with pytest.raises(PageUnavailable):
        extract("https://site.example/p", "//h1", "text", c)


def test_unknown_policy_rejected(tmp_path):
    with pytest.raises(ValueError):
        ExtractCache(tmp_path, policy="always_network")


# ---------------------------------------------------------------------------
# snapshot behavior
# ---------------------------------------------------------------------------

def test_snapshot_fetches_once_then_reuses(cache):
    c, calls = cache
    first = snapshot("https://site.example/p", c)
    second = snapshot("https://site.example/p", c)
    assert first == second
    assert calls == ["https://site.example/p"]
    assert first.read_bytes() == PAGE


def test_snapshot_normalizes_url_key(cache):
    c, calls = cache
    snapshot("https://site.example/p", c)
    # same resource addressed with a fragment and default port: still cached
    assert c.has("https://site.example:443/p#frag")
    extract("HTTPS://site.example/p", "//h1", "text", c)
    assert len(calls) == 1


def test_index_survives_process_restart(cache, tmp_path):
    c, calls = cache
    snapshot("https://site.example/p", c)
    reopened = ExtractCache(c.directory, policy="cache_only")
    assert reopened.has("https://site.example/p")
    assert extract("https://site.example/p", "//img/@src", "attribute:src", reopened) == "/a.png"
    assert calls == ["https://site.example/p"]


# ---------------------------------------------------------------------------
# extraction modes
# ---------------------------------------------------------------------------

def test_extract_text_collapses_whitespace(cache):
    c, _ = cache
    assert extract("https://site.example/p", "//h1[@id='title']", "text", c) == "Hello world"


def test_extract_attribute_mode(cache):
    c, _ = cache
    assert extract("https://site.example/p", "//img[@id='pic']", "attribute:src", c) == "/a.png"


def test_extract_first_match_wins(cache):
    c, _ = cache
    assert extract("https://site.example/p", "//*[@id='title']", "text", c) == "Hello world"


def test_extract_empty_text_is_empty_string(cache):
    c, _ = cache
    assert extract("https://site.example/p", "//p[@id='empty']", "text", c) == ""


def test_extract_no_match(cache):
    c, _ = cache
    with pytest.raises(NoMatch):
        extract("https://site.example/p", "//table", "text", c)


def test_extract_attribute_absent(cache):
    c, _ = cache
    with pytest.raises(AttributeAbsent):
        extract("https://site.example/p", "//h1", "attribute:href", c)


def test_extract_unknown_mode(cache):
    c, _ = cache
    with pytest.raises(ValueError):
        extract("https://site.example/p", "//h1", "outer-html", c)


def test_extract_idempotent_single_fetch(cache):
    c, calls = cache
    a = extract("https://site.example/p", "//h1", "text", c)
    b = extract("https://site.example/p", "//h1", "text", c)
    assert a == b
    assert len(calls) == 1


# ---------------------------------------------------------------------------
# corpus-backed extraction vs the stdlib parser
# ---------------------------------------------------------------------------

SLUGS = [
    "toxodon",
    "glyptodon",
    "megatherium",
    "macrauchenia",
    "mylodon",
    "scelidotherium",
    "doedicurus",
    "smilodon",
    "hippidion",
    "panochthus",
    "lestodon",
    "eutatus",
]

COLLECTION = "https://museum.example/collection"


def test_from_corpus_is_read_only(fixtures_dir):
    corpus_dir = fixtures_dir / "museum" / "corpus"
    before = sorted(p.name for p in corpus_dir.iterdir())
    c = ExtractCache.from_corpus(corpus_dir)
    extract(COLLECTION, "//p[@id='desc-toxodon']", "text", c)
    assert sorted(p.name for p in corpus_dir.iterdir()) == before
    with pytest.raises(PageUnavailable):
        extract("https://museum.example/not-there", "//p", "text", c)


def test_corpus_descriptions_match_stdlib_parser(fixtures_dir, museum_cache):
    html = (fixtures_dir / "museum" / "corpus" / "collection.html").read_text(encoding="utf-8")
    for slug in SLUGS:
        engine = extract(COLLECTION, f"//p[@id='desc-{slug}']", "text", museum_cache)
        oracle = stdlib_text_by_id(html, f"desc-{slug}")
        assert oracle is not None and engine == oracle, slug


def test_corpus_images_match_stdlib_parser(fixtures_dir, museum_cache):
    html = (fixtures_dir / "museum" / "corpus" / "collection.html").read_text(encoding="utf-8")
    for slug in SLUGS:
        engine = extract(COLLECTION, f"//img[@id='pic-{slug}']", "attribute:src", museum_cache)
        oracle = stdlib_attr_by_id(html, f"pic-{slug}", "src")
        assert oracle is not None and engine == oracle, slug
