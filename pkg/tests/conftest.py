from __future__ import annotations

from pathlib import Path

import pytest

from mowa.appspec.xmlio import parse_spec
from mowa.extractor import ExtractCache
from mowa.weaver import PageCorpus

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "mowa" / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def museum_bytes() -> bytes:
    return (FIXTURES / "museum" / "app.mowa.xml").read_bytes()


@pytest.fixture(scope="session")
def db_media_bytes() -> bytes:
    return (FIXTURES / "db_media" / "app.mowa.xml").read_bytes()


@pytest.fixture()
def museum_spec(museum_bytes: bytes):
    # parsed fresh per test: specs hold mutable lists
    return parse_spec(museum_bytes)


@pytest.fixture()
def db_media_spec(db_media_bytes: bytes):
    return parse_spec(db_media_bytes)


@pytest.fixture(scope="session")
def museum_corpus() -> PageCorpus:
    return PageCorpus(FIXTURES / "museum" / "corpus")


@pytest.fixture(scope="session")
def db_media_corpus() -> PageCorpus:
    return PageCorpus(FIXTURES / "db_media" / "corpus")


@pytest.fixture()
def museum_cache(tmp_path: Path) -> ExtractCache:
    return ExtractCache.from_corpus(FIXTURES / "museum" / "corpus")


@pytest.fixture(scope="session")
def in_order_trace_bytes() -> bytes:
    return (FIXTURES / "museum" / "traces" / "in_order.jsonl").read_bytes()


@pytest.fixture(scope="session")
def out_of_order_trace_bytes() -> bytes:
    return (FIXTURES / "museum" / "traces" / "out_of_order.jsonl").read_bytes()


@pytest.fixture(scope="session")
def db_trace_bytes() -> bytes:
    return (FIXTURES / "db_media" / "traces" / "trace.jsonl").read_bytes()
