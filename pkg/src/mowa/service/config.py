"""Service configuration: flags win over environment, environment over defaults."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

DEFAULT_ADDR = "127.0.0.1:8640"

ENV_ADDR = "MOWA_ADDR"
ENV_STORE = "MOWA_STORE"
ENV_CORPUS = "MOWA_CORPUS"
ENV_LOCALE = "MOWA_LOCALE"


@dataclass(frozen=True)
class ServiceConfig:
    addr: str = DEFAULT_ADDR
    store_dir: Path | None = None
    corpus_dir: Path | None = None
    locale: str = "en"

    @classmethod
    def from_env(
        cls,
        addr: str | None = None,
        store_dir: str | Path | None = None,
        corpus_dir: str | Path | None = None,
        locale: str | None = None,
    ) -> "ServiceConfig":
        """Explicit arguments (CLI flags) override MOWA_* variables."""
        addr = addr or os.environ.get(ENV_ADDR) or DEFAULT_ADDR
        store = store_dir or os.environ.get(ENV_STORE)
        corpus = corpus_dir or os.environ.get(ENV_CORPUS)
        locale = locale or os.environ.get(ENV_LOCALE) or "en"
        return cls(
            addr=addr,
            store_dir=Path(store) if store else None,
            corpus_dir=Path(corpus) if corpus else None,
            locale=locale,
        )

    def host_port(self) -> tuple[str, int]:
        host, _, port = self.addr.rpartition(":")
        return host or "127.0.0.1", int(port)
