"""Message catalogs.

One JSON file per locale under locales/. English is the complete reference
catalog; every other shipped locale must cover exactly the same key set
(enforced by tests). Lookup falls back to English, then to the key itself so
a missing entry never crashes a response path.
"""

from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path

LOCALES_DIR = Path(__file__).parent / "locales"
DEFAULT_LOCALE = "en"


def available_locales() -> list[str]:
    return sorted(p.stem for p in LOCALES_DIR.glob("*.json"))


@lru_cache(maxsize=None)
def catalog(locale: str) -> dict[str, str]:
    path = LOCALES_DIR / f"{locale}.json"
    if not path.exists():
        return {}
    return json.loads(path.read_text(encoding="utf-8"))


def message(key: str, locale: str = DEFAULT_LOCALE) -> str:
    text = catalog(locale).get(key)
    if text is None and locale != DEFAULT_LOCALE:
        text = catalog(DEFAULT_LOCALE).get(key)
    return text if text is not None else key
