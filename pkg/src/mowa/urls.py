"""URL normalization and pattern targets.

Normal form: lowercase scheme and host, default ports dropped, fragment
dropped, query kept, empty path becomes "/". Layer patterns are matched
against normalized URLs; `*` matches any span, including "/".
"""

from __future__ import annotations

import re
from urllib.parse import urlsplit, urlunsplit

_DEFAULT_PORTS = {("http", 80), ("https", 443)}


def normalize_url(url: str) -> str:
    parts = urlsplit(url)
    scheme = parts.scheme.lower()
    host = (parts.hostname or "").lower()
    try:
        port = parts.port
    except ValueError:
        port = None
    if port is None or (scheme, port) in _DEFAULT_PORTS:
        netloc = host
    else:
        netloc = f"{host}:{port}"
    path = parts.path or "/"
    return urlunsplit((scheme, netloc, path, parts.query, ""))


def matches_pattern(glob: str, url: str) -> bool:
    """True when the normalized url matches the glob (* = any span)."""
    target = normalize_url(url)
    regex = ".*".join(re.escape(part) for part in glob.split("*"))
    return re.fullmatch(regex, target) is not None
