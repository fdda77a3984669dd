"""Reading input documents from files, URLs and stdin."""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Optional

import requests

from .errors import FetchError

DEFAULT_TIMEOUT = 30.0
DEFAULT_MAX_REDIRECTS = 5


def is_url(source: str) -> bool:
    return source.startswith(("http://", "https://"))


def fetch_url(
    url: str,
    timeout: float = DEFAULT_TIMEOUT,
    max_redirects: int = DEFAULT_MAX_REDIRECTS,
    max_bytes: Optional[int] = None,
) -> bytes:
    """Fetch a document over HTTP(S); any transport problem becomes FetchError."""
    session = requests.Session()
    session.max_redirects = max_redirects
    try:
        response = session.get(url, timeout=timeout, allow_redirects=True)
        response.raise_for_status()
    except requests.RequestException as exc:
        raise FetchError(f"could not fetch {url}: {exc}") from exc
    finally:
        session.close()
    if max_bytes is not None and len(response.content) > max_bytes:
        raise FetchError(f"{url}: response exceeds {max_bytes} bytes")
    return response.content


def read_source(source: str) -> bytes:
    """Resolve a CLI input: ``-`` for stdin, a URL, or a file path."""
    if source == "-":
        return sys.stdin.buffer.read()
    if is_url(source):
        return fetch_url(source)
    return Path(source).read_bytes()
