"""Internal JSON Reference and JSON Pointer resolution.

Only document-local references (fragment starting with ``#``) are resolved;
anything else raises :class:`ExternalReferenceError` so callers can decide
whether to skip or fail.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Optional, Tuple, Union

from .errors import (
    CircularReferenceError,
    ExternalReferenceError,
    MalformedPointerError,
    PointerTargetMissingError,
)

_INVALID_ESCAPE = re.compile(r"~(?![01])")
_ARRAY_INDEX = re.compile(r"^(?:0|[1-9][0-9]*)$")


def escape_token(token: str) -> str:
    """Escape one reference token (``~`` before ``/``, per the pointer grammar)."""
    return token.replace("~", "~0").replace("/", "~1")


def _unescape_token(token: str) -> str:
    if _INVALID_ESCAPE.search(token):
        raise MalformedPointerError(f"invalid escape sequence in pointer token {token!r}")
    return token.replace("~1", "/").replace("~0", "~")


@dataclass(frozen=True)
class JsonPointer:
    """A parsed JSON Pointer: a sequence of unescaped reference tokens."""

    tokens: Tuple[str, ...]

    def serialize(self) -> str:
        return "".join("/" + escape_token(t) for t in self.tokens)

    def __str__(self) -> str:
        return self.serialize()


def parse_pointer(text: str) -> JsonPointer:
    """Parse a pointer string like ``/paths/~1repos/get`` into tokens.

    The empty string denotes the whole document. Non-empty pointers must
    start with ``/``; ``~`` may only appear as ``~0`` or ``~1``.
    """
    if text == "":
        return JsonPointer(())
    if not text.startswith("/"):
        raise MalformedPointerError(f"pointer must be empty or start with '/': {text!r}")
    return JsonPointer(tuple(_unescape_token(part) for part in text.split("/")[1:]))


def _document_root(doc: Any) -> Any:
    # Accepts either a Document (anything exposing .root) or a raw tree.
    return getattr(doc, "root", doc)


def resolve_pointer(doc: Any, pointer: Union[JsonPointer, str]) -> Any:
    """Walk the document token by token and return the addressed node."""
    ptr = parse_pointer(pointer) if isinstance(pointer, str) else pointer
    node = _document_root(doc)
    for index, token in enumerate(ptr.tokens):
        if isinstance(node, dict):
            if token not in node:
                raise PointerTargetMissingError(ptr.serialize(), index)
            node = node[token]
        elif isinstance(node, list):
            if not _ARRAY_INDEX.match(token) or int(token) >= len(node):
                raise PointerTargetMissingError(ptr.serialize(), index)
            node = node[int(token)]
        else:
            raise PointerTargetMissingError(ptr.serialize(), index)
    return node


def is_reference(node: Any) -> bool:
    """True for reference objects: a mapping carrying a string ``$ref``."""
    return isinstance(node, dict) and isinstance(node.get("$ref"), str)


def reference_target(ref: str) -> JsonPointer:
    """Pointer addressed by an internal reference string (``#`` + pointer)."""
    if not ref.startswith("#"):
        raise ExternalReferenceError(ref)
    return parse_pointer(ref[1:])


def deref(doc: Any, node: Any, _seen: Optional[list] = None) -> Any:
    """Resolve ``node`` until it is not a reference; non-references pass through.

    References to references are followed. Revisiting a reference string on
    the current resolution path raises :class:`CircularReferenceError`;
    distinct paths reaching the same target (diamonds) are fine.
    """
    seen = list(_seen) if _seen else []
    current = node
    while is_reference(current):
        ref = current["$ref"]
        if ref in seen:
            raise CircularReferenceError(seen + [ref])
        seen.append(ref)
        current = resolve_pointer(doc, reference_target(ref))
    return current
