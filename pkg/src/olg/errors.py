"""Exception types shared across the package."""

from __future__ import annotations

from typing import Optional, Sequence


class OlgError(Exception):
    """Base class for all errors raised by this package."""


class EmptyInputError(OlgError):
    """Raised when an input document is empty."""


class DocumentSyntaxError(OlgError):
    """The input text is not valid JSON/YAML, or not an object at the root.

    ``line`` and ``column`` are 1-based when the underlying parser reported
    a position, otherwise ``None``.
    """

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        super().__init__(message)
        self.line = line
        self.column = column


class UnsupportedVersionError(OlgError):
    """The document is neither Swagger 2.0 nor OpenAPI 3.x."""

    def __init__(self, raw_version: str):
        super().__init__(f"unsupported document version: {raw_version!r}")
        self.raw_version = raw_version


class ConversionError(OlgError):
    """The Swagger 2.0 document is too malformed for an unambiguous conversion."""


class MalformedPointerError(OlgError):
    """A JSON Pointer string violates the pointer grammar."""


class PointerTargetMissingError(OlgError):
    """A JSON Pointer token did not match anything in the document."""

    def __init__(self, pointer: str, token_index: int):
        super().__init__(f"pointer {pointer!r} has no target (failed at token {token_index})")
        self.pointer = pointer
        self.token_index = token_index


class ExternalReferenceError(OlgError):
    """A reference points outside the current document (no leading '#')."""

    def __init__(self, ref: str):
        super().__init__(f"external reference not supported: {ref!r}")
        self.ref = ref


class CircularReferenceError(OlgError):
    """Reference resolution revisited a reference already on the current path."""

    def __init__(self, chain: Sequence[str]):
        super().__init__("circular reference: " + " -> ".join(chain))
        self.chain = tuple(chain)


class UnresolvableReferenceError(OlgError):
    """A parameter (or similar) reference could not be resolved within the document."""


class InvalidDocumentError(OlgError):
    """The parsed tree violates a structural requirement (e.g. paths is not an object)."""


class FetchError(OlgError):
    """A URL input could not be fetched."""
