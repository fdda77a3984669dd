"""Human-facing output: unified diffs and generation statistics."""

from __future__ import annotations

import difflib
import json

from .links import GenerationReport
from .loader import serialize
from .model import Document

STATS_TEXT = "text"
STATS_JSON = "json"


def render_diff(before: Document, after: Document, format: str) -> str:
    """Line-based unified diff (3 context lines) between two documents.

    Both sides are serialized with the canonical serializer in the same
    format; identical documents yield an empty string.
    """
    before_text = serialize(before, format)
    after_text = serialize(after, format)
    if before_text == after_text:
        return ""
    diff = difflib.unified_diff(
        before_text.splitlines(keepends=True),
        after_text.splitlines(keepends=True),
        fromfile="before",
        tofile="after",
        n=3,
    )
    return "".join(diff)


def _plural(count: int, noun: str) -> str:
    return f"{count} {noun}" if count == 1 else f"{count} {noun}s"


def summarize(report: GenerationReport, mode: str = STATS_TEXT) -> str:
    """Textual or JSON rendering of a generation report."""
    if mode == STATS_JSON:
        return json.dumps(report.to_dict(), indent=2) + "\n"
    if mode != STATS_TEXT:
        raise ValueError(f"unknown stats mode: {mode!r}")

    lines = [
        f"{_plural(report.links_added, 'link')} added "
        f"({_plural(report.pairs_considered, 'pair')} considered, "
        f"{_plural(report.links_skipped_duplicate, 'duplicate')} skipped)",
        f"{_plural(report.parameters_mapped, 'parameter')} mapped, "
        f"{_plural(report.child_params_unmapped, 'child parameter')} left unmapped",
    ]
    for record in report.per_link:
        lines.append(
            f'  {record.parent} -> {record.child}: link "{record.name}" '
            f"({_plural(record.mapping_count, 'mapping')})"
        )
    lines.append(_plural(len(report.warnings), "warning"))
    for warning in report.warnings:
        lines.append(f"  warning: {warning}")
    return "\n".join(lines) + "\n"
