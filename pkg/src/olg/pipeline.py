"""End-to-end runs shared by the CLI and the HTTP service.

Both frontends must produce byte-identical documents for the same input and
options, so the parse -> convert -> generate -> serialize sequence lives
here and nowhere else.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .analyzer import TranslatabilityReport, analyze_document
from .diffstats import render_diff
from .links import DEFAULT_LINK_DESCRIPTION, GenerationOptions, GenerationReport, generate_links
from .loader import VersionTag, detect_format, parse_document, serialize


@dataclass
class GenerationOutcome:
    document_text: str
    diff_text: str
    report: GenerationReport
    version: VersionTag
    output_format: str


def run_generation(
    data: Union[bytes, str],
    output_format: Optional[str] = None,
    require_mapping: bool = True,
    link_description: Optional[str] = None,
    compute_diff: bool = True,
) -> GenerationOutcome:
    """Parse, convert if needed, add links, and serialize deterministically.

    ``output_format`` defaults to the input's detected format. Conversion
    warnings are folded into the report ahead of generation warnings.
    """
    input_format = detect_format(data)
    parse_warnings: list = []
    doc, tag = parse_document(data, warnings=parse_warnings)
    options = GenerationOptions(
        require_mapping=require_mapping,
        link_description=link_description or DEFAULT_LINK_DESCRIPTION,
    )
    result, report = generate_links(doc, options)
    report.warnings[0:0] = parse_warnings

    fmt = output_format or input_format
    document_text = serialize(result, fmt)
    diff_text = render_diff(doc, result, fmt) if compute_diff else ""
    return GenerationOutcome(
        document_text=document_text,
        diff_text=diff_text,
        report=report,
        version=tag,
        output_format=fmt,
    )


def run_analysis(data: Union[bytes, str]) -> TranslatabilityReport:
    """Parse (converting Swagger 2.0 first) and analyze one document."""
    doc, _tag = parse_document(data)
    return analyze_document(doc)
