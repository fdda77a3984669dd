"""Measures how well a document (or corpus) would survive a GraphQL translation.

Three problem classes are detected: schema constraint keywords that a
GraphQL schema cannot express, operations with several success responses
(a translator keeps only the numerically smallest), and the presence or
absence of link definitions. Counting is positional: keywords are only
counted where a schema object can live, never in path templates,
descriptions or vendor extensions.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Sequence, Set, Tuple, Union

from .errors import OlgError
from .links import GenerationOptions, generate_links
from .loader import parse_document
from .model import Document

#: Schema keywords with no GraphQL schema equivalent, in report order.
UNTRANSLATABLE_KEYWORDS: Tuple[str, ...] = (
    "multipleOf",
    "minimum",
    "maximum",
    "exclusiveMinimum",
    "exclusiveMaximum",
    "minLength",
    "maxLength",
    "pattern",
    "minItems",
    "maxItems",
    "uniqueItems",
    "minProperties",
    "maxProperties",
    "oneOf",
    "anyOf",
    "not",
)

_SUCCESS_CODE = re.compile(r"^2[0-9][0-9]$")

#: Keys under a schema object whose values are themselves schema objects.
_SCHEMA_MAP_KEYS = ("properties", "patternProperties")
_SCHEMA_VALUE_KEYS = ("items", "not", "additionalProperties")
_SCHEMA_LIST_KEYS = ("oneOf", "anyOf", "allOf")


@dataclass
class TranslatabilityReport:
    """Per-document findings."""

    property_counts: Dict[str, int]
    property_present: Dict[str, bool]
    multi_success_operations: List[Tuple[str, str, Tuple[str, ...]]]
    has_any_flagged_property: bool
    preexisting_link_count: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "property_counts": dict(self.property_counts),
            "property_present": dict(self.property_present),
            "multi_success_operations": [
                {"path": path, "method": method, "success_codes": list(codes)}
                for path, method, codes in self.multi_success_operations
            ],
            "has_any_flagged_property": self.has_any_flagged_property,
            "preexisting_link_count": self.preexisting_link_count,
        }

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(["Property", "Count", "Present"])
        for keyword in UNTRANSLATABLE_KEYWORDS:
            writer.writerow(
                [keyword, self.property_counts[keyword], str(self.property_present[keyword]).lower()]
            )
        return out.getvalue()


@dataclass
class CorpusReport:
    """Aggregate findings over a directory of documents."""

    document_total: int = 0
    parse_failures: int = 0
    per_property_document_count: Dict[str, int] = field(
        default_factory=lambda: {k: 0 for k in UNTRANSLATABLE_KEYWORDS}
    )
    per_property_document_ratio: Dict[str, float] = field(
        default_factory=lambda: {k: 0.0 for k in UNTRANSLATABLE_KEYWORDS}
    )
    documents_with_any_property: int = 0
    documents_with_multi_success: int = 0
    documents_with_links: int = 0
    documents_link_generator_affected: int = 0
    total_links_generated: int = 0
    failure_details: List[Tuple[str, str]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "document_total": self.document_total,
            "parse_failures": self.parse_failures,
            "per_property_document_count": dict(self.per_property_document_count),
            "per_property_document_ratio": dict(self.per_property_document_ratio),
            "documents_with_any_property": self.documents_with_any_property,
            "documents_with_multi_success": self.documents_with_multi_success,
            "documents_with_links": self.documents_with_links,
            "documents_link_generator_affected": self.documents_link_generator_affected,
            "total_links_generated": self.total_links_generated,
            "failure_details": [list(item) for item in self.failure_details],
        }

    def to_csv(self) -> str:
        """Property/Count/Ratio table; ratio is over successfully parsed documents."""
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(["Property", "Count", "Ratio"])
        for keyword in UNTRANSLATABLE_KEYWORDS:
            ratio = self.per_property_document_ratio[keyword]
            writer.writerow(
                [keyword, self.per_property_document_count[keyword], f"{ratio * 100:.1f}%"]
            )
        return out.getvalue()


def scan_schema_properties(doc: Document) -> Dict[str, int]:
    """Occurrences of each untranslatable keyword at schema positions.

    Schema positions are: component schemas, parameter schemas, header
    schemas, request body and response content schemas, plus their nested
    subtrees. References are not followed; a shared schema is counted once,
    at its definition site.
    """
    counts = {keyword: 0 for keyword in UNTRANSLATABLE_KEYWORDS}
    visited: Set[int] = set()
    for schema in _schema_roots(doc):
        _scan_schema(schema, counts, visited)
    return counts


def _schema_roots(doc: Document) -> Iterable[Any]:
    components = doc.components
    for schema in _dict_values(components.get("schemas")):
        yield schema
    for param in _dict_values(components.get("parameters")):
        yield _param_schema(param)
    for header in _dict_values(components.get("headers")):
        yield _param_schema(header)
    for response in _dict_values(components.get("responses")):
        yield from _response_schemas(response)
    for body in _dict_values(components.get("requestBodies")):
        yield from _content_schemas(body)

    for path, item in doc.paths.items():
        for param in item.shared_parameters:
            yield _param_schema(param)
        for method, op in item.operations().items():
            for param in op.get("parameters") or []:
                yield _param_schema(param)
            body = op.get("requestBody")
            if isinstance(body, dict):
                yield from _content_schemas(body)
            responses = op.get("responses")
            if isinstance(responses, dict):
                for response in responses.values():
                    yield from _response_schemas(response)


def _dict_values(node: Any) -> Iterable[Any]:
    if isinstance(node, dict):
        yield from node.values()


def _param_schema(param: Any) -> Any:
    return param.get("schema") if isinstance(param, dict) else None


def _content_schemas(holder: Any) -> Iterable[Any]:
    content = holder.get("content") if isinstance(holder, dict) else None
    if isinstance(content, dict):
        for media in content.values():
            if isinstance(media, dict):
                yield media.get("schema")


def _response_schemas(response: Any) -> Iterable[Any]:
    yield from _content_schemas(response)
    headers = response.get("headers") if isinstance(response, dict) else None
    if isinstance(headers, dict):
        for header in headers.values():
            yield _param_schema(header)


def _scan_schema(schema: Any, counts: Dict[str, int], visited: Set[int]) -> None:
    if not isinstance(schema, dict) or id(schema) in visited:
        return
    visited.add(id(schema))
    for keyword in UNTRANSLATABLE_KEYWORDS:
        if keyword in schema:
            counts[keyword] += 1
    for key in _SCHEMA_MAP_KEYS:
        for sub in _dict_values(schema.get(key)):
            _scan_schema(sub, counts, visited)
    for key in _SCHEMA_VALUE_KEYS:
        value = schema.get(key)
        if isinstance(value, list):
            for sub in value:
                _scan_schema(sub, counts, visited)
        else:
            _scan_schema(value, counts, visited)
    for key in _SCHEMA_LIST_KEYS:
        value = schema.get(key)
        if isinstance(value, list):
            for sub in value:
                _scan_schema(sub, counts, visited)


def _is_success_key(key: str) -> bool:
    return bool(_SUCCESS_CODE.match(key)) or key.upper() == "2XX"


def count_multi_success(doc: Document) -> List[Tuple[str, str, Tuple[str, ...]]]:
    """Operations (any method) defining two or more success responses.

    Success means an explicit 200-299 code or the 2XX wildcard; ``default``
    does not count.
    """
    flagged = []
    for path, method, op in doc.operations():
        responses = op.get("responses")
        if not isinstance(responses, dict):
            continue
        success = tuple(sorted(key for key in responses if _is_success_key(key)))
        if len(success) >= 2:
            flagged.append((path, method, success))
    return flagged


def _count_links(doc: Document) -> int:
    count = 0
    for _path, _method, op in doc.operations():
        responses = op.get("responses")
        if not isinstance(responses, dict):
            continue
        for response in responses.values():
            links = response.get("links") if isinstance(response, dict) else None
            if isinstance(links, dict):
                count += len(links)
    components = doc.components
    for response in _dict_values(components.get("responses")):
        links = response.get("links") if isinstance(response, dict) else None
        if isinstance(links, dict):
            count += len(links)
    shared_links = components.get("links")
    if isinstance(shared_links, dict):
        count += len(shared_links)
    return count


def analyze_document(doc: Document) -> TranslatabilityReport:
    """Full per-document report."""
    counts = scan_schema_properties(doc)
    present = {keyword: counts[keyword] > 0 for keyword in UNTRANSLATABLE_KEYWORDS}
    return TranslatabilityReport(
        property_counts=counts,
        property_present=present,
        multi_success_operations=count_multi_success(doc),
        has_any_flagged_property=any(present.values()),
        preexisting_link_count=_count_links(doc),
    )


@dataclass
class DocumentScan:
    """Per-document slice of a corpus run; merged into a CorpusReport."""

    name: str
    parse_failed: bool = False
    error: str = ""
    property_present: Dict[str, bool] = field(default_factory=dict)
    has_any_property: bool = False
    has_multi_success: bool = False
    has_links: bool = False
    links_generated: int = 0


def scan_source(name: str, data: Union[bytes, str], run_generator: bool = False) -> DocumentScan:
    """Parse and analyze one corpus member; failures are recorded, not raised."""
    scan = DocumentScan(name=name)
    try:
        doc, _tag = parse_document(data)
    except OlgError as exc:
        scan.parse_failed = True
        scan.error = str(exc)
        return scan
    report = analyze_document(doc)
    scan.property_present = report.property_present
    scan.has_any_property = report.has_any_flagged_property
    scan.has_multi_success = bool(report.multi_success_operations)
    scan.has_links = report.preexisting_link_count > 0
    if run_generator:
        _out, gen_report = generate_links(doc, GenerationOptions())
        scan.links_generated = gen_report.links_added
    return scan


def build_corpus_report(scans: Iterable[DocumentScan]) -> CorpusReport:
    """Merge per-document scans; input order does not affect the result."""
    report = CorpusReport()
    for scan in sorted(scans, key=lambda s: s.name):
        report.document_total += 1
        if scan.parse_failed:
            report.parse_failures += 1
            report.failure_details.append((scan.name, scan.error))
            continue
        for keyword in UNTRANSLATABLE_KEYWORDS:
            if scan.property_present.get(keyword):
                report.per_property_document_count[keyword] += 1
        report.documents_with_any_property += int(scan.has_any_property)
        report.documents_with_multi_success += int(scan.has_multi_success)
        report.documents_with_links += int(scan.has_links)
        report.documents_link_generator_affected += int(scan.links_generated > 0)
        report.total_links_generated += scan.links_generated
    analyzed = report.document_total - report.parse_failures
    for keyword in UNTRANSLATABLE_KEYWORDS:
        count = report.per_property_document_count[keyword]
        report.per_property_document_ratio[keyword] = count / analyzed if analyzed else 0.0
    return report


def analyze_corpus(
    inputs: Sequence[Tuple[str, Union[bytes, str]]],
    run_generator: bool = False,
) -> CorpusReport:
    """Analyze a batch of (name, raw text) inputs into one aggregate report."""
    return build_corpus_report(
        scan_source(name, data, run_generator=run_generator) for name, data in inputs
    )
