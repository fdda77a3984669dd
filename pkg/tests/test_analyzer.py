import random

from olg.analyzer import (
    UNTRANSLATABLE_KEYWORDS,
    DocumentScan,
    analyze_corpus,
    analyze_document,
    build_corpus_report,
    count_multi_success,
    scan_schema_properties,
    scan_source,
)
from olg.model import Document


def _doc(paths=None, components=None):
    root = {"openapi": "3.0.0", "info": {"title": "t", "version": "1"}, "paths": paths or {}}
    if components:
        root["components"] = components
    return Document(root)


def _zero_except(**overrides):
    counts = {k: 0 for k in UNTRANSLATABLE_KEYWORDS}
    counts.update(overrides)
    return counts


def test_keyword_list_is_fixed():
    assert len(UNTRANSLATABLE_KEYWORDS) == 16
    assert UNTRANSLATABLE_KEYWORDS[0] == "multipleOf"
    assert "allOf" not in UNTRANSLATABLE_KEYWORDS  # translatable via type merging


def test_scan_counts_at_definition_sites_only():
    doc = _doc(
        paths={
            "/a": {
                "get": {
                    "parameters": [
                        {"$ref": "#/components/parameters/P"},
                        {"$ref": "#/components/parameters/P"},
                    ],
                    "responses": {},
                }
            }
        },
        components={
            "parameters": {
                "P": {"name": "p", "in": "query", "schema": {"type": "string", "pattern": "^a"}}
            }
        },
    )
    # Referenced twice, defined once: counted once.
    assert scan_schema_properties(doc) == _zero_except(pattern=1)


def test_scan_counts_repeated_inline_schemas():
    doc = _doc(
        paths={
            "/a": {
                "get": {
                    "parameters": [
                        {"name": "x", "in": "query", "schema": {"type": "string", "minLength": 1}},
                        {"name": "y", "in": "query", "schema": {"type": "string", "minLength": 2}},
                    ],
                    "responses": {},
                }
            }
        }
    )
    assert scan_schema_properties(doc)["minLength"] == 2


def test_scan_ignores_keywords_outside_schema_positions():
    doc = _doc(
        paths={
            "/pattern/{minimum}": {
                "get": {
                    "description": "pattern, minLength and not appear here",
                    "x-meta": {"maximum": 3, "pattern": "^x"},
                    "responses": {"200": {"description": "minimum effort"}},
                }
            }
        }
    )
    assert scan_schema_properties(doc) == _zero_except()
    assert analyze_document(doc).has_any_flagged_property is False


def test_scan_ignores_schema_shaped_values_of_annotations():
    # An example carrying a keyword-shaped object is data, not a schema.
    doc = _doc(
        components={
            "schemas": {
                "S": {"type": "object", "example": {"pattern": "^x", "minimum": 1}}
            }
        }
    )
    assert scan_schema_properties(doc) == _zero_except()


def test_scan_descends_nested_subtrees():
    doc = _doc(
        components={
            "schemas": {
                "S": {
                    "type": "object",
                    "minProperties": 1,
                    "properties": {
                        "list": {
                            "type": "array",
                            "maxItems": 5,
                            "items": {"not": {"type": "string", "pattern": "^x"}},
                        },
                        "choice": {"oneOf": [{"minimum": 0}, {"maximum": 1}]},
                        "merged": {"allOf": [{"minLength": 2}]},
                        "open": {"additionalProperties": {"uniqueItems": True}},
                    },
                }
            }
        }
    )
    assert scan_schema_properties(doc) == _zero_except(
        minProperties=1,
        maxItems=1,
        pattern=1,
        oneOf=1,
        minimum=1,
        maximum=1,
        minLength=1,
        uniqueItems=1,
        **{"not": 1},
    )


def test_scan_covers_all_schema_roots():
    doc = _doc(
        paths={
            "/a": {
                "parameters": [{"name": "s", "in": "query", "schema": {"minLength": 1}}],
                "get": {
                    "parameters": [{"name": "q", "in": "query", "schema": {"maxLength": 2}}],
                    "requestBody": {
                        "content": {"application/json": {"schema": {"minimum": 3}}}
                    },
                    "responses": {
                        "200": {
                            "content": {"application/json": {"schema": {"maximum": 4}}},
                            "headers": {"X-H": {"schema": {"pattern": "^h"}}},
                        }
                    },
                },
            }
        },
        components={
            "schemas": {"A": {"multipleOf": 2}},
            "parameters": {"P": {"name": "p", "in": "query", "schema": {"minItems": 1}}},
            "headers": {"H": {"schema": {"maxItems": 9}}},
            "responses": {
                "R": {
                    "description": "r",
                    "content": {"application/json": {"schema": {"minProperties": 1}}},
                    "headers": {"X-R": {"schema": {"maxProperties": 2}}},
                }
            },
            "requestBodies": {
                "B": {"content": {"application/json": {"schema": {"uniqueItems": True}}}}
            },
        },
    )
    assert scan_schema_properties(doc) == _zero_except(
        minLength=1,
        maxLength=1,
        minimum=1,
        maximum=1,
        pattern=1,
        multipleOf=1,
        minItems=1,
        maxItems=1,
        minProperties=1,
        maxProperties=1,
        uniqueItems=1,
    )


def test_multi_success_detection():
    doc = _doc(
        paths={
            "/both": {
                "get": {"responses": {"200": {}, "201": {}}},
                "post": {"responses": {"200": {}, "404": {}, "default": {}}},
            },
            "/wild": {"put": {"responses": {"2XX": {}, "200": {}}}},
            "/single": {"get": {"responses": {"200": {}}}},
        }
    )
    flagged = count_multi_success(doc)
    assert flagged == [
        ("/both", "get", ("200", "201")),
        ("/wild", "put", ("200", "2XX")),
    ]


def test_multi_success_tolerates_malformed_responses():
    doc = _doc(paths={"/a": {"get": {"responses": ["200"]}}})
    assert count_multi_success(doc) == []


def test_preexisting_links_counted_everywhere():
    doc = _doc(
        paths={
            "/a": {
                "get": {
                    "responses": {
                        "200": {"links": {"one": {"operationId": "x"}, "two": {"operationId": "y"}}}
                    }
                }
            }
        },
        components={
            "responses": {"R": {"description": "r", "links": {"three": {"operationId": "z"}}}},
            "links": {"four": {"operationId": "w"}},
        },
    )
    assert analyze_document(doc).preexisting_link_count == 4


def test_report_serialization():
    report = analyze_document(
        _doc(
            paths={"/a": {"get": {"responses": {"200": {}, "201": {}}}}},
            components={"schemas": {"S": {"pattern": "^x"}}},
        )
    )
    data = report.to_dict()
    assert data["property_counts"]["pattern"] == 1
    assert data["property_present"]["pattern"] is True
    assert data["multi_success_operations"] == [
        {"path": "/a", "method": "get", "success_codes": ["200", "201"]}
    ]
    assert data["has_any_flagged_property"] is True

    csv_text = report.to_csv()
    lines = csv_text.strip().splitlines()
    assert lines[0] == "Property,Count,Present"
    assert "pattern,1,true" in lines
    assert len(lines) == 17


# ---------------------------------------------------------------------------
# Corpus aggregation
# ---------------------------------------------------------------------------


def _scan(name, present=(), multi=False, links=False, generated=0, failed=False):
    scan = DocumentScan(name=name)
    if failed:
        scan.parse_failed = True
        scan.error = "boom"
        return scan
    scan.property_present = {k: k in present for k in UNTRANSLATABLE_KEYWORDS}
    scan.has_any_property = bool(present)
    scan.has_multi_success = multi
    scan.has_links = links
    scan.links_generated = generated
    return scan


def test_corpus_report_aggregates_and_ratios():
    scans = [
        _scan("a", present=("pattern", "minimum"), multi=True, generated=2),
        _scan("b", present=("pattern",), links=True),
        _scan("c"),
        _scan("d", failed=True),
    ]
    report = build_corpus_report(scans)
    assert report.document_total == 4
    assert report.parse_failures == 1
    assert report.per_property_document_count["pattern"] == 2
    # Ratios are over parsed documents, not all documents.
    assert report.per_property_document_ratio["pattern"] == 2 / 3
    assert report.documents_with_any_property == 2
    assert report.documents_with_multi_success == 1
    assert report.documents_with_links == 1
    assert report.documents_link_generator_affected == 1
    assert report.total_links_generated == 2
    assert report.failure_details == [("d", "boom")]


def test_corpus_report_is_order_independent():
    scans = [
        _scan("a", present=("maxLength",)),
        _scan("b", generated=1),
        _scan("c", failed=True),
        _scan("d", multi=True),
    ]
    shuffled = scans[:]
    random.Random(7).shuffle(shuffled)
    assert build_corpus_report(scans) == build_corpus_report(shuffled)


def test_corpus_report_csv_shape():
    report = build_corpus_report([_scan("a", present=("pattern",)), _scan("b")])
    lines = report.to_csv().strip().splitlines()
    assert lines[0] == "Property,Count,Ratio"
    assert "pattern,1,50.0%" in lines
    assert "multipleOf,0,0.0%" in lines


def test_corpus_report_empty_input():
    report = build_corpus_report([])
    assert report.document_total == 0
    assert report.per_property_document_ratio["pattern"] == 0.0


def test_scan_source_records_failures():
    scan = scan_source("bad.yaml", b"openapi: [")
    assert scan.parse_failed is True
    assert scan.error


def test_analyze_corpus_end_to_end():
    good = (
        b"openapi: 3.0.0\n"
        b"info: {title: t, version: '1'}\n"
        b"paths:\n"
        b"  /a/{id}:\n"
        b"    get:\n"
        b"      parameters: [{name: id, in: path, required: true, schema: {type: string, minLength: 1}}]\n"
        b"      responses: {'200': {description: ok}}\n"
        b"  /a/{id}/b:\n"
        b"    get:\n"
        b"      parameters: [{name: id, in: path, required: true, schema: {type: string, minLength: 1}}]\n"
        b"      responses: {'200': {description: ok}}\n"
    )
    report = analyze_corpus(
        [("good.yaml", good), ("broken.yaml", b"{"), ("plain.yaml", b"swagger: '2.0'\npaths: {}\n")],
        run_generator=True,
    )
    assert report.document_total == 3
    assert report.parse_failures == 1
    assert report.per_property_document_count["minLength"] == 1
    assert report.documents_link_generator_affected == 1
    assert report.total_links_generated == 1
