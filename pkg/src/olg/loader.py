"""Parsing, version detection, Swagger 2.0 conversion and serialization.

Parsing normalizes the tree so the rest of the package can rely on a few
facts: all mapping keys are strings (YAML turns ``200:`` into an int),
YAML anchors are expanded into independent objects (later edits must never
leak into aliased siblings), and dates become ISO strings. Serialization is
deterministic: keys keep their parse order and generated keys are appended,
so the same document always yields byte-identical text.
"""

from __future__ import annotations

import copy
import datetime
import json
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml

from .errors import (
    ConversionError,
    DocumentSyntaxError,
    EmptyInputError,
    UnsupportedVersionError,
)
from .model import HTTP_METHODS, Document

FORMAT_JSON = "json"
FORMAT_YAML = "yaml"

#: Version string written on converted documents; fixed for diff stability.
OPENAPI_OUTPUT_VERSION = "3.0.3"

_YAML_LOADER = getattr(yaml, "CSafeLoader", yaml.SafeLoader)

# Swagger 2.0 parameter fields that become the v3 parameter schema.
_V2_SCHEMA_FIELDS = (
    "type",
    "format",
    "items",
    "default",
    "maximum",
    "exclusiveMaximum",
    "minimum",
    "exclusiveMinimum",
    "maxLength",
    "minLength",
    "pattern",
    "maxItems",
    "minItems",
    "uniqueItems",
    "enum",
    "multipleOf",
)

_V2_REF_REWRITES = (
    ("#/definitions/", "#/components/schemas/"),
    ("#/parameters/", "#/components/parameters/"),
    ("#/responses/", "#/components/responses/"),
)


@dataclass(frozen=True)
class VersionTag:
    """Detected specification version: swagger2, openapi3 or unknown."""

    kind: str
    raw: str

    SWAGGER2 = "swagger2"
    OPENAPI3 = "openapi3"
    UNKNOWN = "unknown"


def detect_format(data: Union[bytes, str]) -> str:
    """Classify input as JSON or YAML by its first non-whitespace byte.

    YAML is a JSON superset, so anything not starting with ``{``/``[`` is
    treated as YAML. Never fails on non-empty input.
    """
    if isinstance(data, str):
        data = data.encode("utf-8")
    if not data:
        raise EmptyInputError("input document is empty")
    stripped = data.lstrip()
    if stripped.startswith((b"{", b"[")):
        return FORMAT_JSON
    # BOM-prefixed JSON still starts with '{' after decoding.
    if stripped.startswith(b"\xef\xbb\xbf") and stripped[3:].lstrip().startswith((b"{", b"[")):
        return FORMAT_JSON
    return FORMAT_YAML


def _string_key(key: Any) -> str:
    if isinstance(key, str):
        return key
    if key is True:
        return "true"
    if key is False:
        return "false"
    if key is None:
        return "null"
    return str(key)


def _normalize_tree(node: Any) -> Any:
    """Rebuild the parsed tree: string keys, no shared alias objects."""
    if isinstance(node, dict):
        return {_string_key(k): _normalize_tree(v) for k, v in node.items()}
    if isinstance(node, (list, tuple)):
        return [_normalize_tree(item) for item in node]
    if isinstance(node, set):
        return sorted(_normalize_tree(item) for item in node)
    if isinstance(node, (datetime.datetime, datetime.date)):
        return node.isoformat()
    if isinstance(node, bytes):
        return node.decode("utf-8", "replace")
    return node


def _load_tree(data: Union[bytes, str]) -> Any:
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise DocumentSyntaxError(f"input is not valid UTF-8: {exc}") from exc
    else:
        text = data.lstrip("﻿")

    if detect_format(text.encode("utf-8") if text else b" ") == FORMAT_JSON:
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise DocumentSyntaxError(
                f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno
            ) from exc
    try:
        return yaml.load(text, Loader=_YAML_LOADER)
    except yaml.YAMLError as exc:
        line = column = None
        mark = getattr(exc, "problem_mark", None)
        if mark is not None:
            line, column = mark.line + 1, mark.column + 1
        raise DocumentSyntaxError(f"invalid YAML: {exc}", line=line, column=column) from exc


def detect_version(tree: Any) -> VersionTag:
    """Version tag for a parsed tree (no conversion applied)."""
    if not isinstance(tree, dict):
        return VersionTag(VersionTag.UNKNOWN, "")
    swagger = tree.get("swagger")
    if swagger is not None and str(swagger) == "2.0":
        return VersionTag(VersionTag.SWAGGER2, str(swagger))
    openapi = tree.get("openapi")
    if openapi is not None and str(openapi).startswith("3."):
        return VersionTag(VersionTag.OPENAPI3, str(openapi))
    raw = swagger if swagger is not None else openapi
    return VersionTag(VersionTag.UNKNOWN, "" if raw is None else str(raw))


def parse_document(
    data: Union[bytes, str],
    warnings: Optional[List[str]] = None,
) -> Tuple[Document, VersionTag]:
    """Parse JSON/YAML text into a Document, converting Swagger 2.0 if needed.

    Returns the document plus the version tag detected on the *input* (so a
    converted document still reports ``swagger2``). Raises
    :class:`DocumentSyntaxError` on malformed text and
    :class:`UnsupportedVersionError` when no supported version is found.
    """
    if isinstance(data, (bytes, str)) and not data:
        raise EmptyInputError("input document is empty")
    tree = _normalize_tree(_load_tree(data))
    if not isinstance(tree, dict):
        raise DocumentSyntaxError("document root is not an object")
    tag = detect_version(tree)
    if tag.kind == VersionTag.SWAGGER2:
        return convert_v2_to_v3(tree, warnings=warnings), tag
    if tag.kind == VersionTag.OPENAPI3:
        if not isinstance(tree.get("openapi"), str):
            tree["openapi"] = str(tree["openapi"])
        return Document(tree), tag
    raise UnsupportedVersionError(tag.raw)


def serialize(doc: Union[Document, Dict[str, Any]], format: str) -> str:
    """Deterministic text for a document; same input, same bytes."""
    root = doc.root if isinstance(doc, Document) else doc
    if format == FORMAT_JSON:
        return json.dumps(root, indent=2, ensure_ascii=False) + "\n"
    if format == FORMAT_YAML:
        return yaml.safe_dump(
            root,
            sort_keys=False,
            allow_unicode=True,
            default_flow_style=False,
            width=1_000_000,
        )
    raise ValueError(f"unknown serialization format: {format!r}")


# ---------------------------------------------------------------------------
# Swagger 2.0 -> OpenAPI 3.0 conversion
# ---------------------------------------------------------------------------


def convert_v2_to_v3(tree: Dict[str, Any], warnings: Optional[List[str]] = None) -> Document:
    """Structural Swagger 2.0 to OpenAPI 3.0 conversion.

    Covers what GET-centric link generation needs: servers, components
    (schemas/parameters/responses) with rewritten references, parameter
    schemas, and response content. Request bodies are dropped with a warning;
    security definitions move under components untouched.
    """
    warn = warnings if warnings is not None else []
    if str(tree.get("swagger")) != "2.0":
        raise ConversionError(f"not a Swagger 2.0 document: swagger={tree.get('swagger')!r}")

    global_produces = _string_list(tree.get("produces"))
    servers = _build_servers(tree)
    components: Dict[str, Any] = {}

    root: Dict[str, Any] = {"openapi": OPENAPI_OUTPUT_VERSION}
    servers_emitted = False
    for key, value in tree.items():
        if key in ("swagger", "consumes", "produces"):
            continue
        if key in ("host", "basePath", "schemes"):
            if not servers_emitted and servers:
                root["servers"] = servers
                servers_emitted = True
            continue
        if key == "paths":
            root["paths"] = _convert_paths(value, global_produces, warn)
        elif key == "definitions":
            if isinstance(value, dict):
                components["schemas"] = {name: _convert_schema(s) for name, s in value.items()}
        elif key == "parameters":
            if isinstance(value, dict):
                components["parameters"] = _convert_component_parameters(value, warn)
        elif key == "responses":
            if isinstance(value, dict):
                components["responses"] = {
                    name: _convert_response(r, global_produces or ["application/json"])
                    for name, r in value.items()
                }
        elif key == "securityDefinitions":
            if isinstance(value, dict):
                components["securitySchemes"] = value
                for name, scheme in value.items():
                    if isinstance(scheme, dict) and scheme.get("type") in ("basic", "oauth2"):
                        warn.append(
                            f"security scheme {name!r} copied verbatim; "
                            f"{scheme.get('type')} flows are not restructured"
                        )
        else:
            root[key] = value
    if not servers_emitted and servers:
        root["servers"] = servers
    if components:
        root["components"] = components

    _rewrite_refs(root)
    return Document(root)


def _string_list(value: Any) -> List[str]:
    if isinstance(value, list):
        return [item for item in value if isinstance(item, str)]
    return []


def _build_servers(tree: Dict[str, Any]) -> List[Dict[str, str]]:
    host = tree.get("host")
    base_path = tree.get("basePath") or ""
    schemes = _string_list(tree.get("schemes"))
    if isinstance(host, str) and host:
        return [{"url": f"{scheme}://{host}{base_path}"} for scheme in (schemes or ["https"])]
    if isinstance(base_path, str) and base_path:
        return [{"url": base_path}]
    return []


def _convert_paths(paths: Any, global_produces: List[str], warn: List[str]) -> Dict[str, Any]:
    if not isinstance(paths, dict):
        return {}
    converted: Dict[str, Any] = {}
    for path, item in paths.items():
        if not isinstance(item, dict):
            converted[path] = item
            continue
        new_item: Dict[str, Any] = {}
        shared_body = _count_body_params(item.get("parameters"))
        for key, value in item.items():
            if key in HTTP_METHODS and isinstance(value, dict):
                new_item[key] = _convert_operation(value, path, key, global_produces, shared_body, warn)
            elif key == "parameters" and isinstance(value, list):
                new_item[key] = _convert_parameter_list(value, f"{path}", warn)
            else:
                new_item[key] = value
        converted[path] = new_item
    return converted


def _count_body_params(params: Any) -> int:
    if not isinstance(params, list):
        return 0
    return sum(1 for p in params if isinstance(p, dict) and p.get("in") == "body")


def _convert_operation(
    op: Dict[str, Any],
    path: str,
    method: str,
    global_produces: List[str],
    shared_body: int,
    warn: List[str],
) -> Dict[str, Any]:
    where = f"{method.upper()} {path}"
    produces = _string_list(op.get("produces")) or global_produces or ["application/json"]
    body_count = shared_body + _count_body_params(op.get("parameters"))
    if body_count > 1:
        raise ConversionError(f"{where}: more than one body parameter")

    converted: Dict[str, Any] = {}
    for key, value in op.items():
        if key in ("produces", "consumes", "schemes"):
            continue
        if key == "parameters" and isinstance(value, list):
            converted[key] = _convert_parameter_list(value, where, warn)
        elif key == "responses" and isinstance(value, dict):
            converted[key] = {
                status: _convert_response(resp, produces) for status, resp in value.items()
            }
        else:
            converted[key] = value
    return converted


def _convert_parameter_list(params: List[Any], where: str, warn: List[str]) -> List[Any]:
    converted = []
    for param in params:
        if isinstance(param, dict) and param.get("in") in ("body", "formData"):
            warn.append(
                f"{where}: dropped {param.get('in')} parameter {param.get('name', '?')!r} "
                "(request bodies are not converted)"
            )
            continue
        if isinstance(param, dict) and "$ref" not in param:
            converted.append(_convert_parameter(param, where, warn))
        else:
            converted.append(param)
    return converted


def _convert_component_parameters(params: Dict[str, Any], warn: List[str]) -> Dict[str, Any]:
    converted: Dict[str, Any] = {}
    for name, param in params.items():
        where = f"components.parameters.{name}"
        if isinstance(param, dict) and "$ref" not in param:
            if param.get("in") in ("body", "formData"):
                # Unlike parameter lists, dropping a named component would
                # leave dangling references, so keep it and let callers warn.
                warn.append(
                    f"{where}: {param.get('in')} parameter kept verbatim "
                    "(request bodies are not converted)"
                )
                converted[name] = param
            else:
                converted[name] = _convert_parameter(param, where, warn)
        else:
            converted[name] = param
    return converted


def _convert_parameter(param: Dict[str, Any], where: str, warn: List[str]) -> Dict[str, Any]:
    converted: Dict[str, Any] = {}
    schema: Dict[str, Any] = {}
    for key, value in param.items():
        if key in _V2_SCHEMA_FIELDS:
            if key == "type" and value == "file":
                schema["type"] = "string"
                schema.setdefault("format", "binary")
            elif key == "items":
                schema[key] = _convert_schema(value)
            else:
                schema[key] = value
        elif key == "collectionFormat":
            warn.append(f"{where}: dropped collectionFormat on parameter {param.get('name', '?')!r}")
        else:
            converted[key] = value
    if schema:
        converted["schema"] = schema
    return converted


def _convert_response(resp: Any, produces: List[str]) -> Any:
    if not isinstance(resp, dict) or "$ref" in resp:
        return resp
    converted: Dict[str, Any] = {}
    content: Dict[str, Any] = {}
    for key, value in resp.items():
        if key == "schema":
            schema = _convert_schema(value)
            for index, media_type in enumerate(produces):
                entry = content.setdefault(media_type, {})
                # Copies keep media-type entries independent under later edits.
                entry["schema"] = schema if index == 0 else copy.deepcopy(schema)
            converted.setdefault("content", content)
        elif key == "examples" and isinstance(value, dict):
            for media_type, example in value.items():
                entry = content.setdefault(media_type, {})
                entry["example"] = example
            converted.setdefault("content", content)
        elif key == "headers" and isinstance(value, dict):
            converted[key] = {name: _convert_header(h) for name, h in value.items()}
        else:
            converted[key] = value
    return converted


def _convert_header(header: Any) -> Any:
    if not isinstance(header, dict) or "$ref" in header:
        return header
    converted: Dict[str, Any] = {}
    schema: Dict[str, Any] = {}
    for key, value in header.items():
        if key in _V2_SCHEMA_FIELDS:
            schema[key] = _convert_schema(value) if key == "items" else value
        elif key == "collectionFormat":
            continue
        else:
            converted[key] = value
    if schema:
        converted["schema"] = schema
    return converted


def _convert_schema(schema: Any) -> Any:
    """Recursive schema conversion: ``type: file`` becomes string/binary."""
    if isinstance(schema, list):
        return [_convert_schema(item) for item in schema]
    if not isinstance(schema, dict):
        return schema
    converted: Dict[str, Any] = {}
    for key, value in schema.items():
        if key == "type" and value == "file":
            converted["type"] = "string"
            converted.setdefault("format", "binary")
        elif key in ("properties", "patternProperties") and isinstance(value, dict):
            converted[key] = {name: _convert_schema(sub) for name, sub in value.items()}
        elif key in ("items", "additionalProperties", "not", "allOf", "oneOf", "anyOf"):
            converted[key] = _convert_schema(value)
        else:
            converted[key] = value
    return converted


def _rewrite_refs(node: Any) -> None:
    """Rewrite v2 reference prefixes to their components equivalents, in place."""
    if isinstance(node, dict):
        for key, value in node.items():
            if key == "$ref" and isinstance(value, str):
                for old, new in _V2_REF_REWRITES:
                    if value.startswith(old):
                        node[key] = new + value[len(old):]
                        break
            else:
                _rewrite_refs(value)
    elif isinstance(node, list):
        for item in node:
            _rewrite_refs(item)
