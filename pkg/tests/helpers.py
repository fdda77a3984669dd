"""Shared test utilities: structural diffing, a random document generator
and an independent brute-force oracle for link generation.

The oracle deliberately re-implements eligibility from scratch (plain dict
walking, no package internals) so generator bugs cannot hide in shared code.
"""

from __future__ import annotations

import random
from typing import Any, Dict, Iterator, List, Set, Tuple

Path_ = Tuple[str, ...]

_METHODS = ("get", "put", "post", "delete", "patch")
_ANNOTATIONS = ("description", "title", "example", "deprecated")


# ---------------------------------------------------------------------------
# Structural additivity
# ---------------------------------------------------------------------------


def collect_differences(before: Any, after: Any, path: Path_ = ()) -> Iterator[Tuple[str, Path_]]:
    """Yield (kind, path) for every structural difference between two trees."""
    if isinstance(before, dict) and isinstance(after, dict):
        for key in before:
            if key not in after:
                yield ("removed", path + (str(key),))
            else:
                yield from collect_differences(before[key], after[key], path + (str(key),))
        for key in after:
            if key not in before:
                yield ("added", path + (str(key),))
        return
    if isinstance(before, list) and isinstance(after, list):
        if len(before) != len(after):
            yield ("changed", path)
            return
        for index, (b, a) in enumerate(zip(before, after)):
            yield from collect_differences(b, a, path + (str(index),))
        return
    if type(before) is not type(after) or before != after:
        yield ("changed", path)


def _is_link_insertion(path: Path_) -> bool:
    # .../paths/<template>/get/responses/<status>/links[/<name>]
    if len(path) == 6:
        return path[0] == "paths" and path[2] == "get" and path[3] == "responses" and path[5] == "links"
    if len(path) == 7:
        return path[0] == "paths" and path[2] == "get" and path[3] == "responses" and path[5] == "links"
    return False


def assert_only_link_insertions(before: Dict[str, Any], after: Dict[str, Any]) -> None:
    """Fail unless every difference is an added link under a GET response."""
    for kind, path in collect_differences(before, after):
        assert kind == "added", f"non-insertion change at /{'/'.join(path)} ({kind})"
        assert _is_link_insertion(path), f"insertion outside a links object: /{'/'.join(path)}"


# ---------------------------------------------------------------------------
# Random documents for the brute-force oracle
# ---------------------------------------------------------------------------

_SEGMENTS = ("users", "items", "orders", "tags", "files")
_TEMPLATES = ("{id}", "{key}", "{name}")
_PARAM_NAMES = ("filter", "page", "sort")
_SCHEMAS = (
    {"type": "string"},
    {"type": "integer"},
    {"type": "string", "maxLength": 10},
    {"type": "integer", "format": "int64"},
    {"type": "boolean"},
)
_STATUS_SETS = (
    ["200"],
    ["200", "404"],
    ["201"],
    ["2XX"],
    ["default"],
    ["404", "default"],
    ["200", "201"],
)


def _random_schema(rng: random.Random) -> Dict[str, Any]:
    # Weighted toward plain strings so name collisions often also match.
    schema = dict(_SCHEMAS[0]) if rng.random() < 0.6 else dict(rng.choice(_SCHEMAS))
    if rng.random() < 0.4:
        schema[rng.choice(("description", "title", "example"))] = "x" + str(rng.randint(0, 9))
    return schema


def _random_paths(rng: random.Random) -> List[str]:
    paths: List[str] = []
    for _ in range(rng.randint(1, 6)):
        if paths and rng.random() < 0.6:
            base = rng.choice(paths)
        else:
            base = ""
        segments = [rng.choice(_SEGMENTS + _TEMPLATES) for _ in range(rng.randint(1, 2))]
        candidate = base + "/" + "/".join(segments)
        if candidate not in paths:
            paths.append(candidate)
    return paths


def _params_for(rng: random.Random, path: str) -> List[Dict[str, Any]]:
    params: List[Dict[str, Any]] = []
    for segment in path.strip("/").split("/"):
        if segment.startswith("{"):
            name = segment[1:-1]
            if any(p["name"] == name and p["in"] == "path" for p in params):
                continue
            params.append(
                {"name": name, "in": "path", "required": True, "schema": _random_schema(rng)}
            )
    for _ in range(rng.randint(0, 2)):
        name = rng.choice(_PARAM_NAMES)
        location = rng.choice(("query", "header", "cookie"))
        if any(p["name"] == name and p["in"] == location for p in params):
            continue
        params.append({"name": name, "in": location, "schema": _random_schema(rng)})
    return params


def random_document(rng: random.Random) -> Dict[str, Any]:
    """A small OpenAPI 3 document with hierarchy, no pre-existing links."""
    paths: Dict[str, Any] = {}
    for path in _random_paths(rng):
        item: Dict[str, Any] = {}
        params = _params_for(rng, path)
        shared: List[Dict[str, Any]] = []
        if params and rng.random() < 0.3:
            shared.append(params.pop(0))
        if shared:
            item["parameters"] = shared
        method = "get" if rng.random() < 0.85 else rng.choice(_METHODS)
        op: Dict[str, Any] = {}
        if params:
            op["parameters"] = params
        op["responses"] = {
            status: {"description": "r"} for status in rng.choice(_STATUS_SETS)
        }
        item[method] = op
        paths[path] = item
    return {
        "openapi": "3.0.0",
        "info": {"title": "random", "version": "1"},
        "paths": paths,
    }


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------


def _strip_annotations(schema: Any) -> Any:
    if isinstance(schema, dict):
        return {
            k: _strip_annotations(v) for k, v in schema.items() if k not in _ANNOTATIONS
        }
    if isinstance(schema, list):
        return [_strip_annotations(item) for item in schema]
    return schema


def _effective(item: Dict[str, Any], op: Dict[str, Any]) -> Dict[Tuple[str, str], Dict[str, Any]]:
    merged: Dict[Tuple[str, str], Dict[str, Any]] = {}
    for param in list(item.get("parameters") or []) + list(op.get("parameters") or []):
        merged[(param["name"], param["in"])] = param
    return merged


def _has_success(op: Dict[str, Any]) -> bool:
    for key in op.get("responses") or {}:
        text = str(key)
        if len(text) == 3 and text[0] == "2" and text[1:].isdigit():
            return True
        if text.upper() == "2XX":
            return True
    return False


def oracle_edges(root: Dict[str, Any]) -> Dict[Tuple[str, str], Set[str]]:
    """Expected (parent, child) -> matched child parameter names, by brute force."""
    paths = root.get("paths") or {}
    getters = {p: item for p, item in paths.items() if isinstance(item.get("get"), dict)}
    edges: Dict[Tuple[str, str], Set[str]] = {}
    for parent, parent_item in getters.items():
        for child, child_item in getters.items():
            if child == parent or not child.startswith(parent + "/"):
                continue
            if not any(child[len(parent) + 1:].split("/")):
                continue
            parent_op = parent_item["get"]
            child_op = child_item["get"]
            if not _has_success(parent_op):
                continue
            parent_params = _effective(parent_item, parent_op)
            child_params = _effective(child_item, child_op)
            matched: Set[str] = set()
            for (name, location), child_param in child_params.items():
                if location == "cookie" or name in matched:
                    continue
                for (p_name, p_location), parent_param in parent_params.items():
                    if p_name != name or p_location == "cookie":
                        continue
                    a = _strip_annotations(parent_param.get("schema"))
                    b = _strip_annotations(child_param.get("schema"))
                    if a == b:
                        matched.add(name)
                        break
            if matched:
                edges[(parent, child)] = matched
    return edges
