"""In-memory model of OpenAPI 3 documents.

The model deliberately wraps the parsed JSON/YAML tree instead of
destructuring it into rigid records: the tool must re-emit every field it
does not understand unchanged, so the tree stays the source of truth and the
classes below are typed views over it. Mutating a document is done by
deep-copying the tree (:meth:`Document.copy`) and editing the copy;
``Document`` values themselves are treated as immutable.
"""

from __future__ import annotations

import copy
import re
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Mapping, Optional, Tuple

from . import refs
from .errors import InvalidDocumentError, OlgError, UnresolvableReferenceError

HTTP_METHODS: Tuple[str, ...] = (
    "get",
    "put",
    "post",
    "delete",
    "options",
    "head",
    "patch",
    "trace",
)

PARAMETER_LOCATIONS: Tuple[str, ...] = ("path", "query", "header", "cookie")

#: Schema objects are kept as plain (ordered) mappings; nested schemas live
#: under properties/items/oneOf/anyOf/allOf/not exactly as parsed.
SchemaNode = Dict[str, Any]

_RUNTIME_EXPRESSION = re.compile(r"^\$request\.(path|query|header)\.(.+)$")


@dataclass(frozen=True)
class Reference:
    """An internal or external JSON Reference (``{"$ref": "..."}``)."""

    ref: str

    @property
    def is_internal(self) -> bool:
        return self.ref.startswith("#")

    @classmethod
    def from_raw(cls, node: Mapping[str, Any]) -> "Reference":
        return cls(ref=node["$ref"])


@dataclass(frozen=True)
class RuntimeExpression:
    """A ``$request.<location>.<name>`` expression feeding a link parameter.

    Cookie is intentionally not a valid source location here; generated links
    only draw from path, query and header parameters.
    """

    source_location: str
    source_name: str

    def __post_init__(self) -> None:
        if self.source_location not in ("path", "query", "header"):
            raise ValueError(f"invalid runtime expression location: {self.source_location!r}")

    def serialize(self) -> str:
        return f"$request.{self.source_location}.{self.source_name}"

    @classmethod
    def parse(cls, text: str) -> "RuntimeExpression":
        match = _RUNTIME_EXPRESSION.match(text)
        if not match:
            raise ValueError(f"not a supported runtime expression: {text!r}")
        return cls(source_location=match.group(1), source_name=match.group(2))


@dataclass(frozen=True)
class LinkDef:
    """An OpenAPI link: target operation plus parameter mappings.

    Exactly one of ``operation_id`` / ``operation_ref`` must be set.
    """

    operation_id: Optional[str] = None
    operation_ref: Optional[str] = None
    parameters: Mapping[str, RuntimeExpression] = field(default_factory=dict)
    description: Optional[str] = None

    def __post_init__(self) -> None:
        if (self.operation_id is None) == (self.operation_ref is None):
            raise ValueError("exactly one of operation_id / operation_ref must be set")

    def to_raw(self) -> Dict[str, Any]:
        raw: Dict[str, Any] = {}
        if self.operation_id is not None:
            raw["operationId"] = self.operation_id
        else:
            raw["operationRef"] = self.operation_ref
        if self.parameters:
            raw["parameters"] = {name: expr.serialize() for name, expr in self.parameters.items()}
        if self.description is not None:
            raw["description"] = self.description
        return raw


@dataclass(frozen=True)
class ParameterDef:
    """A resolved parameter: name, location, requiredness and raw schema."""

    name: str
    location: str
    required: bool
    schema: Optional[SchemaNode]
    description: Optional[str] = None

    @classmethod
    def from_raw(cls, raw: Mapping[str, Any]) -> "ParameterDef":
        if not isinstance(raw, Mapping) or not isinstance(raw.get("name"), str):
            raise InvalidDocumentError(f"parameter object missing 'name': {raw!r}")
        location = raw.get("in")
        if location not in PARAMETER_LOCATIONS:
            raise InvalidDocumentError(
                f"parameter {raw.get('name')!r} has invalid location {location!r}"
            )
        # Path parameters are required by definition, whatever the document says.
        required = bool(raw.get("required", False)) or location == "path"
        description = raw.get("description")
        return cls(
            name=raw["name"],
            location=location,
            required=required,
            schema=raw.get("schema"),
            description=description if isinstance(description, str) else None,
        )


class Operation:
    """View over one operation object (the value under a method key)."""

    __slots__ = ("_raw",)

    def __init__(self, raw: Mapping[str, Any]):
        self._raw = raw

    @property
    def raw(self) -> Mapping[str, Any]:
        return self._raw

    @property
    def operation_id(self) -> Optional[str]:
        oid = self._raw.get("operationId")
        return oid if isinstance(oid, str) and oid else None

    @property
    def parameters(self) -> List[Any]:
        params = self._raw.get("parameters")
        return params if isinstance(params, list) else []

    @property
    def responses(self) -> Dict[str, Any]:
        responses = self._raw.get("responses")
        return responses if isinstance(responses, dict) else {}

    @property
    def summary(self) -> Optional[str]:
        value = self._raw.get("summary")
        return value if isinstance(value, str) else None

    @property
    def description(self) -> Optional[str]:
        value = self._raw.get("description")
        return value if isinstance(value, str) else None


class PathItem:
    """View over one path item: its operations and shared parameters."""

    __slots__ = ("_raw",)

    def __init__(self, raw: Mapping[str, Any]):
        self._raw = raw

    @property
    def raw(self) -> Mapping[str, Any]:
        return self._raw

    def operations(self) -> Dict[str, Dict[str, Any]]:
        return {
            method: self._raw[method]
            for method in HTTP_METHODS
            if isinstance(self._raw.get(method), dict)
        }

    def operation(self, method: str) -> Optional[Dict[str, Any]]:
        op = self._raw.get(method.lower())
        return op if isinstance(op, dict) else None

    @property
    def shared_parameters(self) -> List[Any]:
        params = self._raw.get("parameters")
        return params if isinstance(params, list) else []


class Document:
    """A parsed OpenAPI 3 document.

    Wraps the root mapping; key order is whatever the source file used, so a
    serialize after parse reproduces the original layout, with anything this
    tool adds appended after pre-existing keys.
    """

    __slots__ = ("_root",)

    def __init__(self, root: Mapping[str, Any]):
        if not isinstance(root, dict):
            raise InvalidDocumentError("document root must be an object")
        paths = root.get("paths")
        if paths is not None and not isinstance(paths, dict):
            raise InvalidDocumentError("'paths' must be an object")
        self._root = root

    @property
    def root(self) -> Dict[str, Any]:
        return self._root

    @property
    def openapi_version(self) -> str:
        return str(self._root.get("openapi", ""))

    @property
    def info(self) -> Dict[str, Any]:
        info = self._root.get("info")
        return info if isinstance(info, dict) else {}

    @property
    def servers(self) -> List[Any]:
        servers = self._root.get("servers")
        return servers if isinstance(servers, list) else []

    @property
    def components(self) -> Dict[str, Any]:
        components = self._root.get("components")
        return components if isinstance(components, dict) else {}

    def path_templates(self) -> List[str]:
        # Keys not starting with "/" (vendor extensions) are preserved in the
        # tree but are not path templates.
        paths = self._root.get("paths")
        if not isinstance(paths, dict):
            return []
        return [key for key, value in paths.items() if key.startswith("/") and isinstance(value, dict)]

    @property
    def paths(self) -> Dict[str, PathItem]:
        paths = self._root.get("paths") or {}
        return {template: PathItem(paths[template]) for template in self.path_templates()}

    def path_item(self, path: str) -> PathItem:
        paths = self._root.get("paths") or {}
        if path not in paths or not isinstance(paths[path], dict):
            raise KeyError(path)
        return PathItem(paths[path])

    def operation(self, path: str, method: str) -> Optional[Dict[str, Any]]:
        try:
            return self.path_item(path).operation(method)
        except KeyError:
            return None

    def operations(self) -> Iterator[Tuple[str, str, Dict[str, Any]]]:
        """Yield (path, method, operation) for every operation in path order."""
        for template in self.path_templates():
            item = self.path_item(template)
            for method, op in item.operations().items():
                yield template, method, op

    def copy(self) -> "Document":
        return Document(copy.deepcopy(self._root))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Document) and self._root == other._root

    def __repr__(self) -> str:
        title = self.info.get("title", "?")
        return f"Document(openapi={self.openapi_version!r}, title={title!r}, paths={len(self.path_templates())})"


def effective_parameters(
    doc: Document,
    path: str,
    method: str,
    warnings: Optional[List[str]] = None,
) -> List[ParameterDef]:
    """Merged, resolved parameter set for one operation.

    Path-item shared parameters come first; an operation-level parameter with
    the same (name, location) overrides the shared one in place. Reference
    entries are resolved within the document. With ``warnings`` given,
    unresolvable or malformed entries are skipped and recorded instead of
    raising, so one bad parameter never aborts a whole run.
    """
    item = doc.path_item(path)
    op = item.operation(method)
    if op is None:
        raise KeyError(f"no {method.upper()} operation at {path}")

    merged: Dict[Tuple[str, str], ParameterDef] = {}
    for raw in list(item.shared_parameters) + list(Operation(op).parameters):
        try:
            resolved = refs.deref(doc, raw)
        except OlgError as exc:
            if warnings is None:
                raise UnresolvableReferenceError(
                    f"cannot resolve parameter for {method.upper()} {path}: {exc}"
                ) from exc
            warnings.append(f"{method.upper()} {path}: skipped parameter ({exc})")
            continue
        try:
            param = ParameterDef.from_raw(resolved)
        except InvalidDocumentError as exc:
            if warnings is None:
                raise
            warnings.append(f"{method.upper()} {path}: skipped parameter ({exc})")
            continue
        merged[(param.name, param.location)] = param
    return list(merged.values())
