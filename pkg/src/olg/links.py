"""Link generation: hierarchical path pairs, parameter matching, insertion.

Two heuristics drive the transformation. A path pair ``/A`` and ``/A/B``
(at a segment boundary, any suffix depth) is taken as parent/child because
the slash implies a hierarchy; and a child parameter that shares name and
schema with a parent parameter is assumed to mean the same thing, yielding
a ``$request.<location>.<name>`` mapping. Only GET operations take part,
and the input document is never modified: a fresh copy with inserted
``links`` entries is returned together with run statistics.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from . import refs
from .errors import (
    CircularReferenceError,
    ExternalReferenceError,
    MalformedPointerError,
    PointerTargetMissingError,
)
from .model import Document, Operation, ParameterDef, effective_parameters

DEFAULT_LINK_DESCRIPTION = "Automatically generated link."

#: Keywords that carry no validation meaning; ignored when comparing schemas.
_ANNOTATION_KEYWORDS = frozenset({"description", "title", "example", "deprecated"})

_EXPLICIT_SUCCESS = re.compile(r"^2[0-9][0-9]$")
_WORD_SPLIT = re.compile(r"[^0-9A-Za-z]+")


@dataclass(frozen=True)
class PathPair:
    """Parent/child path templates where child = parent + "/" + suffix."""

    parent: str
    child: str
    suffix_segments: Tuple[str, ...]


@dataclass(frozen=True)
class ParameterMatch:
    """A child parameter judged equivalent to a parent parameter."""

    name: str
    parent_location: str
    child_location: str


@dataclass(frozen=True)
class LinkRecord:
    """One generated link, for reporting."""

    parent: str
    child: str
    name: str
    mapping_count: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "parent": self.parent,
            "child": self.child,
            "name": self.name,
            "mapping_count": self.mapping_count,
        }


@dataclass
class GenerationReport:
    """Statistics of one generation run."""

    pairs_considered: int = 0
    links_added: int = 0
    links_skipped_duplicate: int = 0
    parameters_mapped: int = 0
    child_params_unmapped: int = 0
    per_link: List[LinkRecord] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "pairs_considered": self.pairs_considered,
            "links_added": self.links_added,
            "links_skipped_duplicate": self.links_skipped_duplicate,
            "parameters_mapped": self.parameters_mapped,
            "child_params_unmapped": self.child_params_unmapped,
            "per_link": [record.to_dict() for record in self.per_link],
            "warnings": list(self.warnings),
        }


@dataclass(frozen=True)
class GenerationOptions:
    """Tuning knobs exposed to the CLI and the service.

    ``require_mapping`` skips pairs without a single parameter mapping; a
    link that forwards nothing is rarely callable from a generated wrapper.
    """

    require_mapping: bool = True
    link_description: str = DEFAULT_LINK_DESCRIPTION


def find_hierarchical_pairs(doc: Document) -> List[PathPair]:
    """All (parent, child) path pairs where both ends define a GET.

    The parent must be a proper prefix of the child at a segment boundary;
    templated segments compare literally. Ordered by parent, then child.
    """
    getters = sorted(
        path for path in doc.path_templates() if doc.operation(path, "get") is not None
    )
    pairs: List[PathPair] = []
    for parent in getters:
        prefix = parent + "/"
        for child in getters:
            if child == parent or not child.startswith(prefix):
                continue
            suffix = tuple(child[len(prefix):].split("/"))
            if not any(suffix):
                # "/a" vs "/a/": no real segment below the parent.
                continue
            pairs.append(PathPair(parent=parent, child=child, suffix_segments=suffix))
    return pairs


def schema_equal(
    doc: Document,
    a: Any,
    b: Any,
    warnings: Optional[List[str]] = None,
) -> bool:
    """Structural schema equality, reference-aware and annotation-blind.

    References with identical strings are equal without expansion (this also
    makes matching self-referential schemas terminate); otherwise references
    are resolved step by step. description/title/example/deprecated never
    affect the outcome. External or dangling references compare unequal and
    leave a warning; a genuine one-sided reference cycle raises
    :class:`CircularReferenceError`.
    """
    try:
        return _schema_eq(doc, a, b, frozenset())
    except (ExternalReferenceError, MalformedPointerError, PointerTargetMissingError) as exc:
        if warnings is not None:
            warnings.append(f"schema comparison failed: {exc}")
        return False


def _ref_of(node: Any) -> Optional[str]:
    return node["$ref"] if refs.is_reference(node) else None


def _step(doc: Document, node: Dict[str, Any], seen: Set[str]) -> Any:
    ref = node["$ref"]
    if not ref.startswith("#"):
        raise ExternalReferenceError(ref)
    if ref in seen:
        raise CircularReferenceError(sorted(seen) + [ref])
    seen.add(ref)
    return refs.resolve_pointer(doc, refs.reference_target(ref))


def _schema_eq(doc: Document, a: Any, b: Any, assumed: FrozenSet[Tuple[str, str]]) -> bool:
    seen_a: Set[str] = set()
    seen_b: Set[str] = set()
    while True:
        ref_a, ref_b = _ref_of(a), _ref_of(b)
        if ref_a is None and ref_b is None:
            break
        if ref_a is not None and ref_b is not None:
            if ref_a == ref_b:
                return True
            if (ref_a, ref_b) in assumed:
                # Co-recursive pair already under comparison: equal so far.
                return True
            assumed = assumed | {(ref_a, ref_b)}
            a = _step(doc, a, seen_a)
            b = _step(doc, b, seen_b)
        elif ref_a is not None:
            a = _step(doc, a, seen_a)
        else:
            b = _step(doc, b, seen_b)

    if isinstance(a, dict) and isinstance(b, dict):
        keys_a = set(a) - _ANNOTATION_KEYWORDS
        keys_b = set(b) - _ANNOTATION_KEYWORDS
        if keys_a != keys_b:
            return False
        for key in keys_a:
            if not _member_eq(doc, key, a[key], b[key], assumed):
                return False
        return True
    return _value_eq(a, b)


def _value_eq(a: Any, b: Any) -> bool:
    """Type-strict JSON value equality; True and 1 are different values."""
    if isinstance(a, bool) or isinstance(b, bool):
        return isinstance(a, bool) and isinstance(b, bool) and a == b
    if isinstance(a, dict) and isinstance(b, dict):
        return set(a) == set(b) and all(_value_eq(a[k], b[k]) for k in a)
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(_value_eq(x, y) for x, y in zip(a, b))
    return type(a) is type(b) and a == b


def _member_eq(doc: Document, key: str, va: Any, vb: Any, assumed: FrozenSet) -> bool:
    if key in ("properties", "patternProperties") and isinstance(va, dict) and isinstance(vb, dict):
        if set(va) != set(vb):
            return False
        return all(_schema_eq(doc, va[name], vb[name], assumed) for name in va)
    if key in ("items", "not", "additionalProperties"):
        if isinstance(va, dict) or isinstance(vb, dict):
            return _schema_eq(doc, va, vb, assumed)
        if isinstance(va, list) and isinstance(vb, list):
            return len(va) == len(vb) and all(
                _schema_eq(doc, x, y, assumed) for x, y in zip(va, vb)
            )
        return _value_eq(va, vb)
    if key in ("oneOf", "anyOf", "allOf") and isinstance(va, list) and isinstance(vb, list):
        return len(va) == len(vb) and all(_schema_eq(doc, x, y, assumed) for x, y in zip(va, vb))
    return _value_eq(va, vb)


def match_parameters(
    doc: Document,
    parent_params: Sequence[ParameterDef],
    child_params: Sequence[ParameterDef],
    warnings: Optional[List[str]] = None,
) -> List[ParameterMatch]:
    """Child parameters whose name and schema coincide with a parent parameter.

    Cookie parameters never match (no usable runtime expression for them).
    One match per child name, in child parameter order.
    """
    matches: List[ParameterMatch] = []
    matched_names: Set[str] = set()
    for child in child_params:
        if child.location == "cookie" or child.name in matched_names:
            continue
        for parent in parent_params:
            if parent.location == "cookie" or parent.name != child.name:
                continue
            if schema_equal(doc, parent.schema, child.schema, warnings=warnings):
                matches.append(
                    ParameterMatch(
                        name=child.name,
                        parent_location=parent.location,
                        child_location=child.location,
                    )
                )
                matched_names.add(child.name)
                break
    return matches


def select_success_response(op: Operation) -> Optional[str]:
    """Status key a downstream translator will pick: smallest explicit 2xx,
    else a 2XX wildcard, else none."""
    responses = op.responses
    explicit = [key for key in responses if _EXPLICIT_SUCCESS.match(key)]
    if explicit:
        return min(explicit, key=int)
    for key in responses:
        if key.upper() == "2XX":
            return key
    return None


def make_link_name(doc: Document, pair: PathPair, existing: Set[str]) -> str:
    """camelCase name from the child's extra segments, unique within ``existing``."""
    words: List[str] = []
    for segment in pair.suffix_segments:
        cleaned = segment.replace("{", "").replace("}", "")
        words.extend(w for w in _WORD_SPLIT.split(cleaned) if w)
    if not words:
        base = "link"
    else:
        base = words[0][0].lower() + words[0][1:]
        base += "".join(w[0].upper() + w[1:] for w in words[1:])
    name = base
    counter = 2
    while name in existing:
        name = f"{base}{counter}"
        counter += 1
    return name


def target_reference(doc: Document, pair: PathPair) -> Dict[str, str]:
    """Link target for the child GET: operationId when it has one, else an
    escaped operationRef pointer."""
    child_op = doc.operation(pair.child, "get")
    operation_id = Operation(child_op).operation_id if child_op else None
    if operation_id:
        return {"operationId": operation_id}
    return {"operationRef": f"#/paths/{refs.escape_token(pair.child)}/get"}


def _operation_id_index(doc: Document) -> Dict[str, Tuple[str, str]]:
    index: Dict[str, Tuple[str, str]] = {}
    for path, method, op in doc.operations():
        oid = Operation(op).operation_id
        if oid and oid not in index:
            index[oid] = (path, method)
    return index


def _link_targets_child(
    doc: Document,
    link: Any,
    pair: PathPair,
    child_op: Dict[str, Any],
    oid_index: Dict[str, Tuple[str, str]],
    warnings: List[str],
) -> bool:
    """True when an existing link already points at the pair's child GET."""
    try:
        link_obj = refs.deref(doc, link)
    except Exception as exc:  # noqa: BLE001 - any unresolvable link is "not a duplicate"
        warnings.append(f"could not resolve existing link in {pair.parent}: {exc}")
        return False
    if not isinstance(link_obj, dict):
        return False
    oid = link_obj.get("operationId")
    if isinstance(oid, str):
        return oid_index.get(oid) == (pair.child, "get")
    op_ref = link_obj.get("operationRef")
    if isinstance(op_ref, str) and op_ref.startswith("#"):
        try:
            pointer = refs.reference_target(op_ref)
            if pointer.tokens == ("paths", pair.child, "get"):
                return True
            return refs.resolve_pointer(doc, pointer) is child_op
        except (MalformedPointerError, PointerTargetMissingError):
            return False
    return False


def generate_links(
    doc: Document,
    options: Optional[GenerationOptions] = None,
) -> Tuple[Document, GenerationReport]:
    """Insert link definitions for every eligible hierarchical path pair.

    For each pair: the parent GET must expose a success response (not itself
    a reference), the child's parameters are matched against the parent's
    effective set, a pair already linked to the same child GET counts as
    duplicate, and everything else receives a link named after the suffix
    with one ``$request`` mapping per matched parameter. The input document
    is left untouched.
    """
    opts = options or GenerationOptions()
    report = GenerationReport()
    out = doc.copy()
    oid_index = _operation_id_index(out)

    for pair in find_hierarchical_pairs(out):
        report.pairs_considered += 1
        parent_op = out.operation(pair.parent, "get")
        child_op = out.operation(pair.child, "get")
        status = select_success_response(Operation(parent_op))
        if status is None:
            report.warnings.append(
                f"skipped {pair.parent} -> {pair.child}: GET {pair.parent} has no 2xx response"
            )
            continue
        response = parent_op["responses"][status]
        if refs.is_reference(response):
            report.warnings.append(
                f"skipped {pair.parent} -> {pair.child}: response {status} is a reference "
                "(links are only written inline)"
            )
            continue
        if not isinstance(response, dict):
            report.warnings.append(
                f"skipped {pair.parent} -> {pair.child}: response {status} is not an object"
            )
            continue

        parent_params = effective_parameters(out, pair.parent, "get", warnings=report.warnings)
        child_params = effective_parameters(out, pair.child, "get", warnings=report.warnings)
        matches = match_parameters(out, parent_params, child_params, warnings=report.warnings)
        if opts.require_mapping and not matches:
            continue

        links = response.get("links")
        if links is not None and not isinstance(links, dict):
            report.warnings.append(
                f"skipped {pair.parent} -> {pair.child}: existing 'links' is not an object"
            )
            continue
        if links and any(
            _link_targets_child(out, link, pair, child_op, oid_index, report.warnings)
            for link in links.values()
        ):
            report.links_skipped_duplicate += 1
            continue

        name = make_link_name(out, pair, set(links) if links else set())
        link_raw: Dict[str, Any] = dict(target_reference(out, pair))
        if matches:
            link_raw["parameters"] = {
                m.name: f"$request.{m.parent_location}.{m.name}" for m in matches
            }
        link_raw["description"] = opts.link_description
        response.setdefault("links", {})[name] = link_raw

        report.links_added += 1
        report.parameters_mapped += len(matches)
        report.child_params_unmapped += len(child_params) - len(matches)
        report.per_link.append(
            LinkRecord(parent=pair.parent, child=pair.child, name=name, mapping_count=len(matches))
        )

    return out, report
