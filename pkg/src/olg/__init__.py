"""olg: add link definitions to OpenAPI documents and measure their
GraphQL-translatability problems."""

__version__ = "0.1.0"

from .analyzer import (  # noqa: F401
    CorpusReport,
    TranslatabilityReport,
    UNTRANSLATABLE_KEYWORDS,
    analyze_corpus,
    analyze_document,
    count_multi_success,
    scan_schema_properties,
)
from .diffstats import render_diff, summarize  # noqa: F401
from .links import (  # noqa: F401
    GenerationOptions,
    GenerationReport,
    ParameterMatch,
    PathPair,
    find_hierarchical_pairs,
    generate_links,
    make_link_name,
    match_parameters,
    schema_equal,
    select_success_response,
    target_reference,
)
from .loader import (  # noqa: F401
    VersionTag,
    convert_v2_to_v3,
    detect_format,
    parse_document,
    serialize,
)
from .model import (  # noqa: F401
    Document,
    LinkDef,
    Operation,
    ParameterDef,
    PathItem,
    Reference,
    RuntimeExpression,
    SchemaNode,
    effective_parameters,
)
from .refs import JsonPointer, deref, parse_pointer, resolve_pointer  # noqa: F401
