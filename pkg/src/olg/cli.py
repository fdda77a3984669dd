"""Command line entry point.

Exit codes: 0 success, 1 parse/conversion problem, 2 usage error,
3 I/O or fetch error. ``generate`` writes only the transformed document to
stdout (diff and statistics go to stderr), so output can be piped safely.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple

from . import __version__
from .analyzer import DocumentScan, build_corpus_report, scan_source
from .diffstats import summarize
from .errors import (
    ConversionError,
    DocumentSyntaxError,
    EmptyInputError,
    FetchError,
    InvalidDocumentError,
    OlgError,
    UnsupportedVersionError,
)
from .pipeline import run_analysis, run_generation
from .sources import read_source

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_USAGE = 2
EXIT_IO = 3

DEFAULT_MAX_FILE_SIZE = 20 * 1024 * 1024
CORPUS_SUFFIXES = (".json", ".yaml", ".yml")


def _default_jobs() -> int:
    env = os.environ.get("OLG_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="olg",
        description="Add link definitions to OpenAPI documents and analyze "
        "GraphQL-translatability problems.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="add links to one document")
    gen.add_argument("input", help="file path, http(s) URL, or '-' for stdin")
    gen.add_argument("--output", "-o", help="write the document here instead of stdout")
    gen.add_argument("--format", choices=["json", "yaml"], help="output format (default: input format)")
    gen.add_argument("--diff", action="store_true", help="print a unified diff to stderr")
    gen.add_argument("--stats", choices=["text", "json"], help="print run statistics to stderr")
    gen.add_argument(
        "--allow-unmapped",
        action="store_true",
        help="also add links that carry no parameter mapping",
    )
    gen.add_argument("--link-description", help="description text for generated links")

    ana = sub.add_parser("analyze", help="report translatability problems of one document")
    ana.add_argument("input", help="file path, http(s) URL, or '-' for stdin")
    ana.add_argument("--table", action="store_true", help="CSV table instead of JSON")

    cor = sub.add_parser("corpus", help="scan a directory of documents")
    cor.add_argument("directory", help="directory scanned recursively for *.json/*.yaml/*.yml")
    cor.add_argument("--with-generator", action="store_true", help="also run link generation per document")
    cor.add_argument("--report", help="write the JSON report here instead of stdout")
    cor.add_argument("--csv", help="also write a Property/Count/Ratio CSV table here")
    cor.add_argument(
        "--jobs",
        type=int,
        default=None,
        help="worker processes (default: OLG_JOBS or the CPU count)",
    )
    cor.add_argument(
        "--max-file-size",
        type=int,
        default=DEFAULT_MAX_FILE_SIZE,
        help="skip files larger than this many bytes (default 20 MiB)",
    )
    return parser


def _cmd_generate(args: argparse.Namespace) -> int:
    data = read_source(args.input)
    outcome = run_generation(
        data,
        output_format=args.format,
        require_mapping=not args.allow_unmapped,
        link_description=args.link_description,
        compute_diff=args.diff,
    )
    if args.output:
        Path(args.output).write_text(outcome.document_text, encoding="utf-8")
    else:
        sys.stdout.write(outcome.document_text)
    if args.diff:
        sys.stderr.write(outcome.diff_text)
    if args.stats:
        sys.stderr.write(summarize(outcome.report, args.stats))
    return EXIT_OK


def _cmd_analyze(args: argparse.Namespace) -> int:
    data = read_source(args.input)
    report = run_analysis(data)
    if args.table:
        sys.stdout.write(report.to_csv())
    else:
        sys.stdout.write(json.dumps(report.to_dict(), indent=2) + "\n")
    return EXIT_OK


def _discover_corpus_files(directory: Path, max_size: int) -> List[Path]:
    files = []
    for path in sorted(directory.rglob("*")):
        if not path.is_file() or path.suffix.lower() not in CORPUS_SUFFIXES:
            continue
        if path.stat().st_size > max_size:
            sys.stderr.write(f"warning: skipping {path} (larger than {max_size} bytes)\n")
            continue
        files.append(path)
    return files


def _scan_file(task: Tuple[str, str, bool]) -> DocumentScan:
    name, path, with_generator = task
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        scan = DocumentScan(name=name)
        scan.parse_failed = True
        scan.error = f"unreadable: {exc}"
        return scan
    return scan_source(name, data, run_generator=with_generator)


def _cmd_corpus(args: argparse.Namespace) -> int:
    directory = Path(args.directory)
    if not directory.is_dir():
        raise FetchError(f"not a directory: {directory}")
    files = _discover_corpus_files(directory, args.max_file_size)
    tasks = [
        (str(path.relative_to(directory)), str(path), args.with_generator) for path in files
    ]
    jobs = args.jobs if args.jobs and args.jobs > 0 else _default_jobs()
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            scans = list(pool.map(_scan_file, tasks, chunksize=8))
    else:
        scans = [_scan_file(task) for task in tasks]
    report = build_corpus_report(scans)

    payload = json.dumps(report.to_dict(), indent=2) + "\n"
    if args.report:
        Path(args.report).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    if args.csv:
        Path(args.csv).write_text(report.to_csv(), encoding="utf-8")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"generate": _cmd_generate, "analyze": _cmd_analyze, "corpus": _cmd_corpus}
    try:
        return handlers[args.command](args)
    except (
        DocumentSyntaxError,
        UnsupportedVersionError,
        ConversionError,
        InvalidDocumentError,
        EmptyInputError,
    ) as exc:
        location = ""
        if isinstance(exc, DocumentSyntaxError) and exc.line is not None:
            location = f" (line {exc.line}, column {exc.column})"
        sys.stderr.write(f"error: {args.input if hasattr(args, 'input') else ''}: {exc}{location}\n")
        return EXIT_PARSE
    except (FetchError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO
    except OlgError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
