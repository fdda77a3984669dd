"""HTTP facade over generation and analysis.

Stateless JSON API: documents arrive as pasted text, an uploaded file, or a
URL the service fetches; nothing is persisted. Configuration comes from the
environment: ``OLG_BIND``/``OLG_PORT`` (server address), ``OLG_MAX_BODY``
(request size cap, bytes), ``OLG_CORS_ORIGIN`` (allowed browser origin) and
``OLG_STATIC_DIR`` (optional directory with the web frontend build).
"""

from __future__ import annotations

import os
from typing import Any, Dict, Optional, Tuple

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import __version__
from .errors import (
    DocumentSyntaxError,
    EmptyInputError,
    FetchError,
    InvalidDocumentError,
    OlgError,
    UnsupportedVersionError,
)
from .pipeline import run_analysis, run_generation
from .sources import fetch_url

DEFAULT_MAX_BODY = 20 * 1024 * 1024


class _RequestProblem(Exception):
    def __init__(self, status: int, payload: Dict[str, Any]):
        super().__init__(payload.get("error", ""))
        self.status = status
        self.payload = payload


def _problem(status: int, message: str, **extra: Any) -> _RequestProblem:
    return _RequestProblem(status, {"error": message, **extra})


async def _read_document(request: Request, max_body: int) -> bytes:
    """Extract the document bytes from a JSON or multipart request body."""
    declared = request.headers.get("content-length")
    if declared and declared.isdigit() and int(declared) > max_body:
        raise _problem(413, f"request body exceeds {max_body} bytes")
    body = await request.body()
    if len(body) > max_body:
        raise _problem(413, f"request body exceeds {max_body} bytes")

    content_type = request.headers.get("content-type", "")
    if content_type.startswith("multipart/form-data"):
        form = await request.form()
        upload = form.get("file")
        if upload is None:
            raise _problem(400, "multipart body must carry a 'file' field")
        data = await upload.read() if hasattr(upload, "read") else str(upload).encode("utf-8")
        if not data:
            raise _problem(400, "uploaded file is empty")
        return data

    import json

    try:
        payload = json.loads(body or b"{}")
    except json.JSONDecodeError as exc:
        raise _problem(400, f"request body is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise _problem(400, "request body must be a JSON object")
    text = payload.get("text")
    url = payload.get("url")
    if (text is None) == (url is None):
        raise _problem(400, "provide exactly one of 'text' or 'url'")
    if text is not None:
        if not isinstance(text, str) or not text.strip():
            raise _problem(400, "'text' must be a non-empty string")
        return text.encode("utf-8")
    if not isinstance(url, str) or not url.startswith(("http://", "https://")):
        raise _problem(400, "'url' must be an http(s) URL")
    try:
        return fetch_url(url, max_bytes=max_body)
    except FetchError as exc:
        raise _problem(502, str(exc)) from exc


def _translate_error(exc: OlgError) -> _RequestProblem:
    if isinstance(exc, DocumentSyntaxError):
        return _problem(400, str(exc), line=exc.line, column=exc.column)
    if isinstance(exc, (EmptyInputError, InvalidDocumentError)):
        return _problem(400, str(exc), line=None, column=None)
    if isinstance(exc, UnsupportedVersionError):
        return _problem(422, str(exc))
    return _problem(400, str(exc), line=None, column=None)


def create_app(
    max_body: Optional[int] = None,
    cors_origin: Optional[str] = None,
    static_dir: Optional[str] = None,
) -> FastAPI:
    max_body = max_body if max_body is not None else int(os.environ.get("OLG_MAX_BODY", DEFAULT_MAX_BODY))
    cors_origin = cors_origin if cors_origin is not None else os.environ.get("OLG_CORS_ORIGIN")
    static_dir = static_dir if static_dir is not None else os.environ.get("OLG_STATIC_DIR")

    app = FastAPI(title="OpenAPI link generator service", version=__version__)
    if cors_origin:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=[cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(_RequestProblem)
    async def _handle_problem(_request: Request, exc: _RequestProblem) -> JSONResponse:
        return JSONResponse(status_code=exc.status, content=exc.payload)

    @app.post("/api/generate")
    async def generate(
        request: Request,
        format: Optional[str] = Query(None, pattern="^(json|yaml)$"),
        allow_unmapped: bool = Query(False),
    ) -> JSONResponse:
        data = await _read_document(request, max_body)
        try:
            outcome = run_generation(
                data,
                output_format=format,
                require_mapping=not allow_unmapped,
                compute_diff=True,
            )
        except OlgError as exc:
            raise _translate_error(exc) from exc
        return JSONResponse(
            {
                "document": outcome.document_text,
                "diff": outcome.diff_text,
                "stats": outcome.report.to_dict(),
            }
        )

    @app.post("/api/analyze")
    async def analyze(request: Request) -> JSONResponse:
        data = await _read_document(request, max_body)
        try:
            report = run_analysis(data)
        except OlgError as exc:
            raise _translate_error(exc) from exc
        return JSONResponse(report.to_dict())

    @app.get("/api/health")
    async def health() -> Dict[str, str]:
        return {"status": "ok", "version": __version__}

    if static_dir and os.path.isdir(static_dir):
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="frontend")
    return app


app = create_app()


def main() -> None:
    import uvicorn

    uvicorn.run(
        "olg.service:app",
        host=os.environ.get("OLG_BIND", "127.0.0.1"),
        port=int(os.environ.get("OLG_PORT", "8080")),
    )


if __name__ == "__main__":
    main()
