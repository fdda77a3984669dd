import json

import pytest
from fastapi.testclient import TestClient

import olg.service as service_module
from olg.errors import FetchError
from olg.pipeline import run_generation
from olg.service import create_app


@pytest.fixture
def client():
    return TestClient(create_app(max_body=1024 * 1024, cors_origin="http://ui.test"))


def test_health(client):
    response = client.get("/api/health")
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "ok"
    assert body["version"]


def test_generate_from_text(client, github_doc):
    response = client.post("/api/generate", json={"text": github_doc.decode()})
    assert response.status_code == 200
    body = response.json()
    assert set(body) == {"document", "diff", "stats"}
    expected = run_generation(github_doc)
    assert body["document"] == expected.document_text
    assert body["diff"] == expected.diff_text
    assert body["stats"] == expected.report.to_dict()
    assert body["stats"]["links_added"] == 1


def test_generate_minimal_document_changes_nothing(client):
    response = client.post("/api/generate", json={"text": "openapi: 3.0.0\n"})
    assert response.status_code == 200
    body = response.json()
    assert body["stats"]["links_added"] == 0
    assert body["diff"] == ""
    assert body["document"] == "openapi: 3.0.0\n"


def test_generate_format_query(client, github_doc):
    response = client.post("/api/generate?format=json", json={"text": github_doc.decode()})
    assert response.status_code == 200
    assert json.loads(response.json()["document"])["openapi"].startswith("3.")


def test_generate_bad_format_query(client, github_doc):
    response = client.post("/api/generate?format=xml", json={"text": github_doc.decode()})
    assert response.status_code == 422


def test_generate_allow_unmapped_query(client, corpus_dir):
    text = (corpus_dir / "keyword-in-path.yaml").read_text()
    strict = client.post("/api/generate", json={"text": text})
    assert strict.json()["stats"]["links_added"] == 0
    loose = client.post("/api/generate?allow_unmapped=true", json={"text": text})
    assert loose.json()["stats"]["links_added"] == 1


def test_generate_multipart_upload(client, github_doc):
    response = client.post(
        "/api/generate",
        files={"file": ("doc.yaml", github_doc, "application/yaml")},
    )
    assert response.status_code == 200
    assert response.json()["stats"]["links_added"] == 1


def test_multipart_without_file_field(client, github_doc):
    response = client.post(
        "/api/generate",
        files={"other": ("doc.yaml", github_doc, "application/yaml")},
    )
    assert response.status_code == 400
    assert "file" in response.json()["error"]


def test_source_union_is_exclusive(client):
    for payload in ({}, {"text": "a", "url": "http://x.test/a"}):
        response = client.post("/api/generate", json=payload)
        assert response.status_code == 400
        assert "exactly one" in response.json()["error"]


def test_text_must_be_non_empty(client):
    response = client.post("/api/generate", json={"text": "   "})
    assert response.status_code == 400


def test_parse_error_returns_400_with_position(client):
    response = client.post(
        "/api/generate", json={"text": '{"openapi": "3.0.0",\n  "paths": }'}
    )
    assert response.status_code == 400
    body = response.json()
    assert body["line"] == 2
    assert body["column"] is not None
    assert body["error"]


def test_unsupported_version_returns_422(client):
    response = client.post("/api/generate", json={"text": '{"swagger": "1.0"}'})
    assert response.status_code == 422


def test_url_fetch_failure_returns_502(client, monkeypatch):
    def boom(url, **kwargs):
        raise FetchError(f"could not fetch {url}")

    monkeypatch.setattr(service_module, "fetch_url", boom)
    response = client.post("/api/generate", json={"url": "http://api.test/doc.yaml"})
    assert response.status_code == 502
    assert "could not fetch" in response.json()["error"]


def test_url_fetch_success(client, monkeypatch, github_doc):
    monkeypatch.setattr(service_module, "fetch_url", lambda url, **kwargs: github_doc)
    response = client.post("/api/generate", json={"url": "http://api.test/doc.yaml"})
    assert response.status_code == 200
    assert response.json()["stats"]["links_added"] == 1


def test_non_http_url_rejected(client):
    response = client.post("/api/generate", json={"url": "ftp://files.test/doc"})
    assert response.status_code == 400


def test_body_size_limit():
    client = TestClient(create_app(max_body=200))
    response = client.post("/api/generate", json={"text": "x" * 500})
    assert response.status_code == 413


def test_analyze_endpoint(client, corpus_dir):
    text = (corpus_dir / "all-16-keywords.yaml").read_text()
    response = client.post("/api/analyze", json={"text": text})
    assert response.status_code == 200
    report = response.json()
    assert report["property_counts"]["oneOf"] == 1
    assert report["has_any_flagged_property"] is True
    assert report["multi_success_operations"] == []


def test_analyze_accepts_swagger2(client, corpus_dir):
    text = (corpus_dir / "tracker-v2.yaml").read_text()
    response = client.post("/api/analyze", json={"text": text})
    assert response.status_code == 200
    assert response.json()["multi_success_operations"] == [
        {"path": "/tickets", "method": "get", "success_codes": ["200", "202"]}
    ]


def test_method_not_allowed(client):
    assert client.get("/api/generate").status_code == 405
    assert client.post("/api/health").status_code == 405


def test_cors_headers_present(client, github_doc):
    response = client.post(
        "/api/generate",
        json={"text": github_doc.decode()},
        headers={"Origin": "http://ui.test"},
    )
    assert response.headers.get("access-control-allow-origin") == "http://ui.test"


def test_static_frontend_mount(tmp_path, github_doc):
    (tmp_path / "index.html").write_text("<!doctype html><title>ui</title>")
    client = TestClient(create_app(static_dir=str(tmp_path)))
    page = client.get("/")
    assert page.status_code == 200
    assert "ui" in page.text
    # API routes must still win over the static mount.
    response = client.post("/api/generate", json={"text": github_doc.decode()})
    assert response.status_code == 200
