from pathlib import Path
from typing import List

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS = FIXTURES / "corpus"
V2_GOLDEN = FIXTURES / "v2_golden"


def corpus_files() -> List[Path]:
    return sorted(p for p in CORPUS.iterdir() if p.suffix in (".json", ".yaml", ".yml"))


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def corpus_dir() -> Path:
    return CORPUS


@pytest.fixture
def github_doc() -> bytes:
    return (FIXTURES / "github.yaml").read_bytes()
