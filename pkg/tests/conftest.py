"""Shared pytest setup for the autoplex suite."""

import logging
import sys
from pathlib import Path

import pytest

# Ensure project root is on sys.path so imports work when running tests
ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

FIXTURES = Path(__file__).resolve().parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(autouse=True)
def isolated_env(monkeypatch, tmp_path):
    """Keep logs and caches of every test inside its own tmp directory."""
    monkeypatch.setenv("AUTOPLEX_LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.delenv("AUTOPLEX_CACHE", raising=False)
    monkeypatch.delenv("AUTOPLEX_THREADS", raising=False)
    monkeypatch.delenv("AUTOPLEX_SPLIT_DEPTH", raising=False)
    monkeypatch.delenv("AUTOPLEX_LOG_LEVEL", raising=False)


@pytest.fixture
def restore_root_logging():
    """configure_logging replaces the root handlers; put them back after the test."""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    for h in list(root.handlers):
        if h not in handlers:
            root.removeHandler(h)
            h.close()
    for h in handlers:
        if h not in root.handlers:
            root.addHandler(h)
    root.setLevel(level)
