"""Shared fixtures: fixture-tree paths and a clean output environment."""

from __future__ import annotations

from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture
def configs() -> Path:
    return FIXTURES / "configs"


@pytest.fixture(autouse=True)
def _no_ambient_out_dir(monkeypatch):
    # the output-dir env override must never leak in from the host shell
    monkeypatch.delenv("ECOINDEX_OUT", raising=False)
