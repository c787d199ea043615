"""Shared fixtures: an app wired to deterministic test doubles and the
schema fixtures frozen at the repository root."""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import pytest
from fastapi.testclient import TestClient

from modelshim.app import create_app
from modelshim.config import Backends, ShimConfig
from modelshim.testing import (EchoInstructChat, HashEmbedder,
                               KeywordClassifier, TinyMaskFiller)

SCHEMA_DIR = Path(__file__).resolve().parents[2] / "schemas"


@pytest.fixture()
def validate_schema():
    def _validate(payload: dict, schema_name: str) -> None:
        schema = json.loads((SCHEMA_DIR / schema_name).read_text("utf-8"))
        jsonschema.validate(payload, schema)
    return _validate


@pytest.fixture()
def doubles() -> Backends:
    return Backends(embed=HashEmbedder(dim=64), fillmask=TinyMaskFiller(),
                    chat=EchoInstructChat(),
                    classify=KeywordClassifier(["jogger"]))


@pytest.fixture()
def shim_cfg() -> ShimConfig:
    return ShimConfig(max_batch=8, max_response_tokens=64)


@pytest.fixture()
def client(shim_cfg, doubles) -> TestClient:
    return TestClient(create_app(shim_cfg, doubles))
