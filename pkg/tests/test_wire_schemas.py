"""Pin the JSON wire formats shared with serving backends.

The documents our mocks emit (and our clients consume) must validate
against the frozen fixtures in schemas/; any server implementing the
protocols is tested against the same files, so drift on either side
fails before an integration run does.
"""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import pytest

from earshot.endpoints import MockFillMask, OracleChat, OracleClassifier
from earshot.vectorstore import EmbeddingProviderConfig, embed_texts

SCHEMA_DIR = Path(__file__).resolve().parents[1] / "schemas"


def _load(name: str) -> dict:
    return json.loads((SCHEMA_DIR / name).read_text("utf-8"))


def _check(payload: dict, schema_name: str) -> None:
    jsonschema.validate(payload, _load(schema_name))


def test_schema_fixtures_present():
    names = sorted(p.name for p in SCHEMA_DIR.glob("*.schema.json"))
    assert names == ["chat_response.schema.json",
                     "classify_response.schema.json",
                     "embeddings_response.schema.json",
                     "fill_mask_fills_response.schema.json",
                     "fill_mask_score_response.schema.json",
                     "healthz_response.schema.json"]


def test_embeddings_document_validates():
    provider = EmbeddingProviderConfig(dim=16, seed=3)
    vectors = embed_texts(provider, ["one post", "another post"])
    _check({"vectors": vectors.tolist(), "dim": provider.dim},
           "embeddings_response.schema.json")


def test_embeddings_schema_rejects_drift():
    schema = _load("embeddings_response.schema.json")
    for bad in ({"vectors": [[0.1]]},                       # missing dim
                {"vectors": [[0.1]], "dim": 0},             # dim < 1
                {"vectors": [], "dim": 4},                  # empty batch
                {"vectors": [["x"]], "dim": 4},             # non-numeric
                {"vectors": [[0.1]], "dim": 4, "extra": 1}):
        with pytest.raises(jsonschema.ValidationError):
            jsonschema.validate(bad, schema)


def test_fill_mask_fills_document_validates():
    fills = MockFillMask().fill("a quick [MASK] fix", top_k=5)
    _check({"fills": [{"token": t, "prob": p} for t, p in fills]},
           "fill_mask_fills_response.schema.json")


def test_fill_mask_fills_schema_rejects_drift():
    schema = _load("fill_mask_fills_response.schema.json")
    for bad in ({"fills": [{"token": "a"}]},                # missing prob
                {"fills": [{"token": "", "prob": 0.5}]},    # empty token
                {"fills": [{"token": "a", "prob": 1.5}]},   # prob > 1
                {"fills": [{"token": "a", "prob": 0.5, "rank": 1}]}):
        with pytest.raises(jsonschema.ValidationError):
            jsonschema.validate(bad, schema)


def test_fill_mask_score_document_validates():
    logprobs = MockFillMask().score("some scored text", [0, 2])
    _check({"logprobs": logprobs}, "fill_mask_score_response.schema.json")


def test_chat_document_validates():
    text = OracleChat(["snarfel"]).complete("post mentions snarfel here")
    _check({"text": text}, "chat_response.schema.json")
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"text": text, "usage": {}},
                            _load("chat_response.schema.json"))


def test_classify_document_validates():
    pairs = OracleClassifier(["jogger"]).classify(["a jogger", "a baker"])
    _check({"labels": [l for l, _ in pairs],
            "scores": [s for _, s in pairs]},
           "classify_response.schema.json")


def test_classify_schema_rejects_drift():
    schema = _load("classify_response.schema.json")
    for bad in ({"labels": ["hate"]},                       # missing scores
                {"labels": [""], "scores": [0.5]},          # empty label
                {"labels": ["ok"], "scores": [1.2]}):       # score > 1
        with pytest.raises(jsonschema.ValidationError):
            jsonschema.validate(bad, schema)


def test_healthz_examples_validate():
    schema = _load("healthz_response.schema.json")
    jsonschema.validate({"status": "ok",
                         "endpoints": ["embeddings", "chat"],
                         "models": {"embeddings": "m1", "chat": "m2"},
                         "dim": 384}, schema)
    jsonschema.validate({"status": "ok", "endpoints": ["chat"],
                         "models": {"chat": "m2"}, "dim": None}, schema)
    for bad in ({"status": "down", "endpoints": [], "models": {}, "dim": None},
                {"status": "ok", "endpoints": ["grpc"], "models": {},
                 "dim": None}):
        with pytest.raises(jsonschema.ValidationError):
            jsonschema.validate(bad, schema)
