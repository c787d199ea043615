"""HTTP clients for the four model endpoints, plus deterministic mocks.

Wire protocols:
  POST /v1/chat       {"prompt", "max_tokens", "temperature"} -> {"text"}
  POST /v1/fill-mask  {"text" (one [MASK]), "top_k"} -> {"fills": [{"token","prob"}...]}
                      {"text", "score_positions": [...]} -> {"logprobs": [...]}
  POST /v1/classify   {"texts": [...]} -> {"labels": [...], "scores": [...]}
  POST /v1/embeddings {"texts": [...]} -> {"vectors": [[...]...], "dim": d}

Mock classes implement the same call signatures without a network. Calls
are issued sequentially (in-flight budget of one); aggregation upstream
is commutative so this is a latency choice, not a correctness one.
"""

from __future__ import annotations

import json
import logging
import os
import time
import zlib
from dataclasses import dataclass
from typing import Callable, Sequence

import requests

from .errors import EndpointError

logger = logging.getLogger(__name__)

MASK = "[MASK]"

ENV_URLS = {
    "chat": "FETCH_CHAT_URL",
    "embed": "FETCH_EMBED_URL",
    "fill-mask": "FETCH_FILLMASK_URL",
    "classify": "FETCH_CLASSIFY_URL",
}


def resolve_url(kind: str, configured: str | None) -> str | None:
    """Endpoint URL with environment override (env wins over config)."""
    return os.environ.get(ENV_URLS[kind]) or configured


@dataclass(frozen=True)
class EndpointConfig:
    url: str
    timeout: float = 30.0
    max_retries: int = 3
    batch_size: int = 32
    backoff: float = 0.5


def post_json(cfg: EndpointConfig, payload: dict) -> dict:
    """POST with retry/backoff on 5xx and transport errors; 4xx is fatal."""
    last: Exception | None = None
    for attempt in range(cfg.max_retries + 1):
        try:
            resp = requests.post(cfg.url, json=payload, timeout=cfg.timeout)
            if resp.status_code >= 500:
                raise EndpointError(f"{cfg.url}: HTTP {resp.status_code}")
            if resp.status_code >= 400:
                raise EndpointError(
                    f"{cfg.url}: HTTP {resp.status_code}: {resp.text[:200]}")
            return resp.json()
        except EndpointError as exc:
            if "HTTP 4" in str(exc):
                raise
            last = exc
        except (requests.RequestException, ValueError) as exc:
            last = exc
        if attempt < cfg.max_retries:
            time.sleep(cfg.backoff * (2 ** attempt))
    raise EndpointError(f"{cfg.url}: gave up after {cfg.max_retries + 1} "
                        f"attempts: {last}")


class ChatClient:
    def __init__(self, cfg: EndpointConfig):
        self.cfg = cfg

    def complete(self, prompt: str, max_tokens: int = 512,
                 temperature: float = 0.0) -> str:
        out = post_json(self.cfg, {"prompt": prompt, "max_tokens": max_tokens,
                                   "temperature": temperature})
        return out["text"]


class FillMaskClient:
    def __init__(self, cfg: EndpointConfig):
        self.cfg = cfg

    def fill(self, text: str, top_k: int) -> list[tuple[str, float]]:
        out = post_json(self.cfg, {"text": text, "top_k": top_k})
        return [(f["token"], float(f["prob"])) for f in out["fills"]]

    def score(self, text: str, positions: Sequence[int]) -> list[float]:
        out = post_json(self.cfg, {"text": text,
                                   "score_positions": list(positions)})
        return [float(x) for x in out["logprobs"]]


class ClassifyClient:
    def __init__(self, cfg: EndpointConfig):
        self.cfg = cfg

    def classify(self, texts: Sequence[str]) -> list[tuple[str, float]]:
        out: list[tuple[str, float]] = []
        bs = self.cfg.batch_size
        for i in range(0, len(texts), bs):
            resp = post_json(self.cfg, {"texts": list(texts[i:i + bs])})
            out.extend(zip(resp["labels"], map(float, resp["scores"])))
        return out


class EmbedClient:
    def __init__(self, cfg: EndpointConfig):
        self.cfg = cfg

    def embed(self, texts: Sequence[str]) -> list[list[float]]:
        out: list[list[float]] = []
        bs = self.cfg.batch_size
        for i in range(0, len(texts), bs):
            resp = post_json(self.cfg, {"texts": list(texts[i:i + bs])})
            out.extend(resp["vectors"])
        return out


# --- deterministic mocks -------------------------------------------------


class OracleChat:
    """Chat mock that answers the DIRECT prompt with the configured terms
    found (case-insensitively) in the prompt text. Terms never collide
    with the fixed prompt wording, so this is an exact planted-term oracle.
    """

    def __init__(self, terms: Sequence[str]):
        self.terms = list(terms)
        self.calls = 0

    def complete(self, prompt: str, max_tokens: int = 512,
                 temperature: float = 0.0) -> str:
        self.calls += 1
        low = prompt.casefold()
        found = [t for t in self.terms if t.casefold() in low]
        return json.dumps({"dogwhistles": found})


class ScriptedChat:
    """Replays canned responses in order, cycling when exhausted."""

    def __init__(self, responses: Sequence[str]):
        if not responses:
            raise ValueError("ScriptedChat needs at least one response")
        self.responses = list(responses)
        self.calls = 0

    def complete(self, prompt: str, max_tokens: int = 512,
                 temperature: float = 0.0) -> str:
        out = self.responses[self.calls % len(self.responses)]
        self.calls += 1
        return out


class OracleClassifier:
    """Labels a text positive iff it contains one of the configured terms."""

    def __init__(self, terms: Sequence[str], positive_label: str = "hate",
                 negative_label: str = "neutral"):
        self.terms = [t.casefold() for t in terms]
        self.positive_label = positive_label
        self.negative_label = negative_label

    def classify(self, texts: Sequence[str]) -> list[tuple[str, float]]:
        out = []
        for text in texts:
            low = text.casefold()
            if any(t in low for t in self.terms):
                out.append((self.positive_label, 0.99))
            else:
                out.append((self.negative_label, 0.99))
        return out


class YesNoChat:
    """Chat mock for the PREDICT yes/no filter, backed by a predicate on
    the prompt text (e.g. contains a planted term)."""

    def __init__(self, predicate: Callable[[str], bool]):
        self.predicate = predicate

    def complete(self, prompt: str, max_tokens: int = 512,
                 temperature: float = 0.0) -> str:
        return "Yes" if self.predicate(prompt) else "No"


class MockFillMask:
    """Deterministic fill-mask stand-in.

    With ``fills`` set, every mask request returns that fixed
    distribution. Otherwise fills are derived from the request text: its
    distinct non-mask tokens in order, with harmonically decaying
    probabilities, so candidates stay corpus-plausible. Scoring returns a
    hash-seeded pseudo log-probability per position unless ``score_fn``
    overrides it.
    """

    def __init__(self, fills: Sequence[tuple[str, float]] | None = None,
                 score_fn: Callable[[str, Sequence[int]], list[float]] | None = None):
        self.fills = list(fills) if fills is not None else None
        self.score_fn = score_fn
        self.calls = 0

    def fill(self, text: str, top_k: int) -> list[tuple[str, float]]:
        self.calls += 1
        if self.fills is not None:
            return self.fills[:top_k]
        seen: list[str] = []
        for tok in text.split():
            if tok != MASK and tok not in seen:
                seen.append(tok)
        if not seen:
            seen = ["filler"]
        weights = [1.0 / (i + 1) for i in range(len(seen[:top_k]))]
        z = sum(weights)
        return [(tok, w / z) for tok, w in zip(seen, weights)]

    def score(self, text: str, positions: Sequence[int]) -> list[float]:
        self.calls += 1
        if self.score_fn is not None:
            return self.score_fn(text, positions)
        out = []
        for pos in positions:
            h = zlib.crc32(f"{text}\x00{pos}".encode("utf-8"))
            out.append(-1.0 - (h % 10_000) / 1_000.0)
        return out
