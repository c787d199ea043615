"""Shim configuration and the backend container.

An endpoint is served iff its backend slot is filled; load_backends
builds real model-backed slots from the configured model ids and any
load failure refuses startup rather than serving a half-alive shim.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, Sequence, runtime_checkable


class ShimError(Exception):
    pass


@dataclass(frozen=True)
class ShimConfig:
    embed_model: str | None = None
    fillmask_model: str | None = None
    chat_model: str | None = None
    classify_model: str | None = None
    device: str = "cpu"
    max_batch: int = 128           # request texts per call, 413 beyond
    max_response_tokens: int = 512  # chat length cap, reproducibility
    host: str = "127.0.0.1"
    port: int = 8707

    def __post_init__(self):
        if self.max_batch < 1:
            raise ShimError("max_batch must be >= 1")
        if self.max_response_tokens < 1:
            raise ShimError("max_response_tokens must be >= 1")


@runtime_checkable
class EmbedBackend(Protocol):
    model_id: str
    dim: int

    def embed(self, texts: Sequence[str]) -> list[list[float]]: ...


@runtime_checkable
class FillMaskBackend(Protocol):
    model_id: str

    def fill(self, text: str, top_k: int) -> list[tuple[str, float]]: ...

    def score(self, text: str, positions: Sequence[int]) -> list[float]: ...


@runtime_checkable
class ChatBackend(Protocol):
    model_id: str

    def complete(self, prompt: str, max_tokens: int,
                 temperature: float) -> str: ...


@runtime_checkable
class ClassifyBackend(Protocol):
    model_id: str

    def classify(self, texts: Sequence[str]) -> tuple[list[str], list[float]]: ...


@dataclass
class Backends:
    embed: EmbedBackend | None = None
    fillmask: FillMaskBackend | None = None
    chat: ChatBackend | None = None
    classify: ClassifyBackend | None = None

    def enabled(self) -> list[str]:
        out = []
        if self.embed is not None:
            out.append("embeddings")
        if self.fillmask is not None:
            out.append("fill-mask")
        if self.chat is not None:
            out.append("chat")
        if self.classify is not None:
            out.append("classify")
        return out

    def model_ids(self) -> dict[str, str]:
        pairs = (("embeddings", self.embed), ("fill-mask", self.fillmask),
                 ("chat", self.chat), ("classify", self.classify))
        return {name: b.model_id for name, b in pairs if b is not None}
