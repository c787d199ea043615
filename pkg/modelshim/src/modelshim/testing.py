"""Deterministic in-process backends for tests and demos.

Hash-derived outputs keep every double reproducible across processes;
none of them touches the network or loads model weights.
"""

from __future__ import annotations

import hashlib
from typing import Sequence

import numpy as np

from .backends import MASK


def _seed64(text: str) -> int:
    return int.from_bytes(hashlib.blake2s(text.encode("utf-8")).digest()[:8],
                          "big")


class HashEmbedder:
    """Unit-norm Gaussian vector seeded by the text hash: equal texts get
    equal vectors, distinct texts are near-orthogonal in expectation."""

    model_id = "double/hash-embedder"

    def __init__(self, dim: int = 64):
        self.dim = dim

    def embed(self, texts: Sequence[str]) -> list[list[float]]:
        rows = []
        for text in texts:
            vec = np.random.default_rng(_seed64(text)).standard_normal(self.dim)
            vec /= np.linalg.norm(vec)
            rows.append([float(x) for x in vec])
        return rows


class TinyMaskFiller:
    """Fills from the request's own non-mask tokens with harmonically
    decaying, normalized probabilities; scores are hash-derived negative
    log-probabilities."""

    model_id = "double/mask-filler"

    def fill(self, text: str, top_k: int) -> list[tuple[str, float]]:
        seen: list[str] = []
        for tok in text.split():
            if tok != MASK and tok not in seen:
                seen.append(tok)
        seen = seen[:top_k] or ["filler"]
        weights = [1.0 / (i + 1) for i in range(len(seen))]
        z = sum(weights)
        return [(tok, w / z) for tok, w in zip(seen, weights)]

    def score(self, text: str, positions: Sequence[int]) -> list[float]:
        return [-1.0 - (_seed64(f"{text}\x00{pos}") % 9000) / 1000.0
                for pos in positions]


class EchoInstructChat:
    """Instruct-model stand-in for extraction prompts. Mostly answers with
    chatter wrapping a {"dogwhistles": [...]} object; a deterministic
    tenth of prompts gets an unparseable refusal so parse-rate metrics
    measure something real. Records the decode settings it was given."""

    model_id = "double/instruct-chat"

    def __init__(self):
        self.last_max_tokens: int | None = None
        self.last_temperature: float | None = None

    def complete(self, prompt: str, max_tokens: int,
                 temperature: float) -> str:
        self.last_max_tokens = max_tokens
        self.last_temperature = temperature
        if _seed64(prompt) % 10 == 0:
            return "I am sorry, I cannot help with that request."
        words = [w.strip(".,!?\"'") for w in prompt.split() if len(w) > 3]
        term = words[-1].casefold() if words else "term"
        return ("Sure, here is the analysis you asked for.\n"
                f'{{"dogwhistles": ["{term}"]}}\n'
                "Let me know if you need anything else.")


class KeywordClassifier:
    """Labels a text positive iff it contains a configured term."""

    model_id = "double/keyword-classifier"

    def __init__(self, positive_terms: Sequence[str],
                 positive_label: str = "hate",
                 negative_label: str = "neutral"):
        self.terms = [t.casefold() for t in positive_terms]
        self.positive_label = positive_label
        self.negative_label = negative_label

    def classify(self, texts: Sequence[str]) -> tuple[list[str], list[float]]:
        labels, scores = [], []
        for text in texts:
            low = text.casefold()
            hit = any(t in low for t in self.terms)
            labels.append(self.positive_label if hit else self.negative_label)
            scores.append(0.97 if hit else 0.96)
        return labels, scores
