"""Static word/phrase embeddings: collocation phraser + skip-gram training.

Training is skip-gram with negative sampling (5 negatives, unigram^0.75
noise distribution, linearly decaying learning rate). These constants are
documented here, not tuned claims. Single-threaded training with a fixed
seed is bit-reproducible; the optional parallel mode is hogwild-style and
exempt from byte-equality guarantees.
"""

from __future__ import annotations

import json
import logging
import struct
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import EarshotError

logger = logging.getLogger(__name__)

NEGATIVES = 5
ALPHA0 = 0.025
MIN_ALPHA = 1e-4
NOISE_POWER = 0.75
PHRASE_JOIN = "_"


# --- phraser -----------------------------------------------------------


@dataclass
class _LevelCounts:
    unigram: dict[str, int] = field(default_factory=dict)
    bigram: dict[tuple[str, str], int] = field(default_factory=dict)
    total: int = 0


@dataclass
class PhraserModel:
    """Collocation statistics for greedy adjacent-pair merging.

    ``passes=1`` merges raw bigrams ("new york" -> "new_york");
    ``passes=2`` re-counts the merged stream so three-token phrases
    become reachable ("new_york city" -> "new_york_city").
    """

    min_count: int = 5
    threshold: float = 10.0
    passes: int = 1
    levels: list[_LevelCounts] = field(default_factory=list)

    # level-0 views, i.e. the raw-corpus statistics
    @property
    def unigram_counts(self) -> dict[str, int]:
        return self.levels[0].unigram if self.levels else {}

    @property
    def bigram_counts(self) -> dict[tuple[str, str], int]:
        return self.levels[0].bigram if self.levels else {}

    @property
    def total_tokens(self) -> int:
        return self.levels[0].total if self.levels else 0

    def score(self, a: str, b: str, level: int = 0) -> float:
        """(count(ab) - min_count) * total / (count(a) * count(b))."""
        lv = self.levels[level]
        ca, cb = lv.unigram.get(a, 0), lv.unigram.get(b, 0)
        if ca == 0 or cb == 0:
            return float("-inf")
        return (lv.bigram.get((a, b), 0) - self.min_count) * lv.total / (ca * cb)

    def merge_sentence(self, tokens: Sequence[str]) -> list[str]:
        out = list(tokens)
        for level in range(min(self.passes, len(self.levels))):
            out = self._merge_once(out, level)
        return out

    def _merge_once(self, tokens: Sequence[str], level: int) -> list[str]:
        # left-to-right greedy, merged pairs cannot overlap
        out: list[str] = []
        i = 0
        while i < len(tokens):
            if i + 1 < len(tokens) and \
                    self.score(tokens[i], tokens[i + 1], level) > self.threshold:
                out.append(tokens[i] + PHRASE_JOIN + tokens[i + 1])
                i += 2
            else:
                out.append(tokens[i])
                i += 1
        return out


def _count_level(sentences: Iterable[Sequence[str]]) -> _LevelCounts:
    lv = _LevelCounts()
    uni, bi = lv.unigram, lv.bigram
    for sent in sentences:
        lv.total += len(sent)
        prev = None
        for tok in sent:
            uni[tok] = uni.get(tok, 0) + 1
            if prev is not None:
                key = (prev, tok)
                bi[key] = bi.get(key, 0) + 1
            prev = tok
    return lv


def fit_phraser(sentences: Sequence[Sequence[str]], min_count: int = 5,
                threshold: float = 10.0, passes: int = 1) -> PhraserModel:
    """Count collocation statistics over ``sentences`` for 1 or 2 passes."""
    if passes not in (1, 2):
        raise EarshotError(f"phraser passes must be 1 or 2, got {passes}")
    model = PhraserModel(min_count=min_count, threshold=threshold, passes=passes)
    model.levels.append(_count_level(sentences))
    if passes == 2:
        merged = (model._merge_once(s, 0) for s in sentences)
        model.levels.append(_count_level(merged))
    return model


def merge_phrases(sentences: Iterable[Sequence[str]],
                  model: PhraserModel) -> Iterable[list[str]]:
    """Apply the fitted merges to a token stream, sentence by sentence."""
    for sent in sentences:
        yield model.merge_sentence(sent)


# --- skip-gram embeddings ----------------------------------------------


@dataclass
class EmbeddingModel:
    vocab: dict[str, int]
    vectors: np.ndarray  # (V, dim) float32
    dim: int
    trained_epochs: int
    rng_seed: int = 0
    tokens: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.tokens:
            self.tokens = [""] * len(self.vocab)
            for tok, i in self.vocab.items():
                self.tokens[i] = tok
        self._unit: np.ndarray | None = None

    def __contains__(self, token: str) -> bool:
        return token in self.vocab

    def unit_vectors(self) -> np.ndarray:
        """Row-normalized float64 copy used for all similarity math."""
        if self._unit is None:
            v = self.vectors.astype(np.float64)
            norms = np.linalg.norm(v, axis=1, keepdims=True)
            norms[norms == 0] = 1.0
            self._unit = v / norms
        return self._unit

    def similarity(self, a: str, b: str) -> float:
        u = self.unit_vectors()
        return float(u[self.vocab[a]] @ u[self.vocab[b]])


def build_vocab(sentences: Sequence[Sequence[str]], min_count: int,
                max_vocab: int) -> dict[str, int]:
    counts: dict[str, int] = {}
    for sent in sentences:
        for tok in sent:
            counts[tok] = counts.get(tok, 0) + 1
    kept = [(tok, c) for tok, c in counts.items() if c >= min_count]
    kept.sort(key=lambda tc: (-tc[1], tc[0]))
    kept = kept[:max_vocab]
    return {tok: i for i, (tok, c) in enumerate(kept)}


def _vocab_counts(sentences, vocab) -> np.ndarray:
    counts = np.zeros(len(vocab), dtype=np.float64)
    for sent in sentences:
        for tok in sent:
            i = vocab.get(tok)
            if i is not None:
                counts[i] += 1
    return counts


def _kernel():
    # compiled lazily so importing the package never pays the jit cost
    from ._sgns import train_sgns
    return train_sgns


def train_static_embeddings(sentences: Sequence[Sequence[str]], dim: int = 100,
                            window: int = 5, epochs: int = 10,
                            max_vocab: int = 500_000, min_count: int = 5,
                            rng_seed: int = 0, negatives: int = NEGATIVES,
                            workers: int = 1) -> EmbeddingModel:
    """Train skip-gram embeddings over pre-tokenized sentences.

    ``workers=1`` is the deterministic mode; ``workers>1`` shards the
    sentences across threads updating shared weights without ordering
    guarantees.
    """
    vocab = build_vocab(sentences, min_count, max_vocab)
    if not vocab:
        raise EarshotError("empty vocabulary after min_count filtering")
    counts = _vocab_counts(sentences, vocab)

    encoded: list[np.ndarray] = []
    for sent in sentences:
        ids = [vocab[t] for t in sent if t in vocab]
        if ids:
            encoded.append(np.asarray(ids, dtype=np.int32))
    if not encoded:
        raise EarshotError("no trainable sentences after vocabulary filtering")

    flat = np.concatenate(encoded)
    offsets = np.zeros(len(encoded) + 1, dtype=np.int64)
    np.cumsum([len(e) for e in encoded], out=offsets[1:])

    noise_cdf = np.cumsum(counts ** NOISE_POWER)
    noise_cdf /= noise_cdf[-1]

    rng = np.random.default_rng(rng_seed)
    w_in = ((rng.random((len(vocab), dim)) - 0.5) / dim).astype(np.float32)
    w_out = np.zeros((len(vocab), dim), dtype=np.float32)

    kernel = _kernel()
    if workers <= 1:
        kernel(flat, offsets, 0, len(encoded), w_in, w_out, noise_cdf,
               window, negatives, epochs, ALPHA0, MIN_ALPHA, rng_seed + 1)
    else:
        bounds = np.linspace(0, len(encoded), workers + 1, dtype=np.int64)
        threads = [
            threading.Thread(target=kernel, args=(
                flat, offsets, int(bounds[w]), int(bounds[w + 1]), w_in, w_out,
                noise_cdf, window, negatives, epochs, ALPHA0, MIN_ALPHA,
                rng_seed + 1 + w))
            for w in range(workers)
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()

    logger.info("trained %d-dim embeddings: vocab=%d epochs=%d seed=%d",
                dim, len(vocab), epochs, rng_seed)
    return EmbeddingModel(vocab=vocab, vectors=w_in, dim=dim,
                          trained_epochs=epochs, rng_seed=rng_seed)


def most_similar(model: EmbeddingModel, query: str,
                 k: int) -> list[tuple[str, float]]:
    """Exact top-k neighbors by cosine, query excluded, ties lexicographic.

    Out-of-vocabulary queries return an empty list (logged, not fatal).
    """
    if k < 1:
        raise EarshotError(f"most_similar needs k >= 1, got {k}")
    qi = model.vocab.get(query)
    if qi is None:
        logger.warning("most_similar: query %r not in vocabulary", query)
        return []
    unit = model.unit_vectors()
    sims = unit @ unit[qi]
    order = sorted(range(len(sims)),
                   key=lambda i: (-sims[i], model.tokens[i]))
    out: list[tuple[str, float]] = []
    for i in order:
        if i == qi:
            continue
        out.append((model.tokens[i], float(sims[i])))
        if len(out) == k:
            break
    return out


# --- model file format ---------------------------------------------------
# magic, one JSON header line, then per-token records:
#   u16 token byte length | token utf-8 | dim little-endian float32

_MAGIC = b"ESVEC1\n"


def save_embeddings(path: str | Path, model: EmbeddingModel,
                    config_hash: str | None = None) -> None:
    header = {
        "dim": model.dim,
        "vocab_size": len(model.vocab),
        "seed": model.rng_seed,
        "epochs": model.trained_epochs,
    }
    if config_hash is not None:
        header["config_hash"] = config_hash
    vecs = np.ascontiguousarray(model.vectors, dtype="<f4")
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
        for i, tok in enumerate(model.tokens):
            b = tok.encode("utf-8")
            fh.write(struct.pack("<H", len(b)))
            fh.write(b)
            fh.write(vecs[i].tobytes())


def load_embeddings(path: str | Path) -> EmbeddingModel:
    with open(path, "rb") as fh:
        magic = fh.read(len(_MAGIC))
        if magic != _MAGIC:
            raise EarshotError(f"{path}: not an embedding model file")
        header = json.loads(fh.readline())
        dim, size = header["dim"], header["vocab_size"]
        tokens: list[str] = []
        vecs = np.empty((size, dim), dtype=np.float32)
        for i in range(size):
            (tlen,) = struct.unpack("<H", fh.read(2))
            tokens.append(fh.read(tlen).decode("utf-8"))
            vecs[i] = np.frombuffer(fh.read(4 * dim), dtype="<f4")
    vocab = {tok: i for i, tok in enumerate(tokens)}
    return EmbeddingModel(vocab=vocab, vectors=vecs, dim=dim,
                          trained_epochs=header.get("epochs", 0),
                          rng_seed=header.get("seed", 0), tokens=tokens)
