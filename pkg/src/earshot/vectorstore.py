"""Post embeddings and exact nearest-neighbor lookup.

The index is a flat store of unit-normalized vectors; queries are exact
cosine scans (matrix product against the query block). Posts are embedded
as raw text, not preprocessed tokens. The mock provider hashes a
bag-of-words through a seeded random projection, so identical texts map
to identical vectors and planted-term tests stay meaningful without a
real sentence-embedding model.
"""

from __future__ import annotations

import json
import logging
import struct
import zlib
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import Post
from .endpoints import EmbedClient, EndpointConfig, resolve_url
from .errors import ConfigError, VectorStoreError

logger = logging.getLogger(__name__)

_HASH_BUCKETS = 4096


@dataclass(frozen=True)
class EmbeddingProviderConfig:
    kind: str = "deterministic-mock"  # or "http-endpoint"
    endpoint_url: str | None = None
    dim: int = 64
    batch_size: int = 256
    seed: int | None = 0
    timeout: float = 30.0
    max_retries: int = 3

    def __post_init__(self):
        if self.kind not in ("deterministic-mock", "http-endpoint"):
            raise ConfigError(f"unknown provider kind {self.kind!r}", "kind")
        if self.dim <= 0:
            raise ConfigError("embedding dim must be positive", "dim")
        if self.kind == "deterministic-mock" and self.seed is None:
            raise ConfigError("mock provider requires a seed", "seed")
        if self.kind == "http-endpoint" and not resolve_url("embed", self.endpoint_url):
            raise ConfigError("http-endpoint provider requires endpoint_url",
                              "endpoint_url")


@lru_cache(maxsize=8)
def _projection(seed: int, dim: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.standard_normal((_HASH_BUCKETS, dim)).astype(np.float32)


def _bag_rows(texts: Sequence[str]) -> np.ndarray:
    rows = np.zeros((len(texts), _HASH_BUCKETS), dtype=np.float32)
    for i, text in enumerate(texts):
        toks = text.casefold().split()
        if not toks:
            rows[i, 0] = 1.0  # empty text: fixed fallback bucket
            continue
        for tok in toks:
            rows[i, zlib.crc32(tok.encode("utf-8")) % _HASH_BUCKETS] += 1.0
    return rows


def _unit_rows(mat: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(mat, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return mat / norms


def embed_texts(provider: EmbeddingProviderConfig,
                texts: Sequence[str]) -> np.ndarray:
    """One unit-norm float32 vector per text, order preserved."""
    if not texts:
        raise VectorStoreError("embed_texts needs at least one text")
    if provider.kind == "deterministic-mock":
        proj = _projection(provider.seed, provider.dim)
        out = np.empty((len(texts), provider.dim), dtype=np.float32)
        bs = provider.batch_size
        for i in range(0, len(texts), bs):
            out[i:i + bs] = _bag_rows(texts[i:i + bs]) @ proj
        return _unit_rows(out)
    url = resolve_url("embed", provider.endpoint_url)
    client = EmbedClient(EndpointConfig(url=url, timeout=provider.timeout,
                                        max_retries=provider.max_retries,
                                        batch_size=provider.batch_size))
    vecs = client.embed(texts)
    mat = np.asarray(vecs, dtype=np.float32)
    if mat.ndim != 2 or mat.shape[1] != provider.dim:
        raise VectorStoreError(
            f"endpoint returned dim {mat.shape[-1] if mat.ndim == 2 else '?'}, "
            f"config says {provider.dim}")
    return _unit_rows(mat)


@dataclass
class VectorIndex:
    ids: list[str]
    vectors: np.ndarray  # (n, dim) float32, rows unit-normalized
    dim: int
    _row_of: dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._row_of:
            self._row_of = {pid: i for i, pid in enumerate(self.ids)}
        if len(self._row_of) != len(self.ids):
            raise VectorStoreError("duplicate post ids in index")
        self._query_mat: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.ids)

    def query_matrix(self) -> np.ndarray:
        # float64 copy so similarity math is dtype-stable against oracles
        if self._query_mat is None:
            self._query_mat = self.vectors.astype(np.float64)
        return self._query_mat


def build_index(posts: Iterable[Post],
                provider: EmbeddingProviderConfig) -> VectorIndex:
    posts = list(posts)
    if not posts:
        raise VectorStoreError("cannot build an index over zero posts")
    ids = [p.id for p in posts]
    vectors = embed_texts(provider, [p.text for p in posts])
    logger.info("built vector index: %d posts, dim=%d", len(ids), provider.dim)
    return VectorIndex(ids=ids, vectors=vectors, dim=provider.dim)


def nearest_posts(index: VectorIndex, seed_post_ids: set[str],
                  neighbors_per_seed: int = 1) -> set[str]:
    """Union of each seed's top neighbors by cosine, self excluded by id.

    Duplicate vectors under other ids are eligible. Seeds never appear in
    the result. Ties broken by index row order.
    """
    if len(index) < 2:
        raise VectorStoreError("index must hold at least 2 posts")
    seed_post_ids = set(seed_post_ids)
    missing = [s for s in seed_post_ids if s not in index._row_of]
    if missing:
        raise VectorStoreError(f"seed ids not in index: {sorted(missing)[:5]}")
    if neighbors_per_seed < 1:
        raise VectorStoreError("neighbors_per_seed must be >= 1")

    mat = index.query_matrix()
    out: set[str] = set()
    rows = np.array([index._row_of[s] for s in sorted(seed_post_ids)],
                    dtype=np.int64)
    k = min(neighbors_per_seed, len(index) - 1)
    chunk = 512
    for c in range(0, len(rows), chunk):
        block = rows[c:c + chunk]
        sims = mat @ mat[block].T  # (n, b)
        sims[block, np.arange(len(block))] = -np.inf  # not-self is by id
        if k == 1:
            # argmax keeps the lowest row on ties, same rule as the sort
            out.update(index.ids[i] for i in np.argmax(sims, axis=0))
        else:
            for j in range(sims.shape[1]):
                top = np.argsort(-sims[:, j], kind="stable")[:k]
                out.update(index.ids[i] for i in top)
    return out - seed_post_ids


# --- index file format ----------------------------------------------------
# magic, JSON header line (dim, count), records of
#   u16 id byte length | id utf-8 | dim little-endian float32

_MAGIC = b"ESIDX1\n"


def save_index(path: str | Path, index: VectorIndex,
               config_hash: str | None = None) -> None:
    header = {"dim": index.dim, "count": len(index)}
    if config_hash is not None:
        header["config_hash"] = config_hash
    vecs = np.ascontiguousarray(index.vectors, dtype="<f4")
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
        for i, pid in enumerate(index.ids):
            b = pid.encode("utf-8")
            fh.write(struct.pack("<H", len(b)))
            fh.write(b)
            fh.write(vecs[i].tobytes())


def load_index(path: str | Path) -> VectorIndex:
    with open(path, "rb") as fh:
        if fh.read(len(_MAGIC)) != _MAGIC:
            raise VectorStoreError(f"{path}: not a vector index file")
        header = json.loads(fh.readline())
        dim, count = header["dim"], header["count"]
        ids: list[str] = []
        vecs = np.empty((count, dim), dtype=np.float32)
        for i in range(count):
            (idlen,) = struct.unpack("<H", fh.read(2))
            ids.append(fh.read(idlen).decode("utf-8"))
            vecs[i] = np.frombuffer(fh.read(4 * dim), dtype="<f4")
    return VectorIndex(ids=ids, vectors=vecs, dim=dim)
