import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import earshot.endpoints as endpoints
from earshot.corpus import Post
from earshot.errors import ConfigError, VectorStoreError
from earshot.vectorstore import (EmbeddingProviderConfig, VectorIndex,
                                 build_index, embed_texts, load_index,
                                 nearest_posts, save_index)

MOCK = EmbeddingProviderConfig(kind="deterministic-mock", dim=32, seed=0)


# --- provider config ---------------------------------------------------------

def test_provider_validation():
    with pytest.raises(ConfigError):
        EmbeddingProviderConfig(kind="gpu-farm")
    with pytest.raises(ConfigError):
        EmbeddingProviderConfig(dim=0)
    with pytest.raises(ConfigError):
        EmbeddingProviderConfig(kind="http-endpoint", endpoint_url=None)
    with pytest.raises(ConfigError):
        EmbeddingProviderConfig(seed=None)


# --- mock embedding -----------------------------------------------------------

def test_mock_embeddings_deterministic_unit_norm():
    texts = ["white noise machine", "white noise machine", "different words"]
    a = embed_texts(MOCK, texts)
    b = embed_texts(MOCK, texts)
    assert np.array_equal(a, b)
    assert np.array_equal(a[0], a[1])
    assert not np.array_equal(a[0], a[2])
    assert np.allclose(np.linalg.norm(a, axis=1), 1.0, atol=1e-5)
    assert a.dtype == np.float32


def test_mock_embeddings_casefold_and_empty():
    a = embed_texts(MOCK, ["Hello World", "hello world", "", "   "])
    assert np.array_equal(a[0], a[1])
    assert np.array_equal(a[2], a[3])  # both hit the empty-text bucket
    assert np.linalg.norm(a[2]) > 0


def test_embed_texts_rejects_empty_batch():
    with pytest.raises(VectorStoreError):
        embed_texts(MOCK, [])


def test_http_provider_paths(monkeypatch):
    cfg = EmbeddingProviderConfig(kind="http-endpoint",
                                  endpoint_url="http://shim/v1/embeddings",
                                  dim=3, seed=None)
    calls = []

    def fake_post(ecfg, payload):
        calls.append(payload)
        return {"vectors": [[3.0, 0.0, 4.0]] * len(payload["texts"]), "dim": 3}

    monkeypatch.setattr(endpoints, "post_json", fake_post)
    out = embed_texts(cfg, ["a", "b"])
    assert out.shape == (2, 3)
    assert np.allclose(out[0], [0.6, 0.0, 0.8])  # normalized defensively
    assert calls and calls[0]["texts"] == ["a"] or calls[0]["texts"] == ["a", "b"]

    def wrong_dim(ecfg, payload):
        return {"vectors": [[1.0, 2.0]] * len(payload["texts"]), "dim": 2}

    monkeypatch.setattr(endpoints, "post_json", wrong_dim)
    with pytest.raises(VectorStoreError):
        embed_texts(cfg, ["a"])


# --- index ---------------------------------------------------------------------

def test_build_index_and_duplicate_ids():
    posts = [Post("a", "x y z"), Post("b", "x y w")]
    idx = build_index(posts, MOCK)
    assert len(idx) == 2 and idx.dim == 32
    with pytest.raises(VectorStoreError):
        VectorIndex(ids=["a", "a"], vectors=idx.vectors, dim=32)
    with pytest.raises(VectorStoreError):
        build_index([], MOCK)


def test_nearest_posts_spec_example():
    # index {A, A', C}; seeds {A} -> {A'}
    posts = [Post("A", "the great replacement is coming they say"),
             Post("Aprime", "the great replacement is coming he says"),
             Post("C", "completely unrelated gardening talk tulips")]
    idx = build_index(posts, MOCK)
    assert nearest_posts(idx, {"A"}) == {"Aprime"}


def test_nearest_posts_excludes_seeds_from_result():
    posts = [Post("A", "alpha beta gamma"),
             Post("B", "alpha beta gamma"),
             Post("C", "omega psi chi")]
    idx = build_index(posts, MOCK)
    # B's best neighbor is A (identical), but A is a seed -> excluded
    assert nearest_posts(idx, {"A", "B"}) == set()


def test_nearest_posts_validation():
    posts = [Post("A", "a b"), Post("B", "c d")]
    idx = build_index(posts, MOCK)
    with pytest.raises(VectorStoreError):
        nearest_posts(idx, {"missing"})
    with pytest.raises(VectorStoreError):
        nearest_posts(idx, {"A"}, neighbors_per_seed=0)
    tiny = VectorIndex(ids=["A"], vectors=idx.vectors[:1], dim=32)
    with pytest.raises(VectorStoreError):
        nearest_posts(tiny, {"A"})


def _brute_force(ids, vectors, seeds, k):
    mat = vectors.astype(np.float64)
    out = set()
    row_of = {pid: i for i, pid in enumerate(ids)}
    for pid in sorted(seeds):
        sims = mat @ mat[row_of[pid]]
        sims[row_of[pid]] = -np.inf
        order = np.argsort(-sims, kind="stable")
        out |= {ids[j] for j in order[:k]}
    return out - set(seeds)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(5, 40), st.integers(1, 3))
def test_nearest_posts_matches_brute_force(seed, n, k):
    rng = np.random.default_rng(seed)
    vecs = rng.standard_normal((n, 8)).astype(np.float32)
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    ids = [f"p{i}" for i in range(n)]
    idx = VectorIndex(ids=ids, vectors=vecs, dim=8)
    seeds = set(ids[: max(1, n // 4)])
    got = nearest_posts(idx, seeds, neighbors_per_seed=k)
    assert got == _brute_force(ids, vecs, seeds, k)


def test_nearest_posts_tie_prefers_first_row():
    v = np.asarray([[1, 0], [0, 1], [0, 1]], dtype=np.float32)
    idx = VectorIndex(ids=["s", "t1", "t2"], vectors=v, dim=2)
    assert nearest_posts(idx, {"s"}) == {"t1"}


# --- persistence ------------------------------------------------------------

def test_index_save_load_round_trip(tmp_path):
    posts = [Post("a", "x y z"), Post("b", "w v u"), Post("c", "x w")]
    idx = build_index(posts, MOCK)
    save_index(tmp_path / "i.esidx", idx, config_hash="55aa")
    back = load_index(tmp_path / "i.esidx")
    assert back.ids == idx.ids and back.dim == idx.dim
    assert np.array_equal(back.vectors, idx.vectors)


def test_load_index_rejects_garbage(tmp_path):
    p = tmp_path / "bad.esidx"
    p.write_bytes(b"\x00\x01junk")
    with pytest.raises(VectorStoreError):
        load_index(p)
