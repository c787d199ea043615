import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from earshot.corpus import preprocess
from earshot.errors import EarshotError
from earshot.staticvec import (EmbeddingModel, build_vocab, fit_phraser,
                               load_embeddings, merge_phrases, most_similar,
                               save_embeddings, train_static_embeddings)


# --- phraser ---------------------------------------------------------------
# Corpus realizing the hand-computed score: total=100 tokens, count(new)=5,
# count(york)=4, count(new york)=4 -> (4-1)*100/(5*4) = 15.

def _score15_corpus():
    sents = [["new", "york"]] * 4 + [["new"]]
    sents += [[f"pad{i}"] for i in range(91)]
    return sents


def test_phraser_score_fixture():
    model = fit_phraser(_score15_corpus(), min_count=1, threshold=10.0)
    assert model.total_tokens == 100
    assert model.unigram_counts["new"] == 5
    assert model.bigram_counts[("new", "york")] == 4
    assert model.score("new", "york") == pytest.approx(15.0)


def test_phraser_merges_above_threshold():
    model = fit_phraser(_score15_corpus(), min_count=1, threshold=10.0)
    assert model.merge_sentence(["i", "love", "new", "york"]) == \
        ["i", "love", "new_york"]


def test_phraser_keeps_below_threshold():
    model = fit_phraser(_score15_corpus(), min_count=1, threshold=20.0)
    assert model.merge_sentence(["i", "love", "new", "york"]) == \
        ["i", "love", "new", "york"]


def test_phraser_greedy_left_to_right():
    # both (a,b) and (b,c) score high; greedy takes (a,b) and leaves c
    sents = [["a", "b", "c"]] * 30 + [[f"pad{i}"] for i in range(10)]
    model = fit_phraser(sents, min_count=1, threshold=1.5)
    assert model.score("a", "b") > 1.5 and model.score("b", "c") > 1.5
    assert model.merge_sentence(["a", "b", "c"]) == ["a_b", "c"]


def test_phraser_two_passes_builds_trigram():
    sents = [["a", "b", "c"]] * 30
    model = fit_phraser(sents, min_count=1, threshold=1.5, passes=2)
    assert model.merge_sentence(["a", "b", "c"]) == ["a_b_c"]
    one_pass = fit_phraser(sents, min_count=1, threshold=1.5, passes=1)
    assert one_pass.merge_sentence(["a", "b", "c"]) == ["a_b", "c"]


def test_merge_phrases_stream():
    model = fit_phraser(_score15_corpus(), min_count=1, threshold=10.0)
    out = list(merge_phrases([["new", "york"], ["pad0"]], model))
    assert out == [["new_york"], ["pad0"]]


@settings(max_examples=80)
@given(st.lists(st.lists(st.sampled_from("abcd"), min_size=2, max_size=6),
                min_size=1, max_size=12),
       st.floats(0.1, 5.0))
def test_phraser_merge_matches_greedy_scan(sents, threshold):
    """merge_sentence is a left-to-right greedy scan over score > threshold."""
    model = fit_phraser(sents, min_count=1, threshold=threshold)
    for s in sents:
        out: list[str] = []
        i = 0
        while i < len(s):
            if i + 1 < len(s) and model.score(s[i], s[i + 1], 0) > threshold:
                out.append(s[i] + "_" + s[i + 1])
                i += 2
            else:
                out.append(s[i])
                i += 1
        assert model.merge_sentence(s) == out


def test_phraser_overlap_resolves_left_to_right():
    # When 'a c' and 'c b' both clear the threshold the left pair wins
    # and consumes 'c'; raising the threshold past the left pair's score
    # can therefore surface the right pair. Merge sets are not monotone
    # in the threshold, by design of the greedy scan.
    sents = [["a", "c", "b"], ["a", "a", "c", "b"]]
    lo = fit_phraser(sents, min_count=1, threshold=1.0)   # both pairs clear
    hi = fit_phraser(sents, min_count=1, threshold=1.5)   # only 'c b' clears
    assert lo.merge_sentence(["a", "c", "b"]) == ["a_c", "b"]
    assert hi.merge_sentence(["a", "c", "b"]) == ["a", "c_b"]


def test_phraser_validates_passes():
    with pytest.raises(EarshotError):
        fit_phraser([["a"]], passes=3)


# --- vocab -------------------------------------------------------------------

def test_build_vocab_order_and_cap():
    sents = [["b"] * 5, ["a"] * 5, ["c"] * 3, ["d"]]
    vocab = build_vocab(sents, min_count=2, max_vocab=3)
    assert list(vocab) == ["a", "b", "c"]  # count desc, then lexicographic


# --- training ------------------------------------------------------------------

def _toy_sentences():
    # two disjoint co-occurrence clusters
    a = [["apple", "banana", "cherry"], ["banana", "cherry", "apple"]] * 40
    b = [["metal", "rust", "iron"], ["iron", "metal", "rust"]] * 40
    return a + b


def test_train_deterministic_single_worker():
    m1 = train_static_embeddings(_toy_sentences(), dim=16, epochs=3,
                                 min_count=5, rng_seed=4)
    m2 = train_static_embeddings(_toy_sentences(), dim=16, epochs=3,
                                 min_count=5, rng_seed=4)
    assert np.array_equal(m1.vectors, m2.vectors)
    assert m1.vocab == m2.vocab
    m3 = train_static_embeddings(_toy_sentences(), dim=16, epochs=3,
                                 min_count=5, rng_seed=5)
    assert not np.array_equal(m1.vectors, m3.vectors)


def test_train_clusters_separate():
    m = train_static_embeddings(_toy_sentences(), dim=16, epochs=8,
                                min_count=5, rng_seed=0)
    top = [t for t, _ in most_similar(m, "apple", k=2)]
    assert set(top) <= {"banana", "cherry"}


def test_most_similar_matches_brute_force():
    m = train_static_embeddings(_toy_sentences(), dim=16, epochs=2,
                                min_count=5, rng_seed=1)
    got = most_similar(m, "metal", k=3)
    U = m.unit_vectors()
    sims = U @ U[m.vocab["metal"]]
    order = sorted(((-sims[i], t) for t, i in m.vocab.items()
                    if t != "metal"))
    want = [(t, -negsim) for negsim, t in order[:3]]
    assert [t for t, _ in got] == [t for t, _ in want]
    assert np.allclose([s for _, s in got], [s for _, s in want])


def test_most_similar_oov_and_validation(caplog):
    m = train_static_embeddings(_toy_sentences(), dim=8, epochs=1,
                                min_count=5, rng_seed=0)
    with caplog.at_level(logging.WARNING):
        assert most_similar(m, "zebra", k=5) == []
    assert any("zebra" in r.message for r in caplog.records)
    with pytest.raises(EarshotError):
        most_similar(m, "metal", k=0)


def test_save_load_round_trip(tmp_path):
    m = train_static_embeddings(_toy_sentences(), dim=12, epochs=2,
                                min_count=5, rng_seed=2)
    save_embeddings(tmp_path / "m.esvec", m, config_hash="deadbeef")
    back = load_embeddings(tmp_path / "m.esvec")
    assert back.vocab == m.vocab
    assert np.array_equal(back.vectors, m.vectors)
    assert back.dim == m.dim and back.rng_seed == m.rng_seed


def test_load_rejects_garbage(tmp_path):
    p = tmp_path / "bad.esvec"
    p.write_bytes(b"not a model")
    with pytest.raises(EarshotError):
        load_embeddings(p)


def test_unit_vectors_are_float64_normalized():
    m = train_static_embeddings(_toy_sentences(), dim=8, epochs=1,
                                min_count=5, rng_seed=0)
    U = m.unit_vectors()
    assert U.dtype == np.float64
    assert np.allclose(np.linalg.norm(U, axis=1), 1.0)


def test_synthbench_group_linkage(small_synth):
    sents = [preprocess(p).tokens for p in small_synth.posts]
    m = train_static_embeddings(sents, dim=32, epochs=5, min_count=5,
                                rng_seed=3)
    # group 0: zorvane with planted indices {0,5,10,15}
    group = {"snarfel", "glimmot", "morfex", "skelvin"}
    top = {t for t, _ in most_similar(m, "zorvane", k=10)}
    assert len(top & group) >= 2
