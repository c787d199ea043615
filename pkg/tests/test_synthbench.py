import json
from itertools import combinations

import pytest

from earshot.corpus import ingest_corpus
from earshot.errors import EarshotError
from earshot.lexicon import load_glossary
from earshot.stopwords import ENGLISH_STOPWORDS
from earshot.synthbench import (DEFAULT_PLANTED, DEFAULT_SEEDS, FILLER_VOCAB,
                                PlantSpec, generate, write_synthbench)


def test_filler_vocab_shape():
    assert len(FILLER_VOCAB) == 36
    assert len(set(FILLER_VOCAB)) == 36
    assert all(w in ENGLISH_STOPWORDS and len(w) >= 3 for w in FILLER_VOCAB)
    assert len(list(combinations(FILLER_VOCAB, 3))) == 7140


def test_generate_deterministic(small_spec, small_synth):
    again = generate(small_spec)
    assert [(p.id, p.text) for p in again.posts] == \
        [(p.id, p.text) for p in small_synth.posts]
    assert again.answer_key == small_synth.answer_key


def test_spec_validation():
    with pytest.raises(EarshotError, match="disjoint"):
        PlantSpec(seeds=("zorvane",), planted=("zorvane", "snarfel"))
    with pytest.raises(EarshotError, match="plant_rate"):
        PlantSpec(plant_rate=0.0)
    with pytest.raises(EarshotError, match="plant_rate"):
        PlantSpec(plant_rate=1.5)
    with pytest.raises(EarshotError, match="SLOT"):
        PlantSpec(context_templates=("no slot here FILL",))


def test_generate_rejects_too_many_fills():
    spec = PlantSpec(context_templates=("a FILL b FILL c FILL d FILL SLOT",),
                     n_posts=10)
    with pytest.raises(EarshotError, match="FILL"):
        generate(spec)


def test_generate_rejects_exhausted_triples():
    # 7141 pairs need more distinct triples than C(36,3) provides
    spec = PlantSpec(n_posts=14_282, plant_rate=1.0)
    with pytest.raises(EarshotError, match="7140"):
        generate(spec)


def test_plant_rate_density():
    spec = PlantSpec(n_posts=2000, plant_rate=0.5, rng_seed=1)
    result = generate(spec)
    assert len(result.posts) == 2000
    n_pairs = round(2000 * 0.5 / 2)
    assert len(result.planted_post_ids()) == n_pairs
    planted_posts = 2 * n_pairs  # each pair holds one seed and one twin post
    assert abs(planted_posts / 2000 - 0.5) <= 0.01


def test_twins_share_template_and_fillers(small_synth):
    by_id = {p.id: p for p in small_synth.posts}
    for row in small_synth.answer_key:
        twin = by_id[row["post_id"]]
        seed_post = by_id["s" + row["post_id"][1:]]
        twin_toks = twin.text.split()
        seed_toks = seed_post.text.split()
        assert len(twin_toks) == len(seed_toks)
        diff = [(a, b) for a, b in zip(seed_toks, twin_toks) if a != b]
        assert len(diff) == 1  # only the slot differs
        assert diff[0][1] == row["term"]
        assert diff[0][0] in DEFAULT_SEEDS


def test_pair_filler_triples_unique(small_synth):
    by_id = {p.id: p for p in small_synth.posts}
    triples = set()
    for row in small_synth.answer_key:
        toks = by_id[row["post_id"]].text.split()
        triple = tuple(sorted({t for t in toks if t in FILLER_VOCAB}))
        assert len(triple) == 3
        # each filler is written twice per slot
        assert all(toks.count(f) == 2 for f in triple)
        triples.add(triple)
    assert len(triples) == len(small_synth.answer_key)


def test_planted_seed_assignment(small_synth):
    by_id = {p.id: p for p in small_synth.posts}
    for row in small_synth.answer_key:
        planted_ix = DEFAULT_PLANTED.index(row["term"])
        expected_seed = DEFAULT_SEEDS[planted_ix % len(DEFAULT_SEEDS)]
        seed_post = by_id["s" + row["post_id"][1:]]
        assert expected_seed in seed_post.text.split()


def test_glossary_covers_seeds_and_planted(small_synth):
    roots = {e.root for e in small_synth.glossary}
    assert roots == set(DEFAULT_SEEDS) | set(DEFAULT_PLANTED)


def test_negative_posts_use_filler_vocab_slots(small_spec, small_synth):
    negatives = [p for p in small_synth.posts if p.id.startswith("n")]
    expected = small_spec.n_posts - 2 * round(
        small_spec.n_posts * small_spec.plant_rate / 2)
    assert len(negatives) == expected
    planted_or_seed = set(DEFAULT_SEEDS) | set(DEFAULT_PLANTED)
    for p in negatives[:50]:
        assert not (set(p.text.split()) & planted_or_seed)


def test_write_synthbench_round_trip(tmp_path, small_spec):
    result = write_synthbench(tmp_path / "bench", small_spec)
    posts = list(ingest_corpus(tmp_path / "bench" / "corpus.jsonl"))
    assert [(p.id, p.text) for p in posts] == \
        [(p.id, p.text) for p in result.posts]
    glossary = load_glossary(tmp_path / "bench" / "glossary.json")
    assert {e.root for e in glossary} == {e.root for e in result.glossary}
    answers = json.loads((tmp_path / "bench" / "answers.json").read_text())
    assert answers == result.answer_key
