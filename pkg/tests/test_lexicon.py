import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from earshot.corpus import Post
from earshot.errors import GlossaryError
from earshot.lexicon import (GlossaryEntry, find_present_roots, load_glossary,
                             load_split, make_entry, posts_with_surfaces,
                             save_glossary, save_split, split_seeds,
                             surface_pattern)

FIXTURES = Path(__file__).parent / "fixtures"


# --- entries ---------------------------------------------------------------

def test_make_entry_normalizes_and_includes_root():
    e = make_entry("  Great   Replacement ", surfaces=["GreatReplacement", ""])
    assert e.root == "Great Replacement"
    assert "great replacement" in e.surfaces
    assert "greatreplacement" in e.surfaces
    assert e.ngram_len == 2


def test_make_entry_rejects_empty():
    with pytest.raises(GlossaryError):
        make_entry("   ")


# --- surface matching --------------------------------------------------------

@pytest.mark.parametrize("surface,text,hit", [
    ("jogger", "the jogger ran", True),
    ("jogger", "joggers ran", False),           # token boundary
    ("jogger", "JOGGER ran", True),             # case-insensitive
    ("#milk", "drink #milk now", True),
    ("#milk", "drink milk now", False),
    ("(((", "those ((( people", True),
    ("new york", "in new  york today", True),   # flexible whitespace
    ("13/50", "the 13/50 thing", True),
])
def test_surface_pattern(surface, text, hit):
    assert bool(surface_pattern(surface).search(text)) == hit


def test_find_present_roots(tiny_posts):
    glossary = [make_entry("globalist", ["globalists"]),
                make_entry("cosmopolitan elites"),
                make_entry("jogger")]
    present = find_present_roots(glossary, tiny_posts)
    assert present == {"globalist", "cosmopolitan elites"}


def test_posts_with_surfaces_order(tiny_posts):
    entries = [make_entry("globalist", ["globalists"]), make_entry("dog")]
    assert posts_with_surfaces(entries, tiny_posts) == ["p1", "p4"]


# --- split -------------------------------------------------------------------

def _entries(n_by_len: dict[int, int]) -> list[GlossaryEntry]:
    out = []
    for length, n in n_by_len.items():
        for i in range(n):
            out.append(make_entry(" ".join(f"w{length}x{i}t{j}"
                                           for j in range(length))))
    return out


def test_split_stratified_counts():
    entries = _entries({1: 10, 2: 5, 3: 2})
    split = split_seeds(entries, ratio=0.2, rng_seed=0)
    by_len = lambda es, n: [e for e in es if e.ngram_len == n]
    assert len(by_len(split.train_roots, 1)) == 2
    assert len(by_len(split.train_roots, 2)) == 1
    assert len(by_len(split.train_roots, 3)) == 0  # round-half-up(0.4)=0
    assert len(split.train_roots) + len(split.test_roots) == 17


def test_split_disjoint_exhaustive_deterministic():
    entries = _entries({1: 30, 2: 20})
    a = split_seeds(entries, ratio=0.2, rng_seed=5)
    b = split_seeds(entries, ratio=0.2, rng_seed=5)
    assert a == b
    roots = lambda es: {e.root for e in es}
    assert roots(a.train_roots) & roots(a.test_roots) == set()
    assert roots(a.train_roots) | roots(a.test_roots) == roots(entries)
    c = split_seeds(entries, ratio=0.2, rng_seed=6)
    assert c != a  # different shuffles almost surely differ


def test_split_promotes_one_when_train_empty():
    entries = _entries({1: 2})  # round-half-up(0.4) = 0 everywhere
    split = split_seeds(entries, ratio=0.2, rng_seed=1)
    assert len(split.train_roots) == 1
    assert len(split.test_roots) == 1


def test_split_validates():
    with pytest.raises(GlossaryError):
        split_seeds([], 0.2, 0)
    with pytest.raises(GlossaryError):
        split_seeds(_entries({1: 4}), 1.0, 0)


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1))
def test_split_balanced_fixture_property(seed):
    roots = json.loads((FIXTURES / "glossary_roots.json").read_text())
    entries = [make_entry(r) for r in roots]
    split = split_seeds(entries, ratio=0.2, rng_seed=seed)
    strata: dict[int, list[GlossaryEntry]] = {}
    for e in entries:
        strata.setdefault(e.ngram_len, []).append(e)
    for length, group in strata.items():
        n_train = sum(1 for e in split.train_roots if e.ngram_len == length)
        assert abs(n_train - 0.2 * len(group)) <= 1


def test_split_save_load_round_trip(tmp_path):
    entries = [make_entry("alpha", ["alphas"]), make_entry("beta"),
               make_entry("gamma ray")]
    split = split_seeds(entries, ratio=0.3, rng_seed=9)
    save_split(tmp_path / "s.json", split, config_hash="c0ffee")
    back = load_split(tmp_path / "s.json")
    assert back == split
    assert "alphas" in back.train_surfaces() | \
        {s for e in back.test_roots for s in e.surfaces}


# --- glossary io -------------------------------------------------------------

def test_glossary_save_load_round_trip(tmp_path):
    entries = [make_entry("inner city", ["inner-city"]), make_entry("197")]
    save_glossary(tmp_path / "g.json", entries)
    back = load_glossary(tmp_path / "g.json")
    assert back == entries


def test_glossary_rejects_duplicates(tmp_path):
    (tmp_path / "g.json").write_text(json.dumps(
        [{"root": "dup", "surfaces": []}, {"root": "DUP", "surfaces": []}]))
    with pytest.raises(GlossaryError):
        load_glossary(tmp_path / "g.json")
