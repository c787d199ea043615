"""Planted-lexicon corpus generator for end-to-end tests.

Positive posts come in pairs: both members share a template and filler
words, one carries a seed term in the slot, the other a planted term.
Three properties are engineered in:

  * Twin linkage. Each pair gets a unique filler triple, written twice
    per slot, so in bag-of-words cosine the twin (shared template words
    plus 12 matched filler counts) strictly beats any same-seed impostor
    (at most 8 matched filler counts plus the slot match). Nearest-
    neighbor lookup on raw text therefore recovers planted twins.
  * Keyword separation. Fillers are stop words, so keyword extractors
    never see them; template words appear in every post of a seed group
    while each planted term appears in a quarter of the group, keeping
    planted idf strictly above template idf.
  * Embedding linkage. Preprocessing drops the stop-word fillers,
    leaving each seed group an exclusive template vocabulary shared by
    its seed and its planted terms (template index = seed index).

No real slurs: all seed/planted defaults are invented words, stable
under the rule lemmatizer.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from .corpus import Post, write_posts
from .errors import EarshotError
from .lexicon import GlossaryEntry, make_entry, save_glossary
from .stopwords import ENGLISH_STOPWORDS

SLOT = "SLOT"
FILL = "FILL"

DEFAULT_SEEDS = ("zorvane", "mextrel", "quubast", "velgorn", "diphrax")

DEFAULT_PLANTED = (
    "snarfel", "gribbon", "clyvern", "dromast", "fennick",
    "glimmot", "harvost", "jorbal", "krendol", "lurvane",
    "morfex", "narvik", "plonter", "quimbal", "rastorn",
    "skelvin", "tarnok", "ulvert", "vombret", "wrenfal",
)

DEFAULT_TEMPLATES = (
    "murmur FILL corner SLOT speak FILL FILL",
    "signal FILL market SLOT drift FILL FILL",
    "tunnel FILL vapor SLOT glow FILL FILL",
    "ripple FILL harbor SLOT shade FILL FILL",
    "meadow FILL copper SLOT hum FILL FILL",
)

# 36 stop words -> C(36,3) = 7140 distinct filler triples
FILLER_VOCAB = tuple(sorted(w for w in ENGLISH_STOPWORDS if len(w) >= 3)[:36])


@dataclass(frozen=True)
class PlantSpec:
    seeds: tuple[str, ...] = DEFAULT_SEEDS
    planted: tuple[str, ...] = DEFAULT_PLANTED
    n_posts: int = 10_000
    plant_rate: float = 1.0
    context_templates: tuple[str, ...] = DEFAULT_TEMPLATES
    rng_seed: int = 0

    def __post_init__(self):
        if set(self.seeds) & set(self.planted):
            raise EarshotError("seeds and planted terms must be disjoint")
        if not 0 < self.plant_rate <= 1:
            raise EarshotError("plant_rate must be in (0, 1]")
        for t in self.context_templates:
            if SLOT not in t.split():
                raise EarshotError(f"template missing the {SLOT} token: {t!r}")


@dataclass
class SynthResult:
    posts: list[Post]
    glossary: list[GlossaryEntry]
    answer_key: list[dict] = field(default_factory=list)

    def planted_post_ids(self) -> set[str]:
        return {row["post_id"] for row in self.answer_key}


def _fill_template(template: str, slot_term: str, fillers: list[str]) -> str:
    out: list[str] = []
    fi = 0
    for tok in template.split():
        if tok == SLOT:
            out.append(slot_term)
        elif tok == FILL:
            out.extend([fillers[fi], fillers[fi]])  # doubled: twin margin
            fi += 1
        else:
            out.append(tok)
    return " ".join(out)


def _filler_triples(rng: random.Random) -> tuple[list[tuple[str, ...]], int, int]:
    triples = list(combinations(FILLER_VOCAB, 3))
    total = len(triples)
    step = 2399  # coprime stride spreads word usage evenly
    while math.gcd(step, total) != 1:
        step += 2
    return triples, step, rng.randrange(total)


def generate(spec: PlantSpec) -> SynthResult:
    """Deterministic corpus + glossary + answer key for one spec.

    A planted term's seed is planted_index mod n_seeds and the pair's
    template is the seed's index. Pair p takes filler triple
    (offset + p*step) mod C(36,3); triples repeat only past 7140 pairs.
    """
    rng = random.Random(spec.rng_seed)
    triples, step, offset = _filler_triples(rng)
    n_fill = max(t.split().count(FILL) for t in spec.context_templates)
    if n_fill > 3:
        raise EarshotError("templates support at most 3 FILL slots")
    n_pairs = round(spec.n_posts * spec.plant_rate / 2)
    n_pairs = min(n_pairs, spec.n_posts // 2)
    if n_pairs > len(triples):
        raise EarshotError(
            f"{n_pairs} pairs exceed the {len(triples)} distinct filler "
            "triples; twin recovery would no longer be guaranteed")

    posts: list[Post] = []
    answer_key: list[dict] = []
    for p in range(n_pairs):
        planted_ix = p % len(spec.planted)
        seed_ix = planted_ix % len(spec.seeds)
        template = spec.context_templates[seed_ix % len(spec.context_templates)]
        fillers = list(triples[(offset + p * step) % len(triples)])
        seed_id, twin_id = f"s{p:06d}", f"t{p:06d}"
        posts.append(Post(seed_id, _fill_template(template,
                                                  spec.seeds[seed_ix], fillers)))
        planted_term = spec.planted[planted_ix]
        posts.append(Post(twin_id, _fill_template(template, planted_term,
                                                  fillers)))
        answer_key.append({"post_id": twin_id, "term": planted_term})

    for n in range(spec.n_posts - 2 * n_pairs):
        template = spec.context_templates[rng.randrange(len(spec.context_templates))]
        draw = rng.sample(FILLER_VOCAB, n_fill + 1)
        posts.append(Post(f"n{n:06d}", _fill_template(template, draw[-1],
                                                      draw[:-1])))

    glossary = [make_entry(s) for s in spec.seeds] + \
               [make_entry(t) for t in spec.planted]
    return SynthResult(posts=posts, glossary=glossary, answer_key=answer_key)


def write_synthbench(out_dir: str | Path, spec: PlantSpec) -> SynthResult:
    """Emit corpus.jsonl, glossary.json and answers.json under out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = generate(spec)
    write_posts(out / "corpus.jsonl", result.posts,
                header_extra={"generator": "synthbench",
                              "rng_seed": spec.rng_seed,
                              "plant_rate": spec.plant_rate})
    save_glossary(out / "glossary.json", result.glossary)
    (out / "answers.json").write_text(
        json.dumps(result.answer_key, indent=2) + "\n", encoding="utf-8")
    return result
