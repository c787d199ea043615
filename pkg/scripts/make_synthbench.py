#!/usr/bin/env python3
"""Generate a planted-lexicon benchmark scenario plus a ready run config.

Usage: python3 scripts/make_synthbench.py out_dir [--n-posts N]
       [--plant-rate R] [--rng-seed S]
"""

import argparse
from pathlib import Path

from earshot.synthbench import PlantSpec, write_synthbench

CONFIG_TEMPLATE = """\
scenario: synthbench
corpus: corpus.jsonl
glossary: glossary.json
pipeline: earshot-predict
out_dir: runs/predict
split: {{ratio: 0.2, rng_seed: 0}}
embedding: {{dim: 64, window: 5, epochs: 5, min_count: 5, rng_seed: 3}}
provider: {{dim: 64, seed: 11}}
earshot: {{k: 50, keyword_method: tfidf, max_ngram: 1, filter_strategy: classifier}}
# generated with n_posts={n_posts} plant_rate={plant_rate} rng_seed={rng_seed}
"""


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out_dir")
    ap.add_argument("--n-posts", type=int, default=10_000)
    ap.add_argument("--plant-rate", type=float, default=1.0)
    ap.add_argument("--rng-seed", type=int, default=7)
    args = ap.parse_args()

    spec = PlantSpec(n_posts=args.n_posts, plant_rate=args.plant_rate,
                     rng_seed=args.rng_seed)
    result = write_synthbench(args.out_dir, spec)
    cfg = Path(args.out_dir) / "run.yaml"
    cfg.write_text(CONFIG_TEMPLATE.format(
        n_posts=args.n_posts, plant_rate=args.plant_rate,
        rng_seed=args.rng_seed), encoding="utf-8")
    print(f"{len(result.posts)} posts, {len(result.glossary)} glossary roots, "
          f"{len(result.answer_key)} planted twins -> {args.out_dir}")
    print(f"next: earshot run --config {cfg} --mock-endpoints")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
