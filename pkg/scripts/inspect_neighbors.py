#!/usr/bin/env python3
"""Show the nearest-post retrieval step: which posts the engine would
hand to the chat model for a given seed term.

Usage: python3 scripts/inspect_neighbors.py corpus.jsonl "seed term"
       [--dim 64] [--seed 0] [--top 5]
"""

import argparse

import numpy as np

from earshot.corpus import ingest_corpus
from earshot.lexicon import make_entry, posts_with_surfaces
from earshot.vectorstore import EmbeddingProviderConfig, build_index

def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("corpus")
    ap.add_argument("seed")
    ap.add_argument("--dim", type=int, default=64)
    ap.add_argument("--seed-val", type=int, default=0)
    ap.add_argument("--top", type=int, default=5)
    args = ap.parse_args()

    posts = list(ingest_corpus(args.corpus))
    by_id = {p.id: p for p in posts}
    seed_ids = posts_with_surfaces([make_entry(args.seed)], posts)
    if not seed_ids:
        print(f"no post contains {args.seed!r}")
        return 1
    print(f"{len(seed_ids)} posts contain the seed; showing {args.top}")

    provider = EmbeddingProviderConfig(dim=args.dim, seed=args.seed_val)
    index = build_index(posts, provider)
    mat = index.query_matrix()
    row_of = {pid: i for i, pid in enumerate(index.ids)}
    for pid in seed_ids[:args.top]:
        row = mat[row_of[pid]]
        sims = mat @ row
        sims[row_of[pid]] = -np.inf
        nn = int(np.argmax(sims))
        print(f"  {pid}: {by_id[pid].text[:60]!r}")
        print(f"    -> {index.ids[nn]} (cos={sims[nn]:.3f}): "
              f"{by_id[index.ids[nn]].text[:60]!r}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
