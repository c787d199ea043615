"""Comparison systems: embedding expansion, MLM fill-mask, and the
euphemistic-phrase detector.

All three emit ranked CandidateLists consumable by the threshold sweep.
Train-seed surfaces are filtered before returning (leakage guard lives
at the source, not just in eval).
"""

from __future__ import annotations

import logging
import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .corpus import Post, tweet_tokenize
from .endpoints import MASK
from .errors import EarshotError, EndpointError
from .keywords import CandidateList, ranked_candidates
from .lexicon import surface_pattern
from .staticvec import PHRASE_JOIN, EmbeddingModel, most_similar
from .stopwords import ENGLISH_STOPWORDS
from .evaluation import normalize_term

logger = logging.getLogger(__name__)

FILLS_PER_POST = 100  # per-post fill-mask request depth
MAX_FAILURE_FRACTION = 0.5


# --- word2vec / phrase2vec expansion ---------------------------------------


@dataclass
class ExpansionTrace:
    """Level-by-level neighbor expansion. Each level maps vocabulary
    token -> best cosine seen, insertion-ordered by (score desc, token);
    levels are pairwise disjoint and exclude the seeds."""
    levels: list[dict[str, float]] = field(default_factory=list)
    k_per_query: int = 10
    n_levels: int = 10
    skipped_seeds: list[str] = field(default_factory=list)

    def terms(self) -> list[str]:
        seen: set[str] = set()
        out: list[str] = []
        for level in self.levels:
            for tok in level:
                term = tok.replace(PHRASE_JOIN, " ")
                if term not in seen:
                    seen.add(term)
                    out.append(term)
        return out

    def to_candidates(self) -> CandidateList:
        seen: set[str] = set()
        scores: list[tuple[str, float]] = []
        for level in self.levels:
            for tok, s in level.items():
                term = tok.replace(PHRASE_JOIN, " ")
                if term not in seen:
                    seen.add(term)
                    scores.append((term, s))
        from .keywords import CandidateItem
        items = [CandidateItem(term=t, score=float(s), rank=i + 1,
                               source="expand")
                 for i, (t, s) in enumerate(scores)]
        meta = {"method": "expand", "k_per_query": self.k_per_query,
                "n_levels": self.n_levels,
                "skipped_seeds": list(self.skipped_seeds)}
        return CandidateList(items=items, method_meta=meta)


def seed_token(seed: str) -> str:
    """Vocabulary spelling of a seed: multiword seeds use the phraser's
    joined form."""
    return PHRASE_JOIN.join(seed.split())


def expand_seeds(model: EmbeddingModel, seeds: Iterable[str], k: int = 10,
                 levels: int = 10) -> ExpansionTrace:
    """Level 1 = union of top-k neighbors of each in-vocab seed; level
    i+1 = union of top-k neighbors of level-i tokens minus seeds and all
    prior levels. Seeds missing from the vocabulary are skipped with a
    warning; an empty trace results if none are present."""
    if levels < 0:
        raise EarshotError(f"levels must be >= 0, got {levels}")
    trace = ExpansionTrace(k_per_query=k, n_levels=levels)
    seed_toks: list[str] = []
    for seed in sorted(set(seeds)):
        tok = seed_token(seed)
        if tok in model:
            seed_toks.append(tok)
        else:
            trace.skipped_seeds.append(seed)
            logger.warning("expand_seeds: seed %r not in vocabulary", seed)
    if not seed_toks:
        logger.warning("expand_seeds: no seed in vocabulary, empty trace")
        return trace

    excluded = set(seed_toks)
    frontier = seed_toks
    for _ in range(levels):
        pool: dict[str, float] = {}
        for tok in frontier:
            for neigh, sim in most_similar(model, tok, k):
                if neigh in excluded:
                    continue
                if neigh not in pool or sim > pool[neigh]:
                    pool[neigh] = sim
        if not pool:
            break
        ordered = dict(sorted(pool.items(), key=lambda ts: (-ts[1], ts[0])))
        trace.levels.append(ordered)
        excluded.update(ordered)
        frontier = list(ordered)
    return trace


# --- shared helpers --------------------------------------------------------


def reservoir_sample(items: Iterable, n: int, rng_seed: int) -> list:
    """Algorithm R; deterministic for a fixed seed and input order."""
    rng = random.Random(rng_seed)
    out: list = []
    for i, item in enumerate(items):
        if i < n:
            out.append(item)
        else:
            j = rng.randint(0, i)
            if j < n:
                out[j] = item
    return out


def _seed_matchers(seeds: Sequence[str]) -> list[tuple[str, re.Pattern]]:
    return [(s, surface_pattern(s)) for s in sorted(set(seeds))]


def _posts_with_seed(corpus: Iterable[Post],
                     matchers: list[tuple[str, re.Pattern]]) -> Iterable[tuple[Post, re.Match]]:
    for post in corpus:
        for _seed, pat in matchers:
            m = pat.search(post.text)
            if m:
                yield post, m
                break


def _drop_seed_terms(scores: dict[str, float], seeds: Sequence[str]) -> dict[str, float]:
    banned = {normalize_term(s) for s in seeds}
    return {t: s for t, s in scores.items() if normalize_term(t) not in banned}


# --- MLM fill-mask baseline ------------------------------------------------


def mlm_candidates(corpus: Iterable[Post], seeds: Sequence[str], endpoint,
                   sample_n: int = 2000, k: int = 100, rng_seed: int = 0,
                   fills_per_post: int = FILLS_PER_POST,
                   aggregate: str = "global-sum") -> CandidateList:
    """Mask the seed occurrence in sampled seed-bearing posts and rank
    fills. ``global-sum`` aggregates summed probability across posts;
    ``per-post-vote`` counts posts voting for the token (sensitivity
    variant). More than 50% endpoint failures aborts the run."""
    if aggregate not in ("global-sum", "per-post-vote"):
        raise EarshotError(f"unknown aggregate mode {aggregate!r}")
    meta = {"method": "mlm", "sample_n": sample_n, "k": k,
            "rng_seed": rng_seed, "aggregate": aggregate}
    if k == 0:
        return CandidateList(items=[], method_meta=meta)

    matchers = _seed_matchers(seeds)
    hits = list(_posts_with_seed(corpus, matchers))
    sampled = reservoir_sample(hits, sample_n, rng_seed)
    if not sampled:
        logger.warning("mlm_candidates: no posts contain a seed surface")
        return CandidateList(items=[], method_meta=meta)

    sums: dict[str, float] = {}
    votes: dict[str, float] = {}
    failures = 0
    for post, m in sampled:
        masked = post.text[:m.start()] + MASK + post.text[m.end():]
        try:
            fills = endpoint.fill(masked, top_k=fills_per_post)
        except EndpointError as exc:
            failures += 1
            logger.warning("mlm_candidates: fill failed for %s: %s", post.id, exc)
            if failures > MAX_FAILURE_FRACTION * len(sampled):
                raise EarshotError(
                    f"mlm_candidates: {failures}/{len(sampled)} endpoint "
                    "failures, aborting") from exc
            continue
        for token, prob in fills:
            sums[token] = sums.get(token, 0.0) + prob
            votes[token] = votes.get(token, 0.0) + 1.0

    scores = sums if aggregate == "global-sum" else votes
    scores = _drop_seed_terms(scores, seeds)
    meta["n_sampled"] = len(sampled)
    meta["n_failures"] = failures
    return ranked_candidates(scores, k, source="mlm", method_meta=meta)


# --- euphemistic phrase detection -------------------------------------------

PHRASE_SUPPORT = 10
PHRASE_NPMI = 0.5


def mine_phrases(token_streams: Sequence[Sequence[str]], min_n: int = 2,
                 max_n: int = 4, support: int = PHRASE_SUPPORT,
                 npmi_threshold: float = PHRASE_NPMI,
                 stop_set: frozenset[str] = ENGLISH_STOPWORDS) -> list[tuple[str, ...]]:
    """Contiguous n-grams (min_n..max_n) with occurrence count >= support
    and NPMI >= threshold; boundary tokens must not be stop words. NPMI
    uses per-length position totals: npmi = pmi / -ln p(gram)."""
    from .keywords import _FOLDED_SENTINELS
    uni: dict[str, int] = {}
    grams: dict[tuple[str, ...], int] = {}
    totals = {n: 0 for n in range(min_n, max_n + 1)}
    total_uni = 0
    for stream in token_streams:
        toks = [t.casefold() for t in stream]
        total_uni += len(toks)
        for t in toks:
            uni[t] = uni.get(t, 0) + 1
        for n in range(min_n, max_n + 1):
            totals[n] += max(0, len(toks) - n + 1)
            for i in range(len(toks) - n + 1):
                g = tuple(toks[i:i + n])
                if g[0] in stop_set or g[-1] in stop_set:
                    continue
                if any(t in _FOLDED_SENTINELS for t in g):
                    continue
                grams[g] = grams.get(g, 0) + 1

    mined: list[tuple[str, ...]] = []
    for g, c in grams.items():
        if c < support or totals[len(g)] == 0:
            continue
        p_g = c / totals[len(g)]
        if p_g >= 1.0:
            mined.append(g)  # gram fills every slot: maximal association
            continue
        log_indep = sum(np.log(uni[t] / total_uni) for t in g)
        pmi = np.log(p_g) - log_indep
        npmi = pmi / -np.log(p_g)
        if npmi >= npmi_threshold:
            mined.append(g)
    mined.sort(key=lambda g: (-grams[g], g))
    return mined


def _phrase_vector(tokens: Sequence[str], model: EmbeddingModel) -> np.ndarray | None:
    unit = model.unit_vectors()
    rows = [model.vocab[t] for t in tokens if t in model.vocab]
    if not rows:
        return None
    v = unit[rows].mean(axis=0)
    norm = np.linalg.norm(v)
    return v / norm if norm > 0 else None


def pool_phrases(mined: Sequence[tuple[str, ...]], seeds: Sequence[str],
                 model: EmbeddingModel,
                 pool_size: int = 1000) -> list[tuple[str, ...]]:
    """Keep the pool_size phrases most similar to any seed: cosine of
    averaged member-token vectors, max over seeds."""
    seed_vecs = []
    for seed in sorted(set(seeds)):
        v = _phrase_vector(seed.split(), model)
        if v is not None:
            seed_vecs.append(v)
    if not seed_vecs:
        logger.warning("pool_phrases: no seed has an in-vocabulary token")
        return list(mined[:pool_size])
    seed_mat = np.stack(seed_vecs)
    scored = []
    for g in mined:
        v = _phrase_vector(g, model)
        if v is None:
            continue
        scored.append((float((seed_mat @ v).max()), g))
    scored.sort(key=lambda sg: (-sg[0], sg[1]))
    return [g for _, g in scored[:pool_size]]


def epd_candidates(corpus: Iterable[Post], seeds: Sequence[str], endpoint,
                   unigram_model: EmbeddingModel, phrase_pool_size: int = 1000,
                   sample_n: int = 2000, k: int = 100,
                   rng_seed: int = 0) -> CandidateList:
    """Substitute pooled corpus phrases for the seed occurrence in sampled
    posts, score each substituted sentence by pseudo-log-likelihood over
    the inserted token positions, rank sentences, and return the inserted
    phrases deduplicated in rank order."""
    posts = list(corpus)
    meta = {"method": "epd", "phrase_pool_size": phrase_pool_size,
            "sample_n": sample_n, "k": k, "rng_seed": rng_seed}
    if k == 0:
        return CandidateList(items=[], method_meta=meta)

    streams = [p.tokens if p.tokens is not None
               else [t.casefold() for t in tweet_tokenize(p.text)]
               for p in posts]
    mined = mine_phrases(streams)
    pooled = pool_phrases(mined, seeds, unigram_model, phrase_pool_size)
    meta["n_mined"] = len(mined)
    meta["n_pooled"] = len(pooled)
    if not pooled:
        logger.warning("epd_candidates: no phrases mined above thresholds")
        return CandidateList(items=[], method_meta=meta)

    matchers = _seed_matchers(seeds)
    sampled = reservoir_sample(list(_posts_with_seed(posts, matchers)),
                               sample_n, rng_seed)
    if not sampled:
        logger.warning("epd_candidates: no posts contain a seed surface")
        return CandidateList(items=[], method_meta=meta)

    scored: list[tuple[float, str]] = []
    failures = 0
    attempts = len(sampled) * len(pooled)
    for post, m in sampled:
        for g in pooled:
            phrase = " ".join(g)
            text = post.text[:m.start()] + phrase + post.text[m.end():]
            # positions index whitespace tokens of the substituted text
            start_tok = len(text[:m.start()].split())
            positions = list(range(start_tok, start_tok + len(g)))
            try:
                logprobs = endpoint.score(text, positions)
            except EndpointError as exc:
                failures += 1
                if failures > MAX_FAILURE_FRACTION * attempts:
                    raise EarshotError(
                        f"epd_candidates: {failures}/{attempts} endpoint "
                        "failures, aborting") from exc
                continue
            scored.append((float(sum(logprobs)), phrase))

    scored.sort(key=lambda sp: (-sp[0], sp[1]))
    banned = {normalize_term(s) for s in seeds}
    seen: set[str] = set()
    from .keywords import CandidateItem
    items: list[CandidateItem] = []
    for s, phrase in scored[:k]:
        key = normalize_term(phrase)
        if key in seen or key in banned:
            continue
        seen.add(key)
        items.append(CandidateItem(term=phrase, score=s,
                                   rank=len(items) + 1, source="epd"))
    meta["n_failures"] = failures
    return CandidateList(items=items, method_meta=meta)
