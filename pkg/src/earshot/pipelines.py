"""EarShot DIRECT and PREDICT: seed-post lookup, LLM extraction,
yes-no/classifier filtering, keyword extraction.

Both paths start the same way: posts carrying a train-seed surface are
looked up in the vector index and their nearest non-self neighbors
become the working set. DIRECT prompts a chat model for structured JSON
per post; PREDICT filters the working set and runs a keyword extractor
over what survives. Train surfaces are stripped from every returned
candidate list.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Sequence

from .corpus import Post
from .errors import EarshotError, EndpointError
from .evaluation import normalize_term
from .keywords import (CandidateItem, CandidateList, KeywordRequest,
                       extract_keywords)
from .lexicon import GlossaryEntry, SeedSplit, posts_with_surfaces
from .vectorstore import (EmbeddingProviderConfig, VectorIndex, build_index,
                          nearest_posts)

logger = logging.getLogger(__name__)

_YES_WORD = re.compile(r"\byes\b", re.IGNORECASE)
PROMPT_SLOT = "{POST}"


def load_prompts() -> dict[str, str]:
    """The two registry prompts, keyed {direct, llm-predict}."""
    text = resources.files("earshot").joinpath("prompts.json").read_text("utf-8")
    return json.loads(text)


def render_prompt(template: str, post_text: str) -> str:
    if PROMPT_SLOT not in template:
        raise EarshotError("prompt template is missing the {POST} slot")
    return template.replace(PROMPT_SLOT, post_text)


def find_json_object(text: str) -> dict | None:
    """First balanced {...} block that parses as JSON, or None.

    Brace scanning is string-aware so braces inside JSON strings do not
    break the balance count.
    """
    start = text.find("{")
    while start != -1:
        depth = 0
        in_string = False
        escaped = False
        for i in range(start, len(text)):
            ch = text[i]
            if in_string:
                if escaped:
                    escaped = False
                elif ch == "\\":
                    escaped = True
                elif ch == '"':
                    in_string = False
                continue
            if ch == '"':
                in_string = True
            elif ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    try:
                        obj = json.loads(text[start:i + 1])
                    except json.JSONDecodeError:
                        break
                    if isinstance(obj, dict):
                        return obj
                    break
        start = text.find("{", start + 1)
    return None


@dataclass(frozen=True)
class EarshotConfig:
    provider: EmbeddingProviderConfig = field(
        default_factory=EmbeddingProviderConfig)
    neighbors_per_seed: int = 1
    filter_strategy: str = "classifier"  # or "llm-yes-no"
    keyword_method: str = "tfidf"
    max_ngram: int = 1
    k: int = 50
    positive_label: str = "hate"  # label map entry for the classifier
    max_tokens: int = 512
    temperature: float = 0.0      # reproducibility default


@dataclass(frozen=True)
class FilterDecision:
    post_id: str
    kept: bool
    strategy: str
    raw_response: str
    label_or_score: float | None = None


def direct_extract(posts: Sequence[Post], chat_endpoint,
                   max_tokens: int = 512,
                   temperature: float = 0.0) -> CandidateList:
    """Prompt per post, parse the embedded JSON, collect "dogwhistles".

    Candidates are deduplicated case-insensitively and ordered by
    extraction frequency then first-seen; the list is marked unranked
    because the ordering is a tie-break convenience, not a threshold.
    """
    template = load_prompts()["direct"]
    counts: dict[str, int] = {}
    first_seen: dict[str, int] = {}
    spelling: dict[str, str] = {}
    parse_failures = 0
    endpoint_failures = 0
    order = 0
    for post in posts:
        try:
            response = chat_endpoint.complete(
                render_prompt(template, post.text),
                max_tokens=max_tokens, temperature=temperature)
        except EndpointError as exc:
            endpoint_failures += 1
            logger.warning("direct_extract: chat failed for %s: %s",
                           post.id, exc)
            continue
        obj = find_json_object(response)
        if obj is None or not isinstance(obj.get("dogwhistles"), list):
            parse_failures += 1
            continue
        for term in obj["dogwhistles"]:
            if not isinstance(term, str) or not term.strip():
                continue
            key = normalize_term(term)
            counts[key] = counts.get(key, 0) + 1
            if key not in first_seen:
                first_seen[key] = order
                spelling[key] = term.strip()
                order += 1

    ranked = sorted(counts, key=lambda t: (-counts[t], first_seen[t]))
    items = [CandidateItem(term=spelling[t], score=float(counts[t]),
                           rank=i + 1, source="direct")
             for i, t in enumerate(ranked)]
    meta = {"method": "direct", "n_posts": len(posts),
            "parse_failures": parse_failures,
            "endpoint_failures": endpoint_failures}
    return CandidateList(items=items, method_meta=meta, ranked=False)


def filter_posts(posts: Sequence[Post], strategy: str, endpoint,
                 positive_label: str = "hate",
                 batch_size: int = 32) -> list[FilterDecision]:
    """llm-yes-no keeps a post iff a whole-word "yes" appears in the
    response; classifier keeps iff the returned label equals the
    configured positive label. Failed posts are dropped (kept=False):
    fewer false keeps."""
    decisions: list[FilterDecision] = []
    if strategy == "llm-yes-no":
        template = load_prompts()["llm-predict"]
        for post in posts:
            try:
                response = endpoint.complete(render_prompt(template, post.text))
            except EndpointError as exc:
                decisions.append(FilterDecision(post.id, False, strategy,
                                                f"error: {exc}"))
                continue
            kept = _YES_WORD.search(response) is not None
            decisions.append(FilterDecision(post.id, kept, strategy, response))
    elif strategy == "classifier":
        for i in range(0, len(posts), batch_size):
            chunk = posts[i:i + batch_size]
            try:
                results = endpoint.classify([p.text for p in chunk])
            except EndpointError as exc:
                logger.warning("filter_posts: classify batch failed: %s", exc)
                decisions.extend(
                    FilterDecision(p.id, False, strategy, f"error: {exc}")
                    for p in chunk)
                continue
            for post, (label, score) in zip(chunk, results):
                decisions.append(FilterDecision(post.id, label == positive_label,
                                                strategy, label, score))
    else:
        raise EarshotError(f"unknown filter strategy {strategy!r}")
    dropped = sum(d.raw_response.startswith("error:") for d in decisions)
    if dropped:
        logger.warning("filter_posts: %d posts dropped on endpoint errors",
                       dropped)
    return decisions


def strip_train_terms(cl: CandidateList,
                      train_entries: Sequence[GlossaryEntry]) -> CandidateList:
    """Leakage guard: remove candidates matching any train surface/root
    and renumber ranks."""
    forms: set[str] = set()
    for e in train_entries:
        forms |= e.all_forms()
    items = [it for it in cl.items if normalize_term(it.term) not in forms]
    items = [CandidateItem(term=it.term, score=it.score, rank=i + 1,
                           source=it.source)
             for i, it in enumerate(items)]
    return CandidateList(items=items, method_meta=cl.method_meta,
                         ranked=cl.ranked)


def _neighbor_posts(posts: Sequence[Post], split: SeedSplit,
                    cfg: EarshotConfig,
                    index: VectorIndex | None) -> list[Post]:
    seed_ids = posts_with_surfaces(list(split.train_roots), posts)
    if not seed_ids:
        logger.warning("earshot: no post contains a train-seed surface")
        return []
    if index is None:
        index = build_index(posts, cfg.provider)
    neighbor_ids = nearest_posts(index, seed_ids, cfg.neighbors_per_seed)
    by_id = {p.id: p for p in posts}
    return [by_id[pid] for pid in sorted(neighbor_ids)]


def run_direct(posts: Sequence[Post], split: SeedSplit, cfg: EarshotConfig,
               chat_endpoint, index: VectorIndex | None = None) -> CandidateList:
    neighbors = _neighbor_posts(posts, split, cfg, index)
    if not neighbors:
        return CandidateList(items=[], method_meta={"method": "direct"},
                             ranked=False)
    cl = direct_extract(neighbors, chat_endpoint,
                        max_tokens=cfg.max_tokens,
                        temperature=cfg.temperature)
    return strip_train_terms(cl, list(split.train_roots))


def run_predict(posts: Sequence[Post], split: SeedSplit, cfg: EarshotConfig,
                filter_endpoint,
                index: VectorIndex | None = None) -> CandidateList:
    neighbors = _neighbor_posts(posts, split, cfg, index)
    meta = {"method": "predict", "filter_strategy": cfg.filter_strategy,
            "keyword_method": cfg.keyword_method}
    if not neighbors:
        return CandidateList(items=[], method_meta=meta)
    decisions = filter_posts(neighbors, cfg.filter_strategy, filter_endpoint,
                             positive_label=cfg.positive_label)
    kept_ids = {d.post_id for d in decisions if d.kept}
    kept = [p for p in neighbors if p.id in kept_ids]
    if not kept:
        logger.warning("run_predict: filter kept zero posts")
        return CandidateList(items=[], method_meta=meta)
    req = KeywordRequest(method=cfg.keyword_method, max_ngram=cfg.max_ngram,
                         k=cfg.k, documents=tuple(p.text for p in kept))
    provider = cfg.provider if cfg.keyword_method == "embed-keyword" else None
    cl = extract_keywords(req, provider=provider)
    cl.method_meta.update(meta)
    cl.method_meta["n_kept"] = len(kept)
    return strip_train_terms(cl, list(split.train_roots))
