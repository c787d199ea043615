"""Keyword extraction backends used by the PREDICT path.

Five methods: tfidf, rake, yake, textrank, embed-keyword. Each post is a
document; a candidate's score is max-pooled across documents before the
global top-k cut. Variant constants (smoothed idf, textrank damping,
yake window) are documented at the point of use.
"""

from __future__ import annotations

import json
import logging
import math
import re
import statistics
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import SENTINELS, tweet_tokenize
from .errors import EarshotError
from .stopwords import ENGLISH_STOPWORDS

logger = logging.getLogger(__name__)

METHODS = ("tfidf", "rake", "yake", "textrank", "embed-keyword")

_SENTENCE_SPLIT = re.compile(r"[.!?\n]+")
_WORDLIKE = re.compile(r"\w")
_FOLDED_SENTINELS = frozenset(s.casefold() for s in SENTINELS)


@dataclass(frozen=True)
class KeywordRequest:
    method: str
    max_ngram: int
    k: int
    documents: tuple[str, ...]
    stop_set: frozenset[str] = ENGLISH_STOPWORDS

    def __post_init__(self):
        if self.method not in METHODS:
            raise EarshotError(f"unknown keyword method {self.method!r}")
        if self.max_ngram not in (1, 2, 3):
            raise EarshotError(f"max_ngram must be 1, 2 or 3, got {self.max_ngram}")
        if self.k < 1:
            raise EarshotError(f"k must be >= 1, got {self.k}")
        if not self.documents:
            raise EarshotError("documents must be nonempty")


@dataclass(frozen=True)
class CandidateItem:
    term: str
    score: float
    rank: int
    source: str


@dataclass
class CandidateList:
    items: list[CandidateItem]
    method_meta: dict
    ranked: bool = True

    def terms(self) -> list[str]:
        return [it.term for it in self.items]

    def __len__(self) -> int:
        return len(self.items)


def ranked_candidates(scores: dict[str, float], k: int, source: str,
                      method_meta: dict, ranked: bool = True) -> CandidateList:
    """Top-k by (score desc, term asc); ranks assigned 1..n."""
    order = sorted(scores.items(), key=lambda ts: (-ts[1], ts[0]))[:k]
    items = [CandidateItem(term=t, score=float(s), rank=i + 1, source=source)
             for i, (t, s) in enumerate(order)]
    return CandidateList(items=items, method_meta=method_meta, ranked=ranked)


def candidate_ngrams(tokens: Sequence[str], max_ngram: int,
                     stop_set: frozenset[str] = ENGLISH_STOPWORDS) -> list[str]:
    """Contiguous 1..max_ngram grams that neither start nor end with a
    stop word and contain no sentinel token. Duplicates preserved so
    callers can count occurrences."""
    if max_ngram not in (1, 2, 3):
        raise EarshotError(f"max_ngram must be 1, 2 or 3, got {max_ngram}")
    folded = [t.casefold() for t in tokens]
    out: list[str] = []
    for n in range(1, max_ngram + 1):
        for i in range(len(folded) - n + 1):
            gram = folded[i:i + n]
            if gram[0] in stop_set or gram[-1] in stop_set:
                continue
            if any(g in _FOLDED_SENTINELS for g in gram):
                continue
            out.append(" ".join(gram))
    return out


def _doc_tokens(text: str) -> list[str]:
    # original-case tokens; punctuation-only tokens dropped up front so
    # they never leak into candidates (stop/sentinel filtering is the
    # candidate generator's job, junk filtering is ours)
    return [t for t in tweet_tokenize(text)
            if _WORDLIKE.search(t) or t in SENTINELS]


def _pool_max(per_doc: Iterable[dict[str, float]]) -> dict[str, float]:
    pooled: dict[str, float] = {}
    for scores in per_doc:
        for term, s in scores.items():
            if term not in pooled or s > pooled[term]:
                pooled[term] = s
    return pooled


# --- tfidf ---------------------------------------------------------------


def _tfidf_scores(req: KeywordRequest) -> dict[str, float]:
    # idf = ln((1+N)/(1+df)) + 1, tf = raw in-document count
    doc_grams = [candidate_ngrams(_doc_tokens(d), req.max_ngram, req.stop_set)
                 for d in req.documents]
    n_docs = len(doc_grams)
    df: dict[str, int] = {}
    for grams in doc_grams:
        for term in set(grams):
            df[term] = df.get(term, 0) + 1
    per_doc = []
    for grams in doc_grams:
        tf: dict[str, int] = {}
        for term in grams:
            tf[term] = tf.get(term, 0) + 1
        idf = {t: math.log((1 + n_docs) / (1 + df[t])) + 1 for t in tf}
        per_doc.append({t: c * idf[t] for t, c in tf.items()})
    return _pool_max(per_doc)


# --- rake ----------------------------------------------------------------


def _rake_phrases(tokens: Sequence[str], stop_set: frozenset[str]) -> list[list[str]]:
    phrases: list[list[str]] = []
    cur: list[str] = []
    for tok in tokens:
        low = tok.casefold()
        if low in stop_set or low in _FOLDED_SENTINELS or not _WORDLIKE.search(tok):
            if cur:
                phrases.append(cur)
                cur = []
        else:
            cur.append(low)
    if cur:
        phrases.append(cur)
    return phrases


def _rake_scores(req: KeywordRequest) -> dict[str, float]:
    # word score = degree/frequency over stopword-delimited phrases;
    # phrase score = sum of member word scores
    per_doc = []
    for doc in req.documents:
        phrases = _rake_phrases(_doc_tokens(doc), req.stop_set)
        freq: dict[str, int] = {}
        degree: dict[str, int] = {}
        for ph in phrases:
            for w in ph:
                freq[w] = freq.get(w, 0) + 1
                degree[w] = degree.get(w, 0) + len(ph)
        scores: dict[str, float] = {}
        for ph in phrases:
            if len(ph) > req.max_ngram:
                continue
            term = " ".join(ph)
            s = sum(degree[w] / freq[w] for w in ph)
            if term not in scores or s > scores[term]:
                scores[term] = s
        per_doc.append(scores)
    return _pool_max(per_doc)


# --- yake ----------------------------------------------------------------


def _yake_doc_scores(text: str, req: KeywordRequest) -> dict[str, float]:
    """Original five-feature score (casing, position, frequency,
    relatedness with window 1, sentence dispersion); lower is better, so
    scores are negated before pooling."""
    sentences = [
        _doc_tokens(s) for s in _SENTENCE_SPLIT.split(text) if s.strip()
    ]
    sentences = [s for s in sentences if s]
    if not sentences:
        return {}
    n_sent = len(sentences)

    tf: dict[str, int] = {}
    tf_upper: dict[str, int] = {}
    tf_acronym: dict[str, int] = {}
    sent_ids: dict[str, list[int]] = {}
    left: dict[str, list[str]] = {}
    right: dict[str, list[str]] = {}
    for si, sent in enumerate(sentences):
        folded = [t.casefold() for t in sent]
        for i, (tok, low) in enumerate(zip(sent, folded)):
            tf[low] = tf.get(low, 0) + 1
            if len(tok) > 1 and tok.isupper():
                tf_acronym[low] = tf_acronym.get(low, 0) + 1
            elif i > 0 and tok[:1].isupper():
                tf_upper[low] = tf_upper.get(low, 0) + 1
            sent_ids.setdefault(low, []).append(si)
            if i > 0:
                left.setdefault(low, []).append(folded[i - 1])
            if i + 1 < len(sent):
                right.setdefault(low, []).append(folded[i + 1])

    content_tf = [c for w, c in tf.items() if w not in req.stop_set]
    mean_tf = statistics.fmean(content_tf) if content_tf else 1.0
    std_tf = statistics.pstdev(content_tf) if len(content_tf) > 1 else 0.0
    max_tf = max(tf.values())

    word_s: dict[str, float] = {}
    for w, count in tf.items():
        w_case = max(tf_acronym.get(w, 0), tf_upper.get(w, 0)) / (1 + math.log(count))
        w_pos = math.log(math.log(3 + statistics.median(sent_ids[w])))
        w_freq = count / (mean_tf + std_tf) if (mean_tf + std_tf) > 0 else 0.0
        lw, rw = left.get(w, []), right.get(w, [])
        dl = len(set(lw)) / len(lw) if lw else 0.0
        dr = len(set(rw)) / len(rw) if rw else 0.0
        w_rel = 1 + (dl + dr) * count / max_tf
        w_sent = len(set(sent_ids[w])) / n_sent
        word_s[w] = (w_rel * w_pos) / (w_case + w_freq / w_rel + w_sent / w_rel)

    grams = candidate_ngrams([t for s in sentences for t in s],
                             req.max_ngram, req.stop_set)
    gram_tf: dict[str, int] = {}
    for g in grams:
        gram_tf[g] = gram_tf.get(g, 0) + 1
    scores: dict[str, float] = {}
    for g, count in gram_tf.items():
        members = g.split()
        prod = 1.0
        total = 0.0
        for w in members:
            prod *= word_s[w]
            total += word_s[w]
        yake = prod / (count * (1 + total))
        scores[g] = -yake
    return scores


def _yake_scores(req: KeywordRequest) -> dict[str, float]:
    return _pool_max(_yake_doc_scores(d, req) for d in req.documents)


# --- textrank ------------------------------------------------------------


def _textrank_doc_scores(text: str, req: KeywordRequest) -> dict[str, float]:
    """Undirected co-occurrence graph (window 2, counts as edge weights),
    damping 0.85, power iteration to 1e-6 or 100 rounds. Phrase score is
    the sum of member word scores."""
    tokens = [t.casefold() for t in _doc_tokens(text)]
    is_node = [t not in req.stop_set and t not in _FOLDED_SENTINELS
               for t in tokens]
    weights: dict[tuple[str, str], float] = {}
    nodes: dict[str, int] = {}
    for i in range(len(tokens) - 1):
        a, b = tokens[i], tokens[i + 1]
        if not (is_node[i] and is_node[i + 1]) or a == b:
            continue
        nodes.setdefault(a, len(nodes))
        nodes.setdefault(b, len(nodes))
        key = (a, b) if a < b else (b, a)
        weights[key] = weights.get(key, 0.0) + 1.0
    for i, t in enumerate(tokens):
        if is_node[i]:
            nodes.setdefault(t, len(nodes))
    if not nodes:
        return {}

    n = len(nodes)
    w = np.zeros((n, n))
    for (a, b), c in weights.items():
        w[nodes[a], nodes[b]] = c
        w[nodes[b], nodes[a]] = c
    out_sum = w.sum(axis=1)
    pr = np.full(n, 1.0 / n)
    damping = 0.85
    for _ in range(100):
        contrib = np.where(out_sum > 0, pr / np.where(out_sum > 0, out_sum, 1), 0.0)
        nxt = (1 - damping) / n + damping * (w.T @ contrib)
        if np.abs(nxt - pr).max() < 1e-6:
            pr = nxt
            break
        pr = nxt

    word_score = {t: float(pr[i]) for t, i in nodes.items()}
    grams = set(candidate_ngrams(tokens, req.max_ngram, req.stop_set))
    return {g: sum(word_score.get(w, 0.0) for w in g.split()) for g in grams}


def _textrank_scores(req: KeywordRequest) -> dict[str, float]:
    return _pool_max(_textrank_doc_scores(d, req) for d in req.documents)


# --- embed-keyword -------------------------------------------------------


def _embed_keyword_scores(req: KeywordRequest, provider) -> dict[str, float]:
    # cosine(candidate embedding, document embedding), max over documents
    from .vectorstore import embed_texts
    doc_grams = [sorted(set(candidate_ngrams(_doc_tokens(d), req.max_ngram,
                                             req.stop_set)))
                 for d in req.documents]
    all_terms = sorted({t for grams in doc_grams for t in grams})
    if not all_terms:
        return {}
    term_vecs = embed_texts(provider, all_terms)
    doc_vecs = embed_texts(provider, list(req.documents))
    term_row = {t: i for i, t in enumerate(all_terms)}
    per_doc = []
    for di, grams in enumerate(doc_grams):
        dv = doc_vecs[di].astype(np.float64)
        per_doc.append({t: float(term_vecs[term_row[t]].astype(np.float64) @ dv)
                        for t in grams})
    return _pool_max(per_doc)


def extract_keywords(req: KeywordRequest, provider=None) -> CandidateList:
    """Run the requested extractor; exactly min(k, #candidates) items."""
    if req.method == "tfidf":
        scores = _tfidf_scores(req)
    elif req.method == "rake":
        scores = _rake_scores(req)
    elif req.method == "yake":
        scores = _yake_scores(req)
    elif req.method == "textrank":
        scores = _textrank_scores(req)
    else:
        if provider is None:
            raise EarshotError("embed-keyword requires an embedding provider")
        scores = _embed_keyword_scores(req, provider)
    meta = {"method": req.method, "max_ngram": req.max_ngram, "k": req.k,
            "n_documents": len(req.documents)}
    return ranked_candidates(scores, req.k, source=req.method, method_meta=meta)


# --- candidate list file format -------------------------------------------


def save_candidates(path: str | Path, cl: CandidateList,
                    config_hash: str | None = None) -> None:
    header = {"method_meta": cl.method_meta, "ranked": cl.ranked}
    if config_hash is not None:
        header["config_hash"] = config_hash
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"_header": header}, sort_keys=True) + "\n")
        for it in cl.items:
            fh.write(json.dumps({"term": it.term, "score": it.score,
                                 "rank": it.rank, "source": it.source},
                                sort_keys=True) + "\n")


def load_candidates(path: str | Path) -> CandidateList:
    items: list[CandidateItem] = []
    meta: dict = {}
    ranked = True
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            if "_header" in obj:
                meta = obj["_header"].get("method_meta", {})
                ranked = obj["_header"].get("ranked", True)
                continue
            items.append(CandidateItem(term=obj["term"], score=obj["score"],
                                       rank=obj["rank"], source=obj["source"]))
    return CandidateList(items=items, method_meta=meta, ranked=ranked)
