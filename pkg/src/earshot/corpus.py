"""Corpus streaming, normalization, and tokenization.

The preprocessing recipe used for static-embedding training:

1. raw-text rewrites: retweet marker stripped, URLs -> ``HTTPURL``,
   mentions -> ``@USER``, hashtag ``#`` stripped (word kept)
2. emoji replaced by their colon-delimited English alias
3. tweet-style tokenization (emoticons, sentinels, and alias tokens
   survive as single tokens)
4. lowercasing (sentinels exempt)
5. stop-word removal
6. rule-based lemmatization

Steps are deterministic and idempotent on their own output.
"""

from __future__ import annotations

import gzip
import io
import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator

from .emoji_aliases import EMOJI_ALIASES, EMOJI_TRANSPARENT
from .errors import CorpusError
from .stopwords import ENGLISH_STOPWORDS

logger = logging.getLogger(__name__)

URL_SENTINEL = "HTTPURL"
MENTION_SENTINEL = "@USER"
SENTINELS = frozenset({URL_SENTINEL, MENTION_SENTINEL})


@dataclass
class Post:
    """One corpus document. ``tokens`` is filled by :func:`preprocess`."""

    id: str
    text: str
    tokens: list[str] | None = None


@dataclass(frozen=True)
class PreprocessConfig:
    """Normalization knobs, fixed per run and serialized into artifact headers."""

    stopword_list: frozenset[str] = ENGLISH_STOPWORDS
    lemmatize: bool = True
    emoji_aliasing: bool = True
    lowercase: bool = True

    def to_dict(self) -> dict:
        return {
            "stopword_count": len(self.stopword_list),
            "lemmatize": self.lemmatize,
            "emoji_aliasing": self.emoji_aliasing,
            "lowercase": self.lowercase,
        }


# --- raw-text rewrites -------------------------------------------------

_RT_RE = re.compile(r"^\s*[Rr][Tt]\s+")
_URL_RE = re.compile(r"(?:https?://\S+|www\.\S+)")
_MENTION_RE = re.compile(r"(?<![\w@.])@\w+")
_HASHTAG_RE = re.compile(r"(?<!\w)#(\w+)")

# --- tokenizer ---------------------------------------------------------
# Ordered alternation; earlier branches win. URLs and mentions are
# normally already sentinels by the time this runs, but the branches stay
# so the tokenizer is safe on raw text too.

_EMOTICON = r"""
    [<>]?[:;=8][\-o\*']?[\)\]\(\[dDpP/\}\{@\|\\]   # :-) ;P =D
  | [\)\]\(\[dDpP/\}\{@\|\\][\-o\*']?[:;=8][<>]?   # (-: reversed
  | <3                                             # heart
"""

_TOKEN_RE = re.compile(
    r"""(?x)
      (?:https?://\S+|www\.\S+)               # urls
    | :[A-Za-z0-9_+\-']+:                     # emoji alias tokens
    | """ + _EMOTICON + r"""                  # emoticons
    | @\w+                                    # mentions
    | \#\w+                                   # hashtags
    | \d+(?:[./:,\-]\d+)*%?                   # numbers, dates, 13/50
    | [A-Za-z_]+(?:['’\-][A-Za-z]+)*          # words incl. don't, alt-right
    | [^\s]                                   # any leftover symbol
    """
)

_PUNCT_ONLY_RE = re.compile(r"^[^\w\s]+$")
_EMOTICON_RE = re.compile(r"(?x)^(?:" + _EMOTICON + r")$")
_ALIAS_TOKEN_RE = re.compile(r"^:[A-Za-z0-9_+\-']+:$")

# emoji blocks treated as standalone tokens even without an alias entry
_EMOJI_RANGE_RE = re.compile(
    "[\U0001F000-\U0001FAFF☀-➿⬀-⯿←-⇿️‍]"
)


def alias_emoji(text: str) -> str:
    """Replace known emoji with `` :short_name: `` (space padded)."""
    if not _EMOJI_RANGE_RE.search(text):
        return text
    out: list[str] = []
    for ch in text:
        if ch in EMOJI_TRANSPARENT:
            continue
        alias = EMOJI_ALIASES.get(ch)
        if alias is not None:
            out.append(f" {alias} ")
        elif _EMOJI_RANGE_RE.match(ch):
            out.append(f" {ch} ")
        else:
            out.append(ch)
    return "".join(out)


def tweet_tokenize(text: str) -> list[str]:
    """Deterministic tweet-style tokenization of already-rewritten text."""
    return _TOKEN_RE.findall(text)


# --- lemmatizer --------------------------------------------------------

_VOWELS = set("aeiou")
_DOUBLABLE = set("bdgmnprt")


def _has_vowel(stem: str) -> bool:
    return any(c in _VOWELS for c in stem)


def _undouble(stem: str) -> str:
    if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] in _DOUBLABLE:
        return stem[:-1]
    return stem


def rule_lemmatize(word: str) -> str:
    """Suffix-stripping lemmatizer: plural -s/-es, -ing, -ed.

    Deterministic and idempotent; the lemma choice is intentionally
    approximate (the surrounding protocol only needs a stable mapping).
    """
    # plurals
    if word.endswith("ies") and len(word) > 4:
        word = word[:-3] + "y"
    elif word.endswith("sses"):
        word = word[:-2]
    elif word.endswith("es") and len(word) > 4 and (
        word[-3] in "sxzo" or word.endswith(("ches", "shes"))
    ):
        word = word[:-2]
    elif word.endswith("s") and len(word) > 3 and not word.endswith(("ss", "us", "is")):
        word = word[:-1]
    # -ing / -ed with doubling repair
    if word.endswith("ing") and len(word) > 5 and _has_vowel(word[:-3]):
        word = _undouble(word[:-3])
    elif word.endswith("eed") and len(word) > 5:
        word = word[:-1]
    elif word.endswith("ed") and len(word) > 4 and _has_vowel(word[:-2]):
        word = _undouble(word[:-2])
    return word


Lemmatizer = Callable[[str], str]


# --- preprocessing -----------------------------------------------------


def normalize_text(text: str, cfg: PreprocessConfig) -> str:
    """Apply the raw-text rewrites (stage 1 and 2) without tokenizing."""
    text = _RT_RE.sub("", text)
    text = _URL_RE.sub(f" {URL_SENTINEL} ", text)
    text = _MENTION_RE.sub(f" {MENTION_SENTINEL} ", text)
    text = _HASHTAG_RE.sub(r"\1", text)
    if cfg.emoji_aliasing:
        text = alias_emoji(text)
    return text


def preprocess(post: Post, cfg: PreprocessConfig = PreprocessConfig(),
               lemmatizer: Lemmatizer = rule_lemmatize) -> Post:
    """Return a copy of ``post`` with the normalized token stream filled."""
    toks: list[str] = []
    for tok in tweet_tokenize(normalize_text(post.text, cfg)):
        if tok in SENTINELS:
            toks.append(tok)
            continue
        # aggressive URL rule: nothing with "http" inside survives raw
        if "http" in tok.lower():
            toks.append(URL_SENTINEL)
            continue
        if tok.startswith("@") and len(tok) > 1 and _MENTION_RE.match(tok):
            toks.append(MENTION_SENTINEL)
            continue
        if _PUNCT_ONLY_RE.match(tok) and not _EMOTICON_RE.match(tok) and tok != "<3":
            continue
        if cfg.lowercase:
            tok = tok.lower()
        if tok.startswith("#"):
            tok = tok[1:]
            if not tok:
                continue
        if tok in cfg.stopword_list:
            continue
        if cfg.lemmatize and tok.isalpha():
            tok = lemmatizer(tok)
            if tok in cfg.stopword_list:
                continue
        toks.append(tok)
    return Post(id=post.id, text=post.text, tokens=toks)


# --- ingestion ---------------------------------------------------------


@dataclass
class IngestStats:
    """Counters filled while an ingest stream is consumed."""

    n_posts: int = 0
    n_skipped: int = 0


def _open_maybe_gz(path: Path) -> io.TextIOBase:
    if path.suffix == ".gz":
        return io.TextIOWrapper(gzip.open(path, "rb"), encoding="utf-8")
    return open(path, "r", encoding="utf-8")


def infer_format(path: Path) -> str:
    name = path.name
    if name.endswith(".jsonl.gz") or name.endswith(".json.gz"):
        return "jsonl-gz"
    if name.endswith(".jsonl") or name.endswith(".json"):
        return "jsonl"
    return "plain-text-lines"


def ingest_corpus(path: str | Path, fmt: str | None = None,
                  stats: IngestStats | None = None) -> Iterator[Post]:
    """Stream posts from disk, one at a time (O(1) posts held in memory).

    Malformed JSONL lines are skipped and counted; an unreadable file is
    fatal. Posts without an ``id`` get sequential ``p<line>`` ids.
    """
    path = Path(path)
    if not path.exists():
        raise CorpusError(f"corpus file not found: {path}")
    fmt = fmt or infer_format(path)
    if fmt not in ("jsonl", "jsonl-gz", "plain-text-lines"):
        raise CorpusError(f"unknown corpus format: {fmt}")
    if stats is None:
        stats = IngestStats()

    try:
        fh = _open_maybe_gz(path)
    except OSError as exc:
        raise CorpusError(f"cannot open corpus file {path}: {exc}") from exc

    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            if fmt == "plain-text-lines":
                stats.n_posts += 1
                yield Post(id=f"p{lineno}", text=line)
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError:
                stats.n_skipped += 1
                logger.warning("%s:%d: malformed JSON line skipped", path.name, lineno)
                continue
            if isinstance(obj, dict) and "_header" in obj:
                continue  # artifact header line, not a post
            if not isinstance(obj, dict) or "text" not in obj:
                stats.n_skipped += 1
                logger.warning("%s:%d: line without 'text' key skipped", path.name, lineno)
                continue
            stats.n_posts += 1
            pid = str(obj.get("id", f"p{lineno}"))
            post = Post(id=pid, text=str(obj["text"]))
            if isinstance(obj.get("tokens"), list):
                post.tokens = [str(t) for t in obj["tokens"]]
            yield post
    logger.info("ingested %d posts from %s (%d skipped)",
                stats.n_posts, path.name, stats.n_skipped)


def write_posts(path: str | Path, posts: Iterable[Post],
                cfg: PreprocessConfig | None = None,
                header_extra: dict | None = None) -> int:
    """Write posts as JSON Lines, leading with an artifact header line."""
    path = Path(path)
    header: dict = {"kind": "corpus"}
    if cfg is not None:
        header["preprocess"] = cfg.to_dict()
    if header_extra:
        header.update(header_extra)
    n = 0
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "wt", encoding="utf-8") as fh:
        fh.write(json.dumps({"_header": header}, sort_keys=True) + "\n")
        for post in posts:
            rec = {"id": post.id, "text": post.text}
            if post.tokens is not None:
                rec["tokens"] = post.tokens
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
            n += 1
    return n
