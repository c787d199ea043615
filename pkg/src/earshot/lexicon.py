"""Glossary loading, corpus presence scan, and the stratified seed split.

Roots are the unit of splitting; every root travels with its surface
forms so no variant of a train term can leak into the test side.
"""

from __future__ import annotations

import json
import logging
import math
import random
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import Post, alias_emoji
from .errors import GlossaryError

logger = logging.getLogger(__name__)

_EMOJIISH_RE = re.compile("[\U0001F000-\U0001FAFF☀-➿⬀-⯿]")


@dataclass(frozen=True)
class GlossaryEntry:
    """A root dog whistle with its matchable surface forms."""

    root: str
    surfaces: frozenset[str]

    @property
    def ngram_len(self) -> int:
        return len(self.root.split())

    def all_forms(self) -> frozenset[str]:
        return self.surfaces


def make_entry(root: str, surfaces: Iterable[str] = ()) -> GlossaryEntry:
    root = " ".join(str(root).split())
    if not root:
        raise GlossaryError("glossary entry with empty root")
    forms = {root.casefold()}
    for s in surfaces:
        s = " ".join(str(s).split())
        if s:
            forms.add(s.casefold())
    return GlossaryEntry(root=root, surfaces=frozenset(forms))


def load_glossary(path: str | Path) -> list[GlossaryEntry]:
    """Load a JSON array of ``{"root": ..., "surfaces": [...]}`` entries.

    Surfaces are case-folded and deduplicated; the root is always one of
    its own surfaces. A duplicate root is fatal.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise GlossaryError(f"cannot parse glossary {path}: {exc}") from exc
    if not isinstance(data, list):
        raise GlossaryError(f"glossary {path} is not a JSON array")
    entries: list[GlossaryEntry] = []
    seen: set[str] = set()
    for item in data:
        if isinstance(item, str):
            item = {"root": item}
        if not isinstance(item, dict) or "root" not in item:
            raise GlossaryError(f"glossary {path}: entry without 'root': {item!r}")
        entry = make_entry(item["root"], item.get("surfaces", ()))
        key = entry.root.casefold()
        if key in seen:
            raise GlossaryError(f"duplicate glossary root: {entry.root!r}")
        seen.add(key)
        entries.append(entry)
    logger.info("loaded %d glossary roots from %s", len(entries), path.name)
    return entries


def save_glossary(path: str | Path, entries: Sequence[GlossaryEntry]) -> None:
    data = [{"root": e.root, "surfaces": sorted(e.surfaces)} for e in entries]
    Path(path).write_text(json.dumps(data, ensure_ascii=False, indent=1),
                          encoding="utf-8")


# --- presence scan -----------------------------------------------------


def surface_pattern(surface: str) -> re.Pattern:
    """Case-insensitive token-boundary pattern for one surface form.

    Boundaries are only asserted next to word characters so surfaces
    like ``#milk`` or ``(((`` stay matchable.
    """
    parts = [re.escape(p) for p in surface.split()]
    body = r"\s+".join(parts) if parts else re.escape(surface)
    left = r"(?<![A-Za-z0-9])" if surface[:1].isalnum() else ""
    right = r"(?![A-Za-z0-9])" if surface[-1:].isalnum() else ""
    return re.compile(left + body + right, re.IGNORECASE)


class _EntryMatcher:
    """Precompiled matcher for one glossary entry over raw post text."""

    def __init__(self, entry: GlossaryEntry):
        self.entry = entry
        self.patterns: list[tuple[str, re.Pattern]] = []
        for s in sorted(entry.surfaces):
            self.patterns.append((self._prefilter(s), surface_pattern(s)))
            if _EMOJIISH_RE.search(s):
                # emoji surfaces also match their alias-token spelling
                aliased = " ".join(alias_emoji(s).split())
                if aliased != s:
                    self.patterns.append((self._prefilter(aliased.casefold()),
                                          surface_pattern(aliased)))

    @staticmethod
    def _prefilter(surface: str) -> str:
        # cheap containment probe; whitespace runs are flexible in the
        # regex, so only a single word is a safe literal needle
        parts = surface.split()
        return max(parts, key=len) if parts else surface

    def matches(self, folded_text: str, raw_text: str) -> bool:
        for needle, pat in self.patterns:
            if needle in folded_text and pat.search(raw_text):
                return True
        return False


def find_present_roots(glossary: Sequence[GlossaryEntry],
                       posts: Iterable[Post]) -> set[str]:
    """Roots with at least one surface occurring in some post's raw text."""
    remaining = [_EntryMatcher(e) for e in glossary]
    found: set[str] = set()
    for post in posts:
        if not remaining:
            break
        folded = post.text.casefold()
        still = []
        for m in remaining:
            if m.matches(folded, post.text):
                found.add(m.entry.root)
            else:
                still.append(m)
        remaining = still
    return found


def posts_with_surfaces(entries: Sequence[GlossaryEntry],
                        posts: Iterable[Post]) -> list[str]:
    """Ids of posts whose raw text contains any surface of any entry."""
    matchers = [_EntryMatcher(e) for e in entries]
    hits: list[str] = []
    for post in posts:
        folded = post.text.casefold()
        if any(m.matches(folded, post.text) for m in matchers):
            hits.append(post.id)
    return hits


# --- stratified split --------------------------------------------------


@dataclass(frozen=True)
class SeedSplit:
    """Disjoint train (seed) / test root sets with their surfaces."""

    train_roots: tuple[GlossaryEntry, ...]
    test_roots: tuple[GlossaryEntry, ...]
    ratio: float
    rng_seed: int

    def train_surfaces(self) -> set[str]:
        out: set[str] = set()
        for e in self.train_roots:
            out |= e.surfaces
        return out


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def split_seeds(present: Sequence[GlossaryEntry], ratio: float,
                rng_seed: int) -> SeedSplit:
    """Stratified train/test split over root n-gram length.

    Per stratum the train share is round-half-up(ratio * n); if that
    leaves the whole train side empty, one entry is promoted from the
    largest stratum. Pure function of (sorted roots, ratio, rng_seed).
    """
    entries = sorted(set(present), key=lambda e: e.root.casefold())
    if not entries:
        raise GlossaryError("cannot split an empty present-root set")
    if not (0.0 < ratio < 1.0):
        raise GlossaryError(f"split ratio must be in (0, 1), got {ratio}")

    strata: dict[int, list[GlossaryEntry]] = {}
    for e in entries:
        strata.setdefault(e.ngram_len, []).append(e)

    train: list[GlossaryEntry] = []
    test: list[GlossaryEntry] = []
    shuffled: dict[int, list[GlossaryEntry]] = {}
    for length in sorted(strata):
        group = list(strata[length])
        rng = random.Random(f"{rng_seed}:{length}")
        rng.shuffle(group)
        shuffled[length] = group
        n_train = _round_half_up(ratio * len(group))
        train.extend(group[:n_train])
        test.extend(group[n_train:])

    if not train:
        # promote one entry from the largest stratum (ties: shortest n-gram)
        length = max(sorted(strata), key=lambda n: (len(strata[n]), -n))
        promoted = shuffled[length][0]
        train.append(promoted)
        test = [e for e in test if e is not promoted]

    key = lambda e: e.root.casefold()
    return SeedSplit(train_roots=tuple(sorted(train, key=key)),
                     test_roots=tuple(sorted(test, key=key)),
                     ratio=ratio, rng_seed=rng_seed)


def save_split(path: str | Path, split: SeedSplit,
               config_hash: str | None = None) -> None:
    data = {
        "train": [e.root for e in split.train_roots],
        "test": [e.root for e in split.test_roots],
        "ratio": split.ratio,
        "rng_seed": split.rng_seed,
        "surfaces": {e.root: sorted(e.surfaces)
                     for e in (*split.train_roots, *split.test_roots)},
    }
    if config_hash is not None:
        data["config_hash"] = config_hash
    Path(path).write_text(json.dumps(data, ensure_ascii=False, indent=1),
                          encoding="utf-8")


def load_split(path: str | Path) -> SeedSplit:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    surf = data.get("surfaces", {})
    mk = lambda r: make_entry(r, surf.get(r, ()))
    return SeedSplit(
        train_roots=tuple(mk(r) for r in data["train"]),
        test_roots=tuple(mk(r) for r in data["test"]),
        ratio=float(data["ratio"]),
        rng_seed=int(data["rng_seed"]),
    )
