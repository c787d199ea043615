"""Scoring: surface matching, precision, DPR, F0.5, threshold sweeps.

DPR normalizes recall by the test roots actually present in the corpus.
Precision counts unique predicted terms (duplicate flooding cannot help).
A prediction matching surfaces of two roots credits both roots for DPR
but counts once in the precision numerator. Train seeds and their
surfaces are excluded from both numerator and denominator: they are
inputs, not discoveries.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .keywords import CandidateList
from .lexicon import GlossaryEntry
from .errors import EarshotError

logger = logging.getLogger(__name__)

DEFAULT_KS = (50, 100, 200, 400, 800, 1600, 3200, 6400, 12800, 25600)


@dataclass
class EvalReport:
    k: int
    precision: float  # percent
    dpr: float        # percent
    f_half: float     # percent
    matched_roots: set[str] = field(default_factory=set)
    n_predictions: int = 0
    best: bool = False

    def to_dict(self) -> dict:
        return {"k": self.k, "precision": self.precision, "dpr": self.dpr,
                "f_half": self.f_half,
                "matched_roots": sorted(self.matched_roots),
                "n_predictions": self.n_predictions, "best": self.best}


def normalize_term(term: str) -> str:
    return " ".join(term.casefold().split())


def match_prediction(term: str, entry: GlossaryEntry) -> bool:
    """Exact match of the normalized term against any surface or the root."""
    return normalize_term(term) in entry.all_forms()


def f_beta_half(precision: float, dpr: float) -> float:
    """F0.5 = 1.25 * P * DPR / (0.25 * P + DPR); zero when both are zero."""
    if precision == 0 and dpr == 0:
        return 0.0
    return 1.25 * precision * dpr / (0.25 * precision + dpr)


def _unique_top(predictions: CandidateList | Sequence[str],
                k: int | None) -> list[str]:
    terms = predictions.terms() if isinstance(predictions, CandidateList) \
        else list(predictions)
    if k is not None:
        terms = terms[:k]
    seen: set[str] = set()
    out: list[str] = []
    for t in terms:
        key = normalize_term(t)
        if key and key not in seen:
            seen.add(key)
            out.append(key)
    return out


def compute_metrics(predictions: CandidateList | Sequence[str],
                    test_entries: Sequence[GlossaryEntry],
                    present_roots: Iterable[str], k: int,
                    train_entries: Sequence[GlossaryEntry] = ()) -> EvalReport:
    """Precision / DPR / F0.5 over the top-k unique predictions."""
    if k < 1:
        raise EarshotError(f"metrics cutoff k must be >= 1, got {k}")
    present = set(present_roots)
    eligible = {e.root for e in test_entries} & present

    terms = _unique_top(predictions, k)
    terms = [t for t in terms
             if not any(match_prediction(t, e) for e in train_entries)]

    matched_terms = 0
    matched_roots: set[str] = set()
    for t in terms:
        hit = False
        for entry in test_entries:
            if match_prediction(t, entry):
                hit = True
                if entry.root in eligible:
                    matched_roots.add(entry.root)
        if hit:
            matched_terms += 1

    precision = 100.0 * matched_terms / len(terms) if terms else 0.0
    dpr = 100.0 * len(matched_roots) / len(eligible) if eligible else 0.0
    return EvalReport(k=k, precision=precision, dpr=dpr,
                      f_half=f_beta_half(precision, dpr),
                      matched_roots=matched_roots, n_predictions=len(terms))


def sweep_thresholds(predictions: CandidateList,
                     test_entries: Sequence[GlossaryEntry],
                     present_roots: Iterable[str],
                     ks: Sequence[int] = DEFAULT_KS,
                     train_entries: Sequence[GlossaryEntry] = ()) -> list[EvalReport]:
    """One report per cutoff k <= |predictions| plus a final report at the
    full size; unranked lists get a single full-size report. The best
    report by F0.5 (smallest k on ties) is flagged."""
    n = len(predictions.terms()) if isinstance(predictions, CandidateList) \
        else len(predictions)
    ranked = predictions.ranked if isinstance(predictions, CandidateList) else True
    if n == 0:
        return [EvalReport(k=0, precision=0.0, dpr=0.0, f_half=0.0, best=True)]
    if not ranked:
        cuts = [n]
    else:
        cuts = sorted({k for k in ks if k <= n} | {n})
    reports = [compute_metrics(predictions, test_entries, present_roots, k,
                               train_entries) for k in cuts]
    best = max(range(len(reports)), key=lambda i: (reports[i].f_half, -i))
    reports[best].best = True
    return reports


# --- report files ---------------------------------------------------------
# JSON: array of report objects, each embedding model/config/glossary ids.
# TSV: Model, Threshold, Prec, DPR, F0.5 with two-decimal display.


def save_report_json(path: str | Path, reports: Sequence[EvalReport],
                     model: str, config_hash: str,
                     glossary_hash: str) -> None:
    rows = []
    for r in reports:
        row = r.to_dict()
        row.update({"model": model, "config_hash": config_hash,
                    "glossary_hash": glossary_hash})
        rows.append(row)
    Path(path).write_text(json.dumps(rows, indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


def load_report_json(path: str | Path) -> list[dict]:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def format_report_row(model: str, report: EvalReport,
                      ranked: bool = True) -> str:
    threshold = str(report.k) if ranked else "-"
    return (f"{model}\t{threshold}\t{report.precision:.2f}"
            f"\t{report.dpr:.2f}\t{report.f_half:.2f}")


def save_report_tsv(path: str | Path, rows: Sequence[str]) -> None:
    header = "Model\tThreshold\tPrec\tDPR\tF0.5"
    Path(path).write_text("\n".join([header, *rows]) + "\n", encoding="utf-8")
