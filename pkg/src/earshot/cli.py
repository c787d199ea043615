"""Operator surface: ingest -> split -> build -> run -> evaluate -> report.

One pipeline per ``run`` invocation; ``report`` merges run directories
into a comparison table. Config files are YAML; endpoint URLs may be
overridden through FETCH_*_URL environment variables only.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import yaml

from .baselines import epd_candidates, expand_seeds, mlm_candidates
from .corpus import Post, PreprocessConfig, ingest_corpus, preprocess
from .endpoints import (ChatClient, ClassifyClient, EndpointConfig,
                        FillMaskClient, MockFillMask, OracleChat,
                        OracleClassifier, resolve_url)
from .errors import ConfigError, EarshotError
from .evaluation import (DEFAULT_KS, format_report_row, load_report_json,
                         save_report_json, save_report_tsv, sweep_thresholds)
from .keywords import CandidateList, save_candidates
from .lexicon import (GlossaryEntry, find_present_roots, load_glossary,
                      save_split, split_seeds)
from .pipelines import EarshotConfig, run_direct, run_predict
from .staticvec import (fit_phraser, merge_phrases, save_embeddings,
                        train_static_embeddings)
from .vectorstore import EmbeddingProviderConfig, build_index, save_index

logger = logging.getLogger(__name__)

PIPELINES = ("w2v", "p2v-2", "p2v-3", "mlm", "epd",
             "earshot-direct", "earshot-predict")


@dataclass
class RunConfig:
    """Validated run description; raw dict kept for hashing."""

    scenario: str
    corpus: Path
    glossary: Path
    pipeline: str
    out_dir: Path
    split_ratio: float = 0.2
    split_seed: int = 0
    sweep: bool = False
    sweep_ks: tuple[int, ...] = ()
    mock_endpoints: bool = False
    preprocess: PreprocessConfig = field(default_factory=PreprocessConfig)
    embedding: dict = field(default_factory=dict)
    phraser: dict = field(default_factory=dict)
    expansion: dict = field(default_factory=dict)
    mlm: dict = field(default_factory=dict)
    epd: dict = field(default_factory=dict)
    earshot: dict = field(default_factory=dict)
    provider: dict = field(default_factory=dict)
    endpoints: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    def config_hash(self) -> str:
        # out_dir changes where artifacts land, not what the run computes
        hashed = {k: v for k, v in self.raw.items() if k != "out_dir"}
        blob = json.dumps(hashed, sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]


def glossary_hash(entries: Sequence[GlossaryEntry]) -> str:
    data = [[e.root, sorted(e.surfaces)] for e in
            sorted(entries, key=lambda e: e.root.casefold())]
    blob = json.dumps(data, sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]


def _need(raw: dict, key: str) -> object:
    if key not in raw or raw[key] in (None, ""):
        raise ConfigError(f"missing required config field '{key}'", field=key)
    return raw[key]


def load_run_config(path: str | Path, pipeline: str | None = None,
                    out: str | None = None, mock_endpoints: bool = False,
                    sweep: bool = False) -> RunConfig:
    """Parse + validate a YAML run config; CLI flags override the file."""
    cfg_path = Path(path)
    if not cfg_path.is_file():
        raise ConfigError(f"config file not found: {cfg_path}", field="config")
    try:
        raw = yaml.safe_load(cfg_path.read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}", field="config")
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a mapping", field="config")

    if pipeline:
        raw["pipeline"] = pipeline
    if out:
        raw["out_dir"] = out
    raw.setdefault("scenario", cfg_path.stem)
    raw["mock_endpoints"] = bool(mock_endpoints or raw.get("mock_endpoints"))
    raw["sweep"] = bool(sweep or raw.get("sweep"))

    base = cfg_path.parent
    resolve = lambda p: (base / p).resolve() if not Path(p).is_absolute() \
        else Path(p)

    corpus = resolve(str(_need(raw, "corpus")))
    if not corpus.is_file():
        raise ConfigError(f"corpus path does not exist: {corpus}",
                          field="corpus")
    glossary = resolve(str(_need(raw, "glossary")))
    if not glossary.is_file():
        raise ConfigError(f"glossary path does not exist: {glossary}",
                          field="glossary")
    pipe = str(_need(raw, "pipeline"))
    if pipe not in PIPELINES:
        raise ConfigError(
            f"unknown pipeline {pipe!r}; expected one of {PIPELINES}",
            field="pipeline")
    out_dir = resolve(str(_need(raw, "out_dir")))

    split = raw.get("split", {}) or {}
    ratio = float(split.get("ratio", 0.2))
    if not 0.0 < ratio < 1.0:
        raise ConfigError(f"split.ratio must be in (0, 1), got {ratio}",
                          field="split.ratio")

    pp = raw.get("preprocess", {}) or {}
    pre = PreprocessConfig(lemmatize=bool(pp.get("lemmatize", True)),
                           emoji_aliasing=bool(pp.get("emoji_aliasing", True)),
                           lowercase=bool(pp.get("lowercase", True)))

    ks = tuple(int(k) for k in raw.get("sweep_ks", ()) or ())
    if any(k < 1 for k in ks):
        raise ConfigError("sweep_ks entries must be >= 1", field="sweep_ks")

    return RunConfig(
        scenario=str(raw["scenario"]), corpus=corpus, glossary=glossary,
        pipeline=pipe, out_dir=out_dir, split_ratio=ratio,
        split_seed=int(split.get("rng_seed", 0)),
        sweep=raw["sweep"], sweep_ks=ks,
        mock_endpoints=raw["mock_endpoints"], preprocess=pre,
        embedding=dict(raw.get("embedding", {}) or {}),
        phraser=dict(raw.get("phraser", {}) or {}),
        expansion=dict(raw.get("expansion", {}) or {}),
        mlm=dict(raw.get("mlm", {}) or {}),
        epd=dict(raw.get("epd", {}) or {}),
        earshot=dict(raw.get("earshot", {}) or {}),
        provider=dict(raw.get("provider", {}) or {}),
        endpoints=dict(raw.get("endpoints", {}) or {}),
        raw=raw,
    )


# --- endpoint wiring -----------------------------------------------------
# Mock mode keeps runs deterministic and offline: chat/classify become
# glossary-term oracles, fill-mask a content-derived mock, embeddings the
# deterministic hash projection.


def _all_glossary_forms(entries: Sequence[GlossaryEntry]) -> list[str]:
    forms: set[str] = set()
    for e in entries:
        forms |= e.surfaces
    return sorted(forms)


def _endpoint_cfg(cfg: RunConfig, kind: str, key: str) -> EndpointConfig:
    url = resolve_url(kind, cfg.endpoints.get(key))
    if not url:
        raise ConfigError(
            f"pipeline {cfg.pipeline!r} needs endpoints.{key} "
            f"(or the matching FETCH_*_URL variable); pass --mock-endpoints "
            "for an offline run", field=f"endpoints.{key}")
    return EndpointConfig(url=url,
                          timeout=float(cfg.endpoints.get("timeout", 30.0)),
                          max_retries=int(cfg.endpoints.get("max_retries", 3)))


def _chat_endpoint(cfg: RunConfig, entries: Sequence[GlossaryEntry]):
    if cfg.mock_endpoints:
        return OracleChat(terms=_all_glossary_forms(entries))
    return ChatClient(_endpoint_cfg(cfg, "chat", "chat_url"))


def _classify_endpoint(cfg: RunConfig, entries: Sequence[GlossaryEntry]):
    if cfg.mock_endpoints:
        return OracleClassifier(
            terms=_all_glossary_forms(entries),
            positive_label=cfg.earshot.get("positive_label", "hate"))
    return ClassifyClient(_endpoint_cfg(cfg, "classify", "classify_url"))


def _fillmask_endpoint(cfg: RunConfig):
    if cfg.mock_endpoints:
        return MockFillMask()
    return FillMaskClient(_endpoint_cfg(cfg, "fill-mask", "fillmask_url"))


def _provider(cfg: RunConfig) -> EmbeddingProviderConfig:
    p = cfg.provider
    kind = "deterministic-mock" if cfg.mock_endpoints \
        else p.get("kind", "deterministic-mock")
    url = None if cfg.mock_endpoints \
        else resolve_url("embed", p.get("endpoint_url"))
    return EmbeddingProviderConfig(
        kind=kind, endpoint_url=url, dim=int(p.get("dim", 64)),
        batch_size=int(p.get("batch_size", 256)),
        seed=int(p.get("seed", 0)),
        timeout=float(p.get("timeout", 30.0)),
        max_retries=int(p.get("max_retries", 3)))


# --- pipeline drivers ------------------------------------------------------


def _train_model(cfg: RunConfig, tokens: list[list[str]], passes: int,
                 chash: str):
    sents = tokens
    if passes:
        ph = cfg.phraser
        phraser = fit_phraser(sents, min_count=int(ph.get("min_count", 5)),
                              threshold=float(ph.get("threshold", 10.0)),
                              passes=passes)
        sents = [list(s) for s in merge_phrases(sents, phraser)]
    e = cfg.embedding
    model = train_static_embeddings(
        sents, dim=int(e.get("dim", 100)), window=int(e.get("window", 5)),
        epochs=int(e.get("epochs", 10)),
        max_vocab=int(e.get("max_vocab", 500_000)),
        min_count=int(e.get("min_count", 5)),
        rng_seed=int(e.get("rng_seed", 0)),
        workers=int(e.get("workers", 1)))
    save_embeddings(cfg.out_dir / "embeddings.esvec", model,
                    config_hash=chash)
    return model


def _run_pipeline(cfg: RunConfig, posts: list[Post], split,
                  entries: Sequence[GlossaryEntry],
                  chash: str) -> CandidateList:
    seeds = sorted(split.train_surfaces())
    tokens = [p.tokens for p in posts]

    if cfg.pipeline in ("w2v", "p2v-2", "p2v-3"):
        passes = {"w2v": 0, "p2v-2": 1, "p2v-3": 2}[cfg.pipeline]
        model = _train_model(cfg, tokens, passes, chash)
        x = cfg.expansion
        trace = expand_seeds(model, seeds, k=int(x.get("k", 10)),
                             levels=int(x.get("levels", 10)))
        return trace.to_candidates()

    if cfg.pipeline == "mlm":
        m = cfg.mlm
        return mlm_candidates(
            posts, seeds, _fillmask_endpoint(cfg),
            sample_n=int(m.get("sample_n", 2000)), k=int(m.get("k", 100)),
            rng_seed=int(m.get("rng_seed", 0)),
            aggregate=m.get("aggregate", "global-sum"))

    if cfg.pipeline == "epd":
        model = _train_model(cfg, tokens, 0, chash)
        p = cfg.epd
        return epd_candidates(
            posts, seeds, _fillmask_endpoint(cfg), model,
            phrase_pool_size=int(p.get("phrase_pool_size", 1000)),
            sample_n=int(p.get("sample_n", 2000)), k=int(p.get("k", 100)),
            rng_seed=int(p.get("rng_seed", 0)))

    es = cfg.earshot
    ecfg = EarshotConfig(
        provider=_provider(cfg),
        neighbors_per_seed=int(es.get("neighbors_per_seed", 1)),
        filter_strategy=es.get("filter_strategy", "classifier"),
        keyword_method=es.get("keyword_method", "tfidf"),
        max_ngram=int(es.get("max_ngram", 1)), k=int(es.get("k", 50)),
        positive_label=es.get("positive_label", "hate"),
        max_tokens=int(es.get("max_tokens", 512)),
        temperature=float(es.get("temperature", 0.0)))
    index = build_index(posts, ecfg.provider)
    save_index(cfg.out_dir / "index.esidx", index, config_hash=chash)
    if cfg.pipeline == "earshot-direct":
        return run_direct(posts, split, ecfg, _chat_endpoint(cfg, entries),
                          index=index)
    if ecfg.filter_strategy == "llm-yes-no":
        endpoint = _chat_endpoint(cfg, entries)
    else:
        endpoint = _classify_endpoint(cfg, entries)
    return run_predict(posts, split, ecfg, endpoint, index=index)


def cmd_run(args: argparse.Namespace) -> int:
    cfg = load_run_config(args.config, pipeline=args.pipeline, out=args.out,
                          mock_endpoints=args.mock_endpoints,
                          sweep=args.sweep)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    chash = cfg.config_hash()

    posts = [preprocess(p, cfg.preprocess) for p in ingest_corpus(cfg.corpus)]
    entries = load_glossary(cfg.glossary)
    ghash = glossary_hash(entries)

    present = find_present_roots(entries, posts)
    present_entries = [e for e in entries if e.root in present]
    if not present_entries:
        raise EarshotError("no glossary root occurs in the corpus")
    split = split_seeds(present_entries, cfg.split_ratio, cfg.split_seed)
    save_split(cfg.out_dir / "split.json", split, config_hash=chash)
    logger.info("split: %d train / %d test roots",
                len(split.train_roots), len(split.test_roots))

    cl = _run_pipeline(cfg, posts, split, entries, chash)
    save_candidates(cfg.out_dir / "candidates.jsonl", cl, config_hash=chash)

    ks = (cfg.sweep_ks or DEFAULT_KS) if cfg.sweep else ()
    reports = sweep_thresholds(cl, split.test_roots, present, ks=ks,
                               train_entries=split.train_roots)
    save_report_json(cfg.out_dir / "report.json", reports,
                     model=cfg.pipeline, config_hash=chash,
                     glossary_hash=ghash)
    rows = [format_report_row(cfg.pipeline, r, ranked=cl.ranked)
            for r in reports]
    save_report_tsv(cfg.out_dir / "report.tsv", rows)
    (cfg.out_dir / "run_meta.json").write_text(json.dumps({
        "scenario": cfg.scenario, "pipeline": cfg.pipeline,
        "config_hash": chash, "glossary_hash": ghash,
        "n_posts": len(posts), "n_candidates": len(cl),
        "ranked": cl.ranked,
    }, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    best = next(r for r in reports if r.best)
    print("Model\tThreshold\tPrec\tDPR\tF0.5")
    print(format_report_row(cfg.pipeline, best, ranked=cl.ranked))
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    rows: list[tuple[str, str, str, str, float]] = []
    ghashes: dict[str, str] = {}
    for d in args.run_dirs:
        run = Path(d)
        report = run / "report.json"
        meta_path = run / "run_meta.json"
        if not report.is_file() or not meta_path.is_file():
            logger.warning("report: skipping %s (no report.json)", run)
            continue
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        data = load_report_json(report)
        if not data:
            logger.warning("report: skipping %s (empty report)", run)
            continue
        ghashes[str(run)] = meta["glossary_hash"]
        best = max(data, key=lambda r: (r.get("best", False), r["f_half"]))
        thr = str(best["k"]) if meta.get("ranked", True) else "-"
        rows.append((meta["scenario"], meta["pipeline"],
                     f"{best['precision']:.2f}\t{best['dpr']:.2f}"
                     f"\t{best['f_half']:.2f}", thr, best["f_half"]))

    if len(set(ghashes.values())) > 1:
        print("report: refusing to merge runs with mismatched glossary "
              f"hashes: {sorted(set(ghashes.values()))}", file=sys.stderr)
        return 2

    print("Scenario\tModel\tThreshold\tPrec\tDPR\tF0.5")
    if not rows:
        return 0
    best_f = {}
    for scenario, pipe, _body, _thr, f in rows:
        best_f[scenario] = max(best_f.get(scenario, -1.0), f)
    for scenario, pipe, body, thr, f in sorted(
            rows, key=lambda r: (r[0], r[1])):
        name = f"**{pipe}**" if f == best_f[scenario] else pipe
        print(f"{scenario}\t{name}\t{thr}\t{body}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="earshot", description="dog-whistle lexicon discovery runs")
    sub = ap.add_subparsers(dest="cmd", required=True)

    run = sub.add_parser("run", help="execute one pipeline run")
    run.add_argument("--config", required=True, help="YAML run config")
    run.add_argument("--pipeline", choices=PIPELINES,
                     help="override the config's pipeline")
    run.add_argument("--out", help="override the config's output directory")
    run.add_argument("--mock-endpoints", action="store_true",
                     help="deterministic offline endpoint stand-ins")
    run.add_argument("--sweep", action="store_true",
                     help="evaluate at nested cutoffs instead of full size")
    run.set_defaults(func=cmd_run)

    rep = sub.add_parser("report", help="merge run dirs into one table")
    rep.add_argument("run_dirs", nargs="+", help="run output directories")
    rep.set_defaults(func=cmd_report)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error ({exc.field}): {exc}", file=sys.stderr)
        return 2
    except EarshotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
