"""FastAPI application implementing the four wire protocols.

Contract points enforced here rather than in backends:
  * oversized batches answer 413 and echo the configured limit;
  * fill mode requires the [MASK] sentinel, else 400;
  * chat always decodes greedily (temperature pinned to 0) under a
    response-length cap, so repeated runs are comparable;
  * each endpoint holds a lock around its backend call because most
    model backends are not thread-safe.
"""

from __future__ import annotations

import argparse
import logging
import sys
import threading
from typing import Sequence

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .backends import MASK, load_backends
from .config import Backends, ShimConfig, ShimError

logger = logging.getLogger(__name__)


class EmbeddingsRequest(BaseModel):
    texts: list[str] = Field(min_length=1)


class FillMaskRequest(BaseModel):
    text: str = Field(min_length=1)
    top_k: int = Field(default=100, ge=1)
    score_positions: list[int] | None = None


class ChatRequest(BaseModel):
    prompt: str = Field(min_length=1)
    max_tokens: int = Field(default=512, ge=1)
    temperature: float = 0.0


class ClassifyRequest(BaseModel):
    texts: list[str] = Field(min_length=1)


def _batch_guard(n: int, limit: int) -> JSONResponse | None:
    if n > limit:
        return JSONResponse(
            status_code=413,
            content={"detail": f"batch of {n} texts exceeds the limit",
                     "limit": limit})
    return None


def create_app(cfg: ShimConfig, backends: Backends) -> FastAPI:
    app = FastAPI(title="modelshim", version="0.1.0")
    locks = {name: threading.Lock()
             for name in ("embeddings", "fill-mask", "chat", "classify")}

    def _require(slot, name: str):
        if slot is None:
            raise HTTPException(status_code=404,
                                detail=f"{name} endpoint disabled: "
                                       "no model configured")
        return slot

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "endpoints": backends.enabled(),
                "models": backends.model_ids(),
                "dim": backends.embed.dim if backends.embed else None}

    @app.post("/v1/embeddings")
    def embeddings(req: EmbeddingsRequest):
        backend = _require(backends.embed, "embeddings")
        guard = _batch_guard(len(req.texts), cfg.max_batch)
        if guard:
            return guard
        with locks["embeddings"]:
            vectors = backend.embed(req.texts)
        if any(len(v) != backend.dim for v in vectors):
            raise HTTPException(status_code=500,
                                detail="backend returned a wrong dimension")
        return {"vectors": vectors, "dim": backend.dim}

    @app.post("/v1/fill-mask")
    def fill_mask(req: FillMaskRequest):
        backend = _require(backends.fillmask, "fill-mask")
        if req.score_positions is not None:
            with locks["fill-mask"]:
                logprobs = backend.score(req.text, req.score_positions)
            return {"logprobs": [float(x) for x in logprobs]}
        if MASK not in req.text:
            raise HTTPException(status_code=400,
                                detail=f"text carries no {MASK} sentinel")
        with locks["fill-mask"]:
            fills = backend.fill(req.text, req.top_k)
        return {"fills": [{"token": t, "prob": float(p)} for t, p in fills]}

    @app.post("/v1/chat")
    def chat(req: ChatRequest):
        backend = _require(backends.chat, "chat")
        max_tokens = min(req.max_tokens, cfg.max_response_tokens)
        with locks["chat"]:
            text = backend.complete(req.prompt, max_tokens=max_tokens,
                                    temperature=0.0)
        return {"text": text}

    @app.post("/v1/classify")
    def classify(req: ClassifyRequest):
        backend = _require(backends.classify, "classify")
        guard = _batch_guard(len(req.texts), cfg.max_batch)
        if guard:
            return guard
        with locks["classify"]:
            labels, scores = backend.classify(req.texts)
        return {"labels": list(labels), "scores": [float(s) for s in scores]}

    return app


def serve(cfg: ShimConfig) -> None:
    """Load the configured models and serve; load failure refuses start."""
    import uvicorn
    backends = load_backends(cfg)
    app = create_app(cfg, backends)
    logger.info("serving %s on %s:%d", backends.enabled(), cfg.host, cfg.port)
    uvicorn.run(app, host=cfg.host, port=cfg.port)


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    ap = argparse.ArgumentParser(prog="modelshim",
                                 description="serve local models over the "
                                             "four JSON protocols")
    ap.add_argument("--embed-model")
    ap.add_argument("--fillmask-model")
    ap.add_argument("--chat-model")
    ap.add_argument("--classify-model")
    ap.add_argument("--device", default="cpu")
    ap.add_argument("--host", default="127.0.0.1")
    ap.add_argument("--port", type=int, default=8707)
    ap.add_argument("--max-batch", type=int, default=128)
    ap.add_argument("--max-response-tokens", type=int, default=512)
    args = ap.parse_args(argv)
    try:
        cfg = ShimConfig(embed_model=args.embed_model,
                         fillmask_model=args.fillmask_model,
                         chat_model=args.chat_model,
                         classify_model=args.classify_model,
                         device=args.device, host=args.host, port=args.port,
                         max_batch=args.max_batch,
                         max_response_tokens=args.max_response_tokens)
        serve(cfg)
    except ShimError as exc:
        print(f"refusing to start: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
