"""Real model backends. Imports of transformers/torch stay inside the
constructors so the app and its tests never pay for them; any load
failure surfaces as ShimError and the server refuses to start.
"""

from __future__ import annotations

import logging
from typing import Sequence

from .config import Backends, ShimConfig, ShimError

logger = logging.getLogger(__name__)

MASK = "[MASK]"  # protocol-level sentinel, translated per tokenizer


class HFEmbedder:
    def __init__(self, model_id: str, device: str = "cpu"):
        from sentence_transformers import SentenceTransformer
        self.model_id = model_id
        self._model = SentenceTransformer(model_id, device=device)
        self.dim = int(self._model.get_sentence_embedding_dimension())

    def embed(self, texts: Sequence[str]) -> list[list[float]]:
        vecs = self._model.encode(list(texts), normalize_embeddings=True,
                                  convert_to_numpy=True)
        return [[float(x) for x in row] for row in vecs]


class HFMaskFiller:
    MASK = MASK

    def __init__(self, model_id: str, device: str = "cpu"):
        from transformers import AutoModelForMaskedLM, AutoTokenizer
        self.model_id = model_id
        self._tok = AutoTokenizer.from_pretrained(model_id)
        self._model = AutoModelForMaskedLM.from_pretrained(model_id)
        self._model.to(device)
        self._model.eval()
        self._device = device

    def _logits(self, body: str):
        import torch
        enc = self._tok(body, return_tensors="pt", truncation=True)
        enc = {k: v.to(self._device) for k, v in enc.items()}
        with torch.no_grad():
            logits = self._model(**enc).logits[0]
        return enc["input_ids"][0], logits

    def fill(self, text: str, top_k: int) -> list[tuple[str, float]]:
        if MASK not in text:
            raise ShimError(f"fill text carries no {MASK} sentinel")
        body = text.replace(MASK, self._tok.mask_token)
        ids, logits = self._logits(body)
        rows = (ids == self._tok.mask_token_id).nonzero()
        if len(rows) == 0:
            raise ShimError("mask token lost in tokenization")
        probs = logits[rows[0, 0]].softmax(-1)
        top = probs.topk(min(top_k, probs.shape[-1]))
        out = []
        for p, i in zip(top.values.tolist(), top.indices.tolist()):
            token = self._tok.decode([i]).strip()
            if token:
                out.append((token, float(p)))
        return out

    def score(self, text: str, positions: Sequence[int]) -> list[float]:
        # pseudo log-likelihood: mask one whitespace word at a time and
        # read the log-probability of its first subtoken
        words = text.split()
        out: list[float] = []
        for pos in positions:
            if not 0 <= pos < len(words):
                raise ShimError(f"score position {pos} out of range")
            target_ids = self._tok(words[pos],
                                   add_special_tokens=False)["input_ids"]
            masked = list(words)
            masked[pos] = self._tok.mask_token
            ids, logits = self._logits(" ".join(masked))
            rows = (ids == self._tok.mask_token_id).nonzero()
            logprobs = logits[rows[0, 0]].log_softmax(-1)
            out.append(float(logprobs[target_ids[0]]))
        return out


class HFChat:
    def __init__(self, model_id: str, device: str = "cpu"):
        from transformers import pipeline
        self.model_id = model_id
        self._pipe = pipeline("text-generation", model=model_id,
                              device=device)

    def complete(self, prompt: str, max_tokens: int,
                 temperature: float) -> str:
        # temperature is ignored on purpose: greedy decoding only
        del temperature
        out = self._pipe(prompt, max_new_tokens=max_tokens, do_sample=False,
                         return_full_text=False)
        return out[0]["generated_text"]


class HFClassifier:
    def __init__(self, model_id: str, device: str = "cpu"):
        from transformers import pipeline
        self.model_id = model_id
        self._pipe = pipeline("text-classification", model=model_id,
                              device=device)

    def classify(self, texts: Sequence[str]) -> tuple[list[str], list[float]]:
        results = self._pipe(list(texts), truncation=True)
        return ([r["label"] for r in results],
                [float(r["score"]) for r in results])


def load_backends(cfg: ShimConfig) -> Backends:
    """Build every configured backend; one failure aborts startup."""
    loaders = (
        ("embed", cfg.embed_model, HFEmbedder),
        ("fillmask", cfg.fillmask_model, HFMaskFiller),
        ("chat", cfg.chat_model, HFChat),
        ("classify", cfg.classify_model, HFClassifier),
    )
    backends = Backends()
    for slot, model_id, cls in loaders:
        if model_id is None:
            continue
        try:
            setattr(backends, slot, cls(model_id, device=cfg.device))
        except Exception as exc:
            raise ShimError(f"failed to load {slot} model "
                            f"{model_id!r}: {exc}") from exc
        logger.info("loaded %s backend: %s", slot, model_id)
    if not backends.enabled():
        raise ShimError("no model configured; nothing to serve")
    return backends
