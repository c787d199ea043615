"""Jit-compiled skip-gram negative-sampling inner loop.

Kept in its own module so the numba compile (cached on first use) only
happens when training is actually requested. The kernel updates weights
in place; callers own initialization and vocabulary handling.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def train_sgns(flat, offsets, s_lo, s_hi, w_in, w_out, noise_cdf,
               window, negatives, epochs, alpha0, min_alpha, seed):
    np.random.seed(seed)
    dim = w_in.shape[1]
    n_words = np.int64(0)
    for s in range(s_lo, s_hi):
        n_words += offsets[s + 1] - offsets[s]
    total = float(n_words * epochs)
    done = 0
    grad = np.empty(dim, dtype=np.float32)
    for _epoch in range(epochs):
        for s in range(s_lo, s_hi):
            start = offsets[s]
            end = offsets[s + 1]
            for pos in range(start, end):
                center = flat[pos]
                alpha = alpha0 * (1.0 - done / total)
                if alpha < min_alpha:
                    alpha = min_alpha
                b = 1 + np.random.randint(window)  # dynamic window: 1..window
                lo = max(start, pos - b)
                hi = min(end, pos + b + 1)
                for cpos in range(lo, hi):
                    if cpos == pos:
                        continue
                    ctx = flat[cpos]
                    for d in range(dim):
                        grad[d] = 0.0
                    for neg in range(negatives + 1):
                        if neg == 0:
                            target = ctx
                            label = 1.0
                        else:
                            r = np.random.random()
                            target = np.searchsorted(noise_cdf, r)
                            if target == ctx:
                                continue
                            label = 0.0
                        f = 0.0
                        for d in range(dim):
                            f += w_in[center, d] * w_out[target, d]
                        if f > 6.0:
                            sig = 1.0
                        elif f < -6.0:
                            sig = 0.0
                        else:
                            sig = 1.0 / (1.0 + np.exp(-f))
                        g = np.float32((label - sig) * alpha)
                        for d in range(dim):
                            grad[d] += g * w_out[target, d]
                            w_out[target, d] += g * w_in[center, d]
                    for d in range(dim):
                        w_in[center, d] += grad[d]
                done += 1
