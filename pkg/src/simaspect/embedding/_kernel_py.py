"""Pure-numpy CBOW training step, the fallback when the compiled kernel
is unavailable.

Mirrors the compiled kernel exactly: same RNG sequence, same update
order (negatives are applied sequentially, so repeated draws of one
target see each other's updates).  Only floating-point rounding may
differ between the two.
"""

from __future__ import annotations

import numpy as np

KERNEL_NAME = "python"

_LCG_MULT = 25214903917
_LCG_INC = 11
_MASK64 = (1 << 64) - 1

_EXP_TABLE_SIZE = 1000
_MAX_EXP = 6.0
_EXP_SCALE = _EXP_TABLE_SIZE / _MAX_EXP / 2.0


def train_epoch(
    syn0,
    syn1neg,
    indices,
    offsets,
    cum_table,
    keep_scores,
    subsample,
    window,
    negative,
    alpha0,
    min_alpha,
    total_words,
    words_done,
    next_random,
    exp_table,
):
    """One pass over the encoded corpus; returns (words_done, next_random)."""
    dim = syn0.shape[1]
    domain = int(cum_table[-1])
    n_sentences = offsets.shape[0] - 1

    for s in range(n_sentences):
        start, end = int(offsets[s]), int(offsets[s + 1])
        if start == end:
            continue
        alpha = alpha0 * (1.0 - words_done / total_words)
        if alpha < min_alpha:
            alpha = min_alpha
        if subsample:
            kept_list = []
            for t in range(start, end):
                w = int(indices[t])
                words_done += 1
                next_random = (next_random * _LCG_MULT + _LCG_INC) & _MASK64
                if keep_scores[w] < ((next_random & 0xFFFF) / 65536.0):
                    continue
                kept_list.append(w)
            kept = np.array(kept_list, dtype=np.int32)
        else:
            kept = indices[start:end]
            words_done += end - start
        m = kept.shape[0]

        for pos in range(m):
            center = int(kept[pos])
            next_random = (next_random * _LCG_MULT + _LCG_INC) & _MASK64
            b = int(next_random % window)
            lo = max(0, pos - window + b)
            hi = min(m, pos + window + 1 - b)
            cw = hi - lo - 1
            if cw <= 0:
                continue
            ctx = np.concatenate((kept[lo:pos], kept[pos + 1:hi]))
            neu1 = syn0[ctx].sum(axis=0, dtype=np.float32) * np.float32(1.0 / cw)
            neu1e = np.zeros(dim, dtype=np.float32)
            for d in range(negative + 1):
                if d == 0:
                    target = center
                    label = 1.0
                else:
                    next_random = (next_random * _LCG_MULT + _LCG_INC) & _MASK64
                    r = (next_random >> 16) % domain
                    target = int(np.searchsorted(cum_table, r, side="right"))
                    if target == center:
                        continue
                    label = 0.0
                row = syn1neg[target]
                f = float(neu1 @ row)
                if f >= _MAX_EXP:
                    g = (label - 1.0) * alpha
                elif f <= -_MAX_EXP:
                    g = label * alpha
                else:
                    g = (label - exp_table[int((f + _MAX_EXP) * _EXP_SCALE)]) * alpha
                g32 = np.float32(g)
                neu1e += g32 * row
                row += g32 * neu1
            for u in ctx:
                syn0[u] += neu1e
    return words_done, next_random
