# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled CBOW training step (see _kernel_py for the reference semantics)."""

import numpy as np

KERNEL_NAME = "compiled"

ctypedef unsigned long long u64

cdef u64 _LCG_MULT = 25214903917ULL
cdef u64 _LCG_INC = 11ULL

cdef int _EXP_TABLE_SIZE = 1000
cdef double _MAX_EXP = 6.0


cdef inline int _bisect_right(const unsigned int[::1] cum, unsigned int r) noexcept nogil:
    cdef int lo = 0
    cdef int hi = cum.shape[0]
    cdef int mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if cum[mid] <= r:
            lo = mid + 1
        else:
            hi = mid
    return lo


def train_epoch(
    float[:, ::1] syn0,
    float[:, ::1] syn1neg,
    const int[::1] indices,
    const long long[::1] offsets,
    const unsigned int[::1] cum_table,
    const double[::1] keep_scores,
    bint subsample,
    int window,
    int negative,
    double alpha0,
    double min_alpha,
    long long total_words,
    long long words_done,
    u64 next_random,
    const double[::1] exp_table,
):
    """One pass over the encoded corpus; returns (words_done, next_random)."""
    cdef int dim = syn0.shape[1]
    cdef u64 domain = <u64> cum_table[cum_table.shape[0] - 1]
    cdef Py_ssize_t n_sentences = offsets.shape[0] - 1
    cdef double exp_scale = _EXP_TABLE_SIZE / _MAX_EXP / 2.0

    cdef Py_ssize_t s, t
    cdef long long start, end, max_len = 0
    for s in range(n_sentences):
        if offsets[s + 1] - offsets[s] > max_len:
            max_len = offsets[s + 1] - offsets[s]

    kept_arr = np.empty(max(max_len, 1), dtype=np.int32)
    neu1_arr = np.empty(dim, dtype=np.float32)
    neu1e_arr = np.empty(dim, dtype=np.float32)
    cdef int[::1] kept = kept_arr
    cdef float[::1] neu1 = neu1_arr
    cdef float[::1] neu1e = neu1e_arr

    cdef double alpha, g
    cdef float f, g32, inv
    cdef int m, pos, lo, hi, cw, a, j, d, center, target, u, b
    cdef unsigned int r

    for s in range(n_sentences):
        start = offsets[s]
        end = offsets[s + 1]
        if start == end:
            continue
        alpha = alpha0 * (1.0 - (<double> words_done) / (<double> total_words))
        if alpha < min_alpha:
            alpha = min_alpha
        m = 0
        if subsample:
            for t in range(start, end):
                u = indices[t]
                words_done += 1
                next_random = next_random * _LCG_MULT + _LCG_INC
                if keep_scores[u] < ((next_random & 0xFFFFULL) / 65536.0):
                    continue
                kept[m] = u
                m += 1
        else:
            for t in range(start, end):
                kept[m] = indices[t]
                m += 1
            words_done += end - start

        for pos in range(m):
            center = kept[pos]
            next_random = next_random * _LCG_MULT + _LCG_INC
            b = <int> (next_random % <u64> window)
            lo = pos - window + b
            if lo < 0:
                lo = 0
            hi = pos + window + 1 - b
            if hi > m:
                hi = m
            cw = hi - lo - 1
            if cw <= 0:
                continue
            for j in range(dim):
                neu1[j] = 0.0
                neu1e[j] = 0.0
            for a in range(lo, hi):
                if a == pos:
                    continue
                u = kept[a]
                for j in range(dim):
                    neu1[j] += syn0[u, j]
            inv = <float> (1.0 / cw)
            for j in range(dim):
                neu1[j] *= inv
            for d in range(negative + 1):
                if d == 0:
                    target = center
                    g = 1.0
                else:
                    next_random = next_random * _LCG_MULT + _LCG_INC
                    r = <unsigned int> ((next_random >> 16) % domain)
                    target = _bisect_right(cum_table, r)
                    if target == center:
                        continue
                    g = 0.0
                f = 0.0
                for j in range(dim):
                    f += neu1[j] * syn1neg[target, j]
                if f >= _MAX_EXP:
                    g = (g - 1.0) * alpha
                elif f <= -_MAX_EXP:
                    g = g * alpha
                else:
                    g = (g - exp_table[<int> ((f + _MAX_EXP) * exp_scale)]) * alpha
                g32 = <float> g
                for j in range(dim):
                    neu1e[j] += g32 * syn1neg[target, j]
                for j in range(dim):
                    syn1neg[target, j] += g32 * neu1[j]
            for a in range(lo, hi):
                if a == pos:
                    continue
                u = kept[a]
                for j in range(dim):
                    syn0[u, j] += neu1e[j]
    return words_done, next_random
