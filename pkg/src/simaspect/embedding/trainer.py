"""CBOW negative-sampling trainer for domain-specific word embeddings.

The hot inner loop lives in a compiled extension (``_kernel``) with a
pure-numpy fallback (``_kernel_py``) selected at import time.  Both
kernels implement the identical update order and draw from the identical
deterministic RNG sequence, so a fixed seed gives bit-reproducible output
per kernel in single-threaded mode; across kernels only floating-point
rounding may differ.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from simaspect.embedding.model import EmbeddingModel
from simaspect.errors import ConfigError, EmptyVocabulary

try:
    from simaspect.embedding import _kernel as _compiled_kernel
except ImportError:
    _compiled_kernel = None
from simaspect.embedding import _kernel_py as _python_kernel

EXP_TABLE_SIZE = 1000
MAX_EXP = 6.0

# the linear-congruential generator the kernels share
LCG_MULT = 25214903917
LCG_INC = 11
_MASK64 = (1 << 64) - 1

# cumulative unigram table resolution for negative-sampling draws
_TABLE_DOMAIN = 2**31 - 1


def _exp_table() -> np.ndarray:
    x = (np.arange(EXP_TABLE_SIZE, dtype=np.float64) / EXP_TABLE_SIZE * 2.0 - 1.0) * MAX_EXP
    e = np.exp(x)
    return e / (e + 1.0)


_EXP_TABLE = _exp_table()


@dataclass(frozen=True)
class TrainConfig:
    """Training hyperparameters; the defaults match the settings the
    pipeline was tuned with (CBOW, window 5, 200 dimensions, 5 negative
    samples, 15 epochs)."""

    dimensions: int = 200
    window: int = 5
    negative_samples: int = 5
    epochs: int = 15
    min_count: int = 5
    initial_learning_rate: float = 0.025
    seed: int = 1
    # 0 disables frequent-word subsampling; the conventional value when
    # enabled is 1e-3.  Results shift when this is changed.
    subsample_threshold: float = 0.0

    def __post_init__(self):
        if self.dimensions < 1:
            raise ConfigError("dimensions must be >= 1")
        if self.window < 1:
            raise ConfigError("window must be >= 1")
        if self.negative_samples < 0:
            raise ConfigError("negative_samples must be >= 0")
        if self.epochs < 1:
            raise ConfigError("epochs must be >= 1")
        if self.min_count < 1:
            raise ConfigError("min_count must be >= 1")
        if self.initial_learning_rate <= 0:
            raise ConfigError("initial_learning_rate must be > 0")
        if self.subsample_threshold < 0:
            raise ConfigError("subsample_threshold must be >= 0")


def available_kernels() -> tuple[str, ...]:
    return ("compiled", "python") if _compiled_kernel is not None else ("python",)


def default_kernel() -> str:
    return available_kernels()[0]


def _resolve_kernel(kernel: str):
    if kernel == "auto":
        kernel = default_kernel()
    if kernel == "compiled":
        if _compiled_kernel is None:
            raise ConfigError("the compiled kernel is not available in this installation")
        return _compiled_kernel
    if kernel == "python":
        return _python_kernel
    raise ConfigError(f"unknown kernel {kernel!r}; expected auto, compiled, or python")


def build_vocab(sentences: Iterable[list[str]], min_count: int) -> tuple[list[str], np.ndarray]:
    """Count words and keep those with frequency >= min_count.

    Vocabulary order is frequency-descending with lexicographic
    tie-breaks, which fixes the word indices the RNG-driven training
    depends on.
    """
    counts = Counter()
    for toks in sentences:
        counts.update(toks)
    kept = sorted(
        ((w, c) for w, c in counts.items() if c >= min_count),
        key=lambda wc: (-wc[1], wc[0]),
    )
    if not kept:
        raise EmptyVocabulary(
            f"no word reached min_count={min_count} "
            f"(corpus has {len(counts)} distinct words)"
        )
    words = [w for w, _ in kept]
    freqs = np.array([c for _, c in kept], dtype=np.int64)
    return words, freqs


def _encode(sentences: list[list[str]], index: dict[str, int]) -> tuple[np.ndarray, np.ndarray]:
    ids: list[int] = []
    offsets = [0]
    for toks in sentences:
        ids.extend(index[t] for t in toks if t in index)
        offsets.append(len(ids))
    return np.array(ids, dtype=np.int32), np.array(offsets, dtype=np.int64)


def _unigram_cum_table(freqs: np.ndarray) -> np.ndarray:
    """Cumulative distribution over count^0.75, scaled to a fixed integer
    domain; negative samples are drawn by binary search into it."""
    pow_freqs = freqs.astype(np.float64) ** 0.75
    cum = np.cumsum(pow_freqs)
    cum = np.round(cum / cum[-1] * _TABLE_DOMAIN).astype(np.uint32)
    cum[-1] = _TABLE_DOMAIN
    return cum


def _lcg_sequence(seed: int, n: int) -> np.ndarray:
    """The first n successor states of the shared LCG, vectorized.

    x_k = a^k * x_0 + c * (a^(k-1) + ... + a + 1), all mod 2^64, computed
    with wrapping uint64 arithmetic.
    """
    a = np.uint64(LCG_MULT)
    with np.errstate(over="ignore"):
        a_pows = np.empty(n, dtype=np.uint64)
        np.cumprod(np.full(n, a, dtype=np.uint64), out=a_pows)
        geo = np.empty(n, dtype=np.uint64)  # a^(k-1)+...+1 for k = 1..n
        geo[0] = 1
        np.cumsum(a_pows, out=geo)
        geo[1:] = geo[:-1] + np.uint64(1)
        geo[0] = 1
        states = a_pows * np.uint64(seed & _MASK64) + np.uint64(LCG_INC) * geo
    return states


def _init_vectors(vocab_size: int, dim: int, seed: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Seed-deterministic uniform init in [-0.5/dim, 0.5/dim) for the input
    matrix; the output matrix starts at zero."""
    n = vocab_size * dim
    states = _lcg_sequence(seed, n)
    low16 = (states & np.uint64(0xFFFF)).astype(np.float64)
    syn0 = ((low16 / 65536.0 - 0.5) / dim).astype(np.float32).reshape(vocab_size, dim)
    syn1neg = np.zeros((vocab_size, dim), dtype=np.float32)
    return syn0, syn1neg, int(states[-1])


def _subsample_scores(freqs: np.ndarray, threshold: float) -> np.ndarray:
    """Per-word keep scores for frequent-word subsampling (compared against
    a uniform draw in the kernels); all ones when disabled."""
    if threshold <= 0:
        return np.ones(len(freqs), dtype=np.float64)
    total = float(freqs.sum())
    ratio = threshold * total / freqs.astype(np.float64)
    return np.sqrt(ratio) + ratio


def train_cbow(
    corpus: Iterable[list[str]],
    cfg: TrainConfig,
    *,
    kernel: str = "auto",
    progress: Callable[[int, float], None] | None = None,
) -> EmbeddingModel:
    """Train CBOW embeddings with negative sampling over token lists.

    ``corpus`` may be any iterable of token lists; it is materialized
    because training makes ``cfg.epochs`` passes.  ``progress``, when
    given, is called after each epoch with (epoch, fraction_done).
    """
    kern = _resolve_kernel(kernel)
    sentences = corpus if isinstance(corpus, list) else list(corpus)
    words, freqs = build_vocab(sentences, cfg.min_count)
    index = {w: i for i, w in enumerate(words)}
    indices, offsets = _encode(sentences, index)
    cum_table = _unigram_cum_table(freqs)
    keep_scores = _subsample_scores(freqs, cfg.subsample_threshold)
    syn0, syn1neg, next_random = _init_vectors(len(words), cfg.dimensions, cfg.seed)

    total_words = int(indices.shape[0]) * cfg.epochs
    if total_words == 0:
        # vocabulary exists but nothing to train on (cannot happen when
        # min_count filtering passed); return the untouched init
        return EmbeddingModel(words, syn0, counts=freqs)
    min_alpha = cfg.initial_learning_rate * 1e-4
    words_done = 0
    for epoch in range(cfg.epochs):
        words_done, next_random = kern.train_epoch(
            syn0,
            syn1neg,
            indices,
            offsets,
            cum_table,
            keep_scores,
            cfg.subsample_threshold > 0,
            cfg.window,
            cfg.negative_samples,
            cfg.initial_learning_rate,
            min_alpha,
            total_words,
            words_done,
            next_random,
            _EXP_TABLE,
        )
        if progress is not None:
            progress(epoch, words_done / total_words)
    return EmbeddingModel(words, syn0, counts=freqs)
