"""Shared test utilities: synthetic data generators and independent
brute-force oracles.

The oracles deliberately avoid the library's vectorized code paths: they
work on plain Python floats with explicit loops so they can serve as an
independent re-computation to check the pipeline against.
"""

from __future__ import annotations

import math
import random

import numpy as np

from simaspect import EmbeddingModel, Sentence

TOPIC_A = ("apple", "pear", "fruit")
TOPIC_B = ("bolt", "nut", "wrench")


def two_topic_corpus(n_sentences: int = 1000, seed: int = 20240501) -> list[list[str]]:
    """Fixed-seed synthetic corpus: alternating sentences mix the words of
    one of two disjoint topics."""
    rng = random.Random(seed)
    topics = [list(TOPIC_A), list(TOPIC_B)]
    return [
        [rng.choice(topics[i % 2]) for _ in range(rng.randint(5, 9))]
        for i in range(n_sentences)
    ]


def random_model(vocab_size: int, dim: int, seed: int = 0) -> EmbeddingModel:
    rng = np.random.default_rng(seed)
    words = [f"w{i:04d}" for i in range(vocab_size)]
    vectors = rng.normal(size=(vocab_size, dim)).astype(np.float32)
    return EmbeddingModel(words, vectors)


def random_sentences(
    words: list[str], n: int, seed: int = 0, min_len: int = 4, max_len: int = 12,
    oov_rate: float = 0.0,
) -> list[Sentence]:
    rng = random.Random(seed)
    out = []
    for i in range(n):
        tokens = []
        for _ in range(rng.randint(min_len, max_len)):
            if oov_rate and rng.random() < oov_rate:
                tokens.append(f"oov{rng.randint(0, 999)}")
            else:
                tokens.append(rng.choice(words))
        out.append(Sentence(id=f"s{i}", original_text="", tokens=tokens))
    return out


# ---------------------------------------------------------------------------
# brute-force oracles


def oracle_cosine(u, v) -> float:
    dot = sum(float(a) * float(b) for a, b in zip(u, v))
    nu = math.sqrt(sum(float(a) ** 2 for a in u))
    nv = math.sqrt(sum(float(b) ** 2 for b in v))
    return dot / (nu * nv)


def oracle_centroid(vectors) -> list[float]:
    n = len(vectors)
    dim = len(vectors[0])
    return [sum(float(v[j]) for v in vectors) / n for j in range(dim)]


def oracle_softmax(values) -> list[float]:
    m = max(values)
    exps = [math.exp(v - m) for v in values]
    total = sum(exps)
    return [e / total for e in exps]


def oracle_classify(
    vectors: dict[str, list[float]],
    tokens: list[str],
    groups: dict[str, list[str]],
    agg: str,
    group_order: list[str],
):
    """Recompute annotate -> aggregate -> argmax from raw vectors.

    Returns (category or None, per-category scores dict).
    """
    in_vocab = [t for t in tokens if t in vectors]
    if not in_vocab:
        return None, {}
    scores = {}
    for category in group_order:
        centroid = oracle_centroid([vectors[w] for w in groups[category] if w in vectors])
        sims = [oracle_cosine(vectors[t], centroid) for t in in_vocab]
        scores[category] = max(sims) if agg == "max" else sum(sims) / len(sims)
    best = None
    for category in group_order:
        if best is None or scores[category] > scores[best]:
            best = category
    return best, scores


def oracle_confusion(
    predictions: dict[str, str | None],
    gold: dict[str, str],
    categories: list[str],
) -> dict[str, dict[str, int]]:
    """Independent confusion tally; predictions map sentence id to a
    category or None (unclassifiable)."""
    counts = {c: {"tp": 0, "fp": 0, "fn": 0} for c in categories}
    for sid, gold_label in gold.items():
        pred = predictions[sid]
        if pred is None:
            counts[gold_label]["fn"] += 1
        elif pred == gold_label:
            counts[gold_label]["tp"] += 1
        else:
            counts[gold_label]["fn"] += 1
            counts[pred]["fp"] += 1
    return counts


def oracle_prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f
