"""Similarity-emulated attention scoring.

Each token of a sentence is scored against each reference group with
cosine similarity (directly, or blended with the sentence context), and
the scores are turned into attention weights with a numerically stable
softmax.  Out-of-vocabulary tokens carry similarity NaN and attention
exactly 0 and are excluded from the softmax denominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from simaspect._io import open_write
from simaspect.corpus import Sentence
from simaspect.embedding.model import EmbeddingModel, nearest_to_vector
from simaspect.errors import (
    AllTokensOOV,
    ConfigError,
    EmptyGroupInVocabulary,
    ZeroNormVector,
)

MODE_DIRECT = "direct"
MODE_CONTEXTUAL = "contextual"

COMBINE_CENTROID = "centroid"
COMBINE_MAX = "max"
COMBINE_MEAN = "mean"
_COMBINES = (COMBINE_CENTROID, COMBINE_MAX, COMBINE_MEAN)


@dataclass(frozen=True)
class ReferenceGroup:
    """A category name with its reference words (the only supervision-like
    signal in the pipeline).  Words must be normalized with the same
    preprocessing configuration as the corpus."""

    category: str
    words: tuple[str, ...]

    def __init__(self, category: str, words: Sequence[str]):
        if not words:
            raise ConfigError(f"reference group {category!r} has no words")
        object.__setattr__(self, "category", category)
        object.__setattr__(self, "words", tuple(words))


@dataclass(frozen=True)
class SimilarityMode:
    """Scoring mode: ``direct`` compares a token to the reference
    representation alone; ``contextual`` compares it to a blend of
    ``context_weight`` * reference + (1 - context_weight) * sentence
    centroid.  With context_weight 1 the two modes coincide exactly."""

    kind: str = MODE_DIRECT
    context_weight: float = 0.5

    def __post_init__(self):
        if self.kind not in (MODE_DIRECT, MODE_CONTEXTUAL):
            raise ConfigError(f"unknown similarity mode {self.kind!r}")
        if not 0.0 <= self.context_weight <= 1.0:
            raise ConfigError("context_weight must be in [0, 1]")


@dataclass(frozen=True)
class CategoryAttention:
    """Per-token similarity and attention arrays for one category.

    All three arrays align with the sentence's tokens; OOV positions hold
    similarity NaN and attention 0.
    """

    similarities: np.ndarray
    attentions: np.ndarray
    oov_mask: np.ndarray


@dataclass(frozen=True)
class AnnotatedSentence:
    sentence: Sentence
    per_category: dict[str, CategoryAttention]
    unclassifiable: bool = False

    @property
    def sentence_id(self) -> str:
        return self.sentence.id


def attention_weights(similarities, oov_mask) -> np.ndarray:
    """Softmax over the non-OOV similarity values; OOV positions get 0.

    Uses max-subtraction for numerical stability; the output sums to 1
    over non-OOV positions and preserves the similarity ordering.
    """
    sims = np.asarray(similarities, dtype=np.float64)
    mask = np.asarray(oov_mask, dtype=bool)
    if sims.shape != mask.shape or sims.ndim != 1:
        raise ValueError("similarities and oov_mask must be aligned 1-d sequences")
    valid = ~mask
    if not valid.any():
        raise AllTokensOOV("every token is out of vocabulary")
    out = np.zeros(sims.shape[0], dtype=np.float64)
    vals = sims[valid]
    exps = np.exp(vals - vals.max())
    out[valid] = exps / exps.sum()
    return out


def _group_vectors(model: EmbeddingModel, group: ReferenceGroup) -> np.ndarray:
    rows = [model.index(w) for w in group.words if w in model]
    if not rows:
        raise EmptyGroupInVocabulary(
            f"no reference word of group {group.category!r} is in the vocabulary"
        )
    vecs = model.vectors[rows].astype(np.float64)
    norms = np.linalg.norm(vecs, axis=1)
    if np.any(norms == 0.0):
        raise ZeroNormVector(f"group {group.category!r} contains a zero-norm vector")
    return vecs


def _reference_vectors(
    group_vecs: np.ndarray,
    mode: SimilarityMode,
    sentence_centroid: np.ndarray | None,
    combine: str,
) -> np.ndarray:
    """The reference vectors tokens are compared against: a single centroid
    row for ``centroid`` combination, one row per group word otherwise."""
    refs = group_vecs.mean(axis=0, keepdims=True) if combine == COMBINE_CENTROID else group_vecs
    if mode.kind == MODE_CONTEXTUAL:
        if sentence_centroid is None:
            raise ValueError("contextual mode requires a sentence centroid")
        lam = mode.context_weight
        refs = lam * refs + (1.0 - lam) * np.asarray(sentence_centroid, dtype=np.float64)
    return refs


def _similarity_matrix(token_units: np.ndarray, refs: np.ndarray, combine: str) -> np.ndarray:
    norms = np.linalg.norm(refs, axis=1)
    if np.any(norms == 0.0):
        raise ZeroNormVector("reference vector has zero norm")
    sims = token_units @ (refs / norms[:, None]).T
    if combine == COMBINE_MAX:
        return sims.max(axis=1)
    if combine == COMBINE_MEAN:
        return sims.mean(axis=1)
    return sims[:, 0]


def group_similarity(
    model: EmbeddingModel,
    word: str,
    group: ReferenceGroup,
    mode: SimilarityMode,
    *,
    sentence_centroid=None,
    combine: str = COMBINE_CENTROID,
) -> float:
    """Similarity of one word to a reference group, in [-1, 1].

    With ``centroid`` combination this is the cosine between the word
    vector and the mean of the in-vocabulary group vectors, so a one-word
    group degenerates to the plain word-word cosine; ``max`` and ``mean``
    combine per-word cosines instead.
    """
    if combine not in _COMBINES:
        raise ConfigError(f"unknown group_combine {combine!r}; expected one of {_COMBINES}")
    idx = model.index(word)
    if model.norms()[idx] == 0.0:
        raise ZeroNormVector(f"vector for {word!r} has zero norm")
    unit = model.unit_rows()[idx][None, :]
    refs = _reference_vectors(_group_vectors(model, group), mode, sentence_centroid, combine)
    return float(_similarity_matrix(unit, refs, combine)[0])


def sentence_centroid(model: EmbeddingModel, tokens: Sequence[str]) -> np.ndarray | None:
    """Mean of the in-vocabulary token vectors, or None if there are none."""
    rows = [model.index(t) for t in tokens if t in model]
    if not rows:
        return None
    return model.vectors[rows].astype(np.float64).mean(axis=0)


def annotate(
    model: EmbeddingModel,
    sentence: Sentence,
    groups: Sequence[ReferenceGroup],
    mode: SimilarityMode,
    *,
    combine: str = COMBINE_CENTROID,
) -> AnnotatedSentence:
    """Score every token of the sentence against every reference group.

    Sentences whose tokens are all out of vocabulary (or that have no
    tokens at all) come back flagged unclassifiable instead of raising,
    so batch annotation never aborts on one bad sentence.
    """
    if not groups:
        raise ValueError("at least one reference group is required")
    if combine not in _COMBINES:
        raise ConfigError(f"unknown group_combine {combine!r}; expected one of {_COMBINES}")
    n = len(sentence.tokens)
    token_idx = np.array(
        [model.index(t) if t in model else -1 for t in sentence.tokens], dtype=np.int64
    )
    valid = token_idx >= 0
    if valid.any():
        norms = model.norms()
        if np.any(norms[token_idx[valid]] == 0.0):
            raise ZeroNormVector("a token vector has zero norm")
    oov_mask = ~valid

    if not valid.any():
        empty = CategoryAttention(
            similarities=np.full(n, np.nan),
            attentions=np.zeros(n),
            oov_mask=oov_mask.copy(),
        )
        return AnnotatedSentence(
            sentence=sentence,
            per_category={g.category: empty for g in groups},
            unclassifiable=True,
        )

    # score unique rows once and scatter back, so repeated tokens carry
    # bitwise-identical similarities
    unique_idx, inverse = np.unique(token_idx[valid], return_inverse=True)
    token_units = model.unit_rows()[unique_idx]
    centroid = None
    if mode.kind == MODE_CONTEXTUAL:
        centroid = model.vectors[token_idx[valid]].astype(np.float64).mean(axis=0)

    per_category: dict[str, CategoryAttention] = {}
    for group in groups:
        refs = _reference_vectors(_group_vectors(model, group), mode, centroid, combine)
        sims_valid = _similarity_matrix(token_units, refs, combine)[inverse]
        sims = np.full(n, np.nan)
        sims[valid] = sims_valid
        per_category[group.category] = CategoryAttention(
            similarities=sims,
            attentions=attention_weights(np.where(valid, sims, 0.0), oov_mask),
            oov_mask=oov_mask.copy(),
        )
    return AnnotatedSentence(sentence=sentence, per_category=per_category, unclassifiable=False)


def annotate_batch(
    model: EmbeddingModel,
    sentences: Iterable[Sentence],
    groups: Sequence[ReferenceGroup],
    mode: SimilarityMode,
    *,
    combine: str = COMBINE_CENTROID,
) -> list[AnnotatedSentence]:
    """Annotate sentences in input order."""
    return [annotate(model, s, groups, mode, combine=combine) for s in sentences]


def expand_references(model: EmbeddingModel, seeds: ReferenceGroup, k: int) -> ReferenceGroup:
    """Grow a seed group with the k nearest neighbors of the seed centroid.

    Seeds themselves are excluded from the expansion; ordering follows the
    nearest-neighbor contract (descending cosine, lexicographic ties).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return seeds
    centroid = _group_vectors(model, seeds).mean(axis=0)
    neighbors = nearest_to_vector(model, centroid, k, exclude=set(seeds.words))
    return ReferenceGroup(seeds.category, list(seeds.words) + [w for w, _ in neighbors])


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def write_attention_file(
    path: str | Path,
    annotated: Iterable[AnnotatedSentence],
    group_order: Sequence[str],
) -> int:
    """Write the attention-valued test data: one TSV row per
    (sentence, category) holding ``token:similarity:attention`` triplets.

    OOV tokens are written with similarity ``nan`` and attention 0.
    Returns the number of sentences written.
    """
    n = 0
    with open_write(path) as fh:
        for ann in annotated:
            for category in group_order:
                ca = ann.per_category[category]
                cells = ",".join(
                    f"{tok}:{_fmt(sim)}:{_fmt(att)}"
                    for tok, sim, att in zip(
                        ann.sentence.tokens, ca.similarities, ca.attentions
                    )
                )
                fh.write(f"{ann.sentence_id}\t{category}\t{cells}\n")
            n += 1
    return n


def read_attention_file(path: str | Path) -> list[AnnotatedSentence]:
    """Reconstruct annotated sentences from the attention TSV."""
    rows: dict[str, dict[str, CategoryAttention]] = {}
    tokens_by_id: dict[str, list[str]] = {}
    order: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            sid, category, cells = line.split("\t")
            toks: list[str] = []
            sims: list[float] = []
            atts: list[float] = []
            if cells:
                for cell in cells.split(","):
                    tok, sim, att = cell.rsplit(":", 2)
                    toks.append(tok)
                    sims.append(float(sim))
                    atts.append(float(att))
            if sid not in rows:
                rows[sid] = {}
                tokens_by_id[sid] = toks
                order.append(sid)
            rows[sid][category] = CategoryAttention(
                similarities=np.array(sims, dtype=np.float64),
                attentions=np.array(atts, dtype=np.float64),
                oov_mask=np.isnan(np.array(sims, dtype=np.float64)),
            )
    out = []
    for sid in order:
        per_category = rows[sid]
        any_ca = next(iter(per_category.values()))
        unclassifiable = bool(any_ca.oov_mask.all()) if any_ca.oov_mask.size else True
        out.append(
            AnnotatedSentence(
                sentence=Sentence(id=sid, original_text="", tokens=tokens_by_id[sid]),
                per_category=per_category,
                unclassifiable=unclassifiable,
            )
        )
    return out


def read_groups_file(path: str | Path) -> list[ReferenceGroup]:
    """Read reference groups from a TSV of ``category<TAB>word word ...``."""
    groups = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            category, _, words = line.partition("\t")
            groups.append(ReferenceGroup(category, words.split()))
    return groups


def write_groups_file(path: str | Path, groups: Sequence[ReferenceGroup]) -> None:
    with open_write(path) as fh:
        for g in groups:
            fh.write(f"{g.category}\t{' '.join(g.words)}\n")
