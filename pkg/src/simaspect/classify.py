"""Sentence-level category attribution and aspect-lexicon extraction.

Aggregates per-token similarity scores into one score per category
(mean by default so every relevant word contributes; max is available for
single-strongest-word behavior), picks the argmax category, and builds a
per-category ranking of the tokens that won the attention argmax.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from simaspect._io import open_write
from simaspect.attention import AnnotatedSentence
from simaspect.errors import (
    ConfigError,
    UnclassifiableSentence,
    UnknownCategory,
)

AGG_MAX = "max"
AGG_MEAN = "mean"
_AGGREGATIONS = (AGG_MAX, AGG_MEAN)

WEIGHT_ATTENTION = "attention"
WEIGHT_FREQUENCY = "frequency"
_WEIGHTINGS = (WEIGHT_ATTENTION, WEIGHT_FREQUENCY)

UNCLASSIFIABLE_LABEL = "__unclassifiable__"


@dataclass(frozen=True)
class CategoryAssignment:
    """A sentence's category decision with the full per-category score map
    kept for auditing.  ``category`` is None iff ``unclassifiable``."""

    sentence_id: str
    category: str | None
    score: float
    per_category_scores: dict[str, float]
    unclassifiable: bool = False


def _check_agg(agg: str) -> None:
    if agg not in _AGGREGATIONS:
        raise ConfigError(f"unknown aggregation {agg!r}; expected one of {_AGGREGATIONS}")


def sentence_score(annotated: AnnotatedSentence, category: str, agg: str) -> float:
    """Aggregate a sentence's similarities for one category.

    ``max`` keeps only the strongest token; ``mean`` averages all non-OOV
    tokens.
    """
    _check_agg(agg)
    if annotated.unclassifiable:
        raise UnclassifiableSentence(
            f"sentence {annotated.sentence_id!r} has no in-vocabulary tokens"
        )
    try:
        ca = annotated.per_category[category]
    except KeyError:
        raise UnknownCategory(f"category {category!r} not in annotation") from None
    vals = ca.similarities[~ca.oov_mask]
    return float(vals.max() if agg == AGG_MAX else vals.mean())


def assign_category(
    annotated: AnnotatedSentence,
    agg: str,
    group_order: Sequence[str],
) -> CategoryAssignment:
    """Pick the argmax category; exact ties go to the earliest category in
    ``group_order``.  All-OOV sentences come back unclassifiable."""
    _check_agg(agg)
    if not annotated.per_category:
        raise ValueError("annotation carries no categories")
    if annotated.unclassifiable:
        return CategoryAssignment(
            sentence_id=annotated.sentence_id,
            category=None,
            score=math.nan,
            per_category_scores={},
            unclassifiable=True,
        )
    scores = {c: sentence_score(annotated, c, agg) for c in group_order}
    best = None
    for category in group_order:
        if best is None or scores[category] > scores[best]:
            best = category
    return CategoryAssignment(
        sentence_id=annotated.sentence_id,
        category=best,
        score=scores[best],
        per_category_scores=scores,
    )


def extract_aspects(
    annotated_corpus: Iterable[AnnotatedSentence],
    assignments: Iterable[CategoryAssignment],
    top_n: int,
    *,
    weighting: str = WEIGHT_ATTENTION,
) -> dict[str, list[tuple[str, float]]]:
    """Build a per-category aspect lexicon from attention argmax winners.

    Each classifiable sentence credits its highest-attention token (for
    the assigned category) with that token's attention mass, or with 1
    under ``frequency`` weighting.  Words are ranked per category by total
    credit, descending, ties lexicographic, truncated to ``top_n``.
    """
    if weighting not in _WEIGHTINGS:
        raise ConfigError(f"unknown weighting {weighting!r}; expected one of {_WEIGHTINGS}")
    if top_n < 0:
        raise ValueError("top_n must be >= 0")
    credit: dict[str, dict[str, float]] = {}
    for ann, assignment in zip(annotated_corpus, assignments, strict=True):
        if ann.sentence_id != assignment.sentence_id:
            raise ValueError(
                f"streams misaligned: {ann.sentence_id!r} vs {assignment.sentence_id!r}"
            )
        for category in ann.per_category:
            credit.setdefault(category, {})
        if assignment.unclassifiable:
            continue
        ca = ann.per_category[assignment.category]
        idx = int(np.argmax(ca.attentions))
        word = ann.sentence.tokens[idx]
        amount = float(ca.attentions[idx]) if weighting == WEIGHT_ATTENTION else 1.0
        bucket = credit[assignment.category]
        bucket[word] = bucket.get(word, 0.0) + amount
    return {
        category: sorted(words.items(), key=lambda wv: (-wv[1], wv[0]))[:top_n]
        for category, words in credit.items()
    }


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def write_category_file(
    path: str | Path,
    assignments: Iterable[CategoryAssignment],
    group_order: Sequence[str],
) -> int:
    """Write categorized sentences as TSV rows of
    ``sentence_id  category  score  cat=score;...``; unclassifiable
    sentences carry the ``__unclassifiable__`` label and empty scores."""
    n = 0
    with open_write(path) as fh:
        for a in assignments:
            if a.unclassifiable:
                fh.write(f"{a.sentence_id}\t{UNCLASSIFIABLE_LABEL}\tnan\t\n")
            else:
                detail = ";".join(
                    f"{c}={_fmt(a.per_category_scores[c])}" for c in group_order
                )
                fh.write(f"{a.sentence_id}\t{a.category}\t{_fmt(a.score)}\t{detail}\n")
            n += 1
    return n


def read_category_file(path: str | Path) -> list[CategoryAssignment]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            sid, category, score, detail = line.split("\t")
            if category == UNCLASSIFIABLE_LABEL:
                out.append(
                    CategoryAssignment(sid, None, math.nan, {}, unclassifiable=True)
                )
                continue
            scores = {}
            for cell in detail.split(";"):
                if cell:
                    c, _, v = cell.partition("=")
                    scores[c] = float(v)
            out.append(CategoryAssignment(sid, category, float(score), scores))
    return out


def write_aspect_lexicon(path: str | Path, lexicon: dict[str, list[tuple[str, float]]]) -> None:
    """Write the lexicon as TSV rows of ``category  rank  word  weight``."""
    with open_write(path) as fh:
        for category in lexicon:
            for rank, (word, weight) in enumerate(lexicon[category], start=1):
                fh.write(f"{category}\t{rank}\t{word}\t{_fmt(weight)}\n")


def read_aspect_lexicon(path: str | Path) -> dict[str, list[tuple[str, float]]]:
    lexicon: dict[str, list[tuple[str, float]]] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            category, _rank, word, weight = line.split("\t")
            lexicon.setdefault(category, []).append((word, float(weight)))
    return lexicon
