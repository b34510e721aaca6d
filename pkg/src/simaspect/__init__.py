"""Unsupervised aspect and category extraction driven by word-vector similarity.

The pipeline: filter a raw review corpus by domain keywords, train CBOW
word embeddings on it, score test sentences against reference-word groups
with cosine similarity, soften the scores into attention weights, aggregate
them into per-sentence category decisions, and report quality and runtime
metrics.
"""

from simaspect.attention import (
    AnnotatedSentence,
    ReferenceGroup,
    SimilarityMode,
    annotate,
    attention_weights,
    expand_references,
    group_similarity,
)
from simaspect.classify import (
    CategoryAssignment,
    assign_category,
    extract_aspects,
    sentence_score,
)
from simaspect.corpus import (
    PreprocessConfig,
    RawDocument,
    Sentence,
    filter_corpus,
    normalize,
    split_sentences,
    tokenize,
)
from simaspect.embedding import (
    EmbeddingModel,
    TrainConfig,
    cosine,
    load_model,
    nearest,
    save_model,
    train_cbow,
)
from simaspect.evaluation import (
    MetricRow,
    confusion_counts,
    macro_average,
    precision_recall_f1,
    runtime_report,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotatedSentence",
    "CategoryAssignment",
    "EmbeddingModel",
    "MetricRow",
    "PreprocessConfig",
    "RawDocument",
    "ReferenceGroup",
    "Sentence",
    "SimilarityMode",
    "TrainConfig",
    "annotate",
    "assign_category",
    "attention_weights",
    "confusion_counts",
    "cosine",
    "expand_references",
    "extract_aspects",
    "filter_corpus",
    "group_similarity",
    "load_model",
    "macro_average",
    "nearest",
    "normalize",
    "precision_recall_f1",
    "runtime_report",
    "save_model",
    "sentence_score",
    "split_sentences",
    "tokenize",
    "train_cbow",
]
