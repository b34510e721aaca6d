"""Word-embedding training, persistence, and vector-space queries.

Training runs on a compiled kernel when the extension built, with a
pure-numpy fallback selected automatically at import time (see
:func:`default_kernel`).
"""

from simaspect.embedding.model import (
    EmbeddingModel,
    cosine,
    load_model,
    nearest,
    nearest_to_vector,
    save_model,
)
from simaspect.embedding.trainer import (
    TrainConfig,
    available_kernels,
    build_vocab,
    default_kernel,
    train_cbow,
)

__all__ = [
    "EmbeddingModel",
    "TrainConfig",
    "available_kernels",
    "build_vocab",
    "cosine",
    "default_kernel",
    "load_model",
    "nearest",
    "nearest_to_vector",
    "save_model",
    "train_cbow",
]
