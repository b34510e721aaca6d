"""Embedding model container, text-format persistence, and vector queries.

The model is immutable after construction; vector lookups, cosine, and
nearest-neighbor queries are safe to run from many threads concurrently.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from simaspect._io import open_write
from simaspect.errors import MalformedModelFile, OutOfVocabulary, ZeroNormVector


class EmbeddingModel:
    """A vocabulary with one dense vector per word.

    ``counts`` carries the training-time frequency of each word; models
    loaded from the text format (which stores no counts) have ``counts``
    set to None.
    """

    def __init__(self, words, vectors, counts=None):
        vectors = np.ascontiguousarray(vectors, dtype=np.float32)
        if vectors.ndim != 2:
            raise ValueError("vectors must be a 2-d matrix")
        if len(words) != vectors.shape[0]:
            raise ValueError(
                f"vocabulary size {len(words)} != vector rows {vectors.shape[0]}"
            )
        if not np.all(np.isfinite(vectors)):
            raise ValueError("vectors must be finite")
        self.words: list[str] = list(words)
        self._index = {w: i for i, w in enumerate(self.words)}
        if len(self._index) != len(self.words):
            raise ValueError("duplicate words in vocabulary")
        vectors.setflags(write=False)
        self.vectors = vectors
        self.counts = None if counts is None else np.asarray(counts, dtype=np.int64)
        self._unit: np.ndarray | None = None
        self._norms: np.ndarray | None = None

    @property
    def dimensions(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self._index

    def index(self, word: str) -> int:
        try:
            return self._index[word]
        except KeyError:
            raise OutOfVocabulary(word) from None

    def vector(self, word: str) -> np.ndarray:
        """The stored (read-only) row for an in-vocabulary word."""
        return self.vectors[self.index(word)]

    def unit_rows(self) -> np.ndarray:
        """Float64 unit-normalized vector matrix, built lazily and cached.

        Zero-norm rows are left as zeros here; callers that touch such a
        row must check :meth:`norms` and raise ZeroNormVector.
        """
        if self._unit is None:
            v = self.vectors.astype(np.float64)
            norms = np.linalg.norm(v, axis=1)
            safe = np.where(norms == 0.0, 1.0, norms)
            self._norms = norms
            self._unit = v / safe[:, None]
        return self._unit

    def norms(self) -> np.ndarray:
        self.unit_rows()
        return self._norms


def cosine(u, v) -> float:
    """Cosine similarity of two equal-length vectors, in [-1, 1]."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape or u.ndim != 1:
        raise ValueError(f"shape mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ZeroNormVector("cosine similarity is undefined for a zero-norm vector")
    return float(np.dot(u, v) / (nu * nv))


def nearest_to_vector(model: EmbeddingModel, query, k: int, exclude=()) -> list[tuple[str, float]]:
    """Words ranked by cosine to ``query``, ties broken lexicographically."""
    if k < 0:
        raise ValueError("k must be >= 0")
    query = np.asarray(query, dtype=np.float64)
    nq = np.linalg.norm(query)
    if nq == 0.0:
        raise ZeroNormVector("cosine similarity is undefined for a zero-norm vector")
    sims = model.unit_rows() @ (query / nq)
    excluded = set(exclude)
    candidates = [
        (w, float(sims[i]))
        for i, w in enumerate(model.words)
        if w not in excluded and model.norms()[i] != 0.0
    ]
    candidates.sort(key=lambda ws: (-ws[1], ws[0]))
    return candidates[:k]


def nearest(model: EmbeddingModel, word: str, k: int) -> list[tuple[str, float]]:
    """The k nearest in-vocabulary neighbors of ``word``, excluding itself.

    Results are sorted by descending cosine with lexicographic tie-breaks
    and truncated to min(k, len(model) - 1).
    """
    return nearest_to_vector(model, model.vector(word), k, exclude={word})


def _fmt(value: np.float32) -> str:
    # shortest decimal that round-trips the float32 exactly
    return np.format_float_positional(value, unique=True, trim="0")


def save_model(model: EmbeddingModel, path: str | Path) -> None:
    """Write the model in the text format: header ``<size> <dims>``, then
    one ``word v1 ... vd`` line per word."""
    with open_write(path) as fh:
        fh.write(f"{len(model)} {model.dimensions}\n")
        for word, row in zip(model.words, model.vectors):
            if any(ch.isspace() for ch in word):
                raise ValueError(f"cannot serialize word with whitespace: {word!r}")
            fh.write(word + " " + " ".join(_fmt(v) for v in row) + "\n")


def load_model(path: str | Path) -> EmbeddingModel:
    """Load a model from the text format, validating the declared shape."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise MalformedModelFile(f"{path}: malformed header {header!r}")
        try:
            size, dims = int(header[0]), int(header[1])
        except ValueError:
            raise MalformedModelFile(f"{path}: malformed header {header!r}") from None
        if size < 0 or dims < 1:
            raise MalformedModelFile(f"{path}: invalid header {size} {dims}")
        words: list[str] = []
        vectors = np.empty((size, dims), dtype=np.float32)
        row = 0
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if row >= size:
                raise MalformedModelFile(f"{path}: more than {size} rows")
            parts = line.split(" ")
            if len(parts) != dims + 1:
                raise MalformedModelFile(
                    f"{path}: row {row} has {len(parts) - 1} components, expected {dims}"
                )
            words.append(parts[0])
            try:
                vectors[row] = [float(p) for p in parts[1:]]
            except ValueError:
                raise MalformedModelFile(f"{path}: row {row} has a non-numeric component") from None
            row += 1
        if row != size:
            raise MalformedModelFile(f"{path}: header declares {size} rows, found {row}")
    try:
        return EmbeddingModel(words, vectors)
    except ValueError as exc:
        raise MalformedModelFile(f"{path}: {exc}") from None
