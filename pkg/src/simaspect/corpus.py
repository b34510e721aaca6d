"""Corpus ingestion and preprocessing.

Covers sentence splitting, tokenization, normalization (lowercasing,
punctuation stripping, stopword removal, suffix-stripping stemming,
minimum-length filtering) and whole-token keyword filtering of a raw
document stream.  All operations are pure functions over their inputs and
safe to call concurrently.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator

from simaspect._io import open_write
from simaspect.errors import ConfigError
from simaspect.stemming import stem

STEMMER_NONE = "none"
STEMMER_SUFFIX = "suffix_stripping"
_STEMMERS = (STEMMER_NONE, STEMMER_SUFFIX)


@dataclass(frozen=True)
class RawDocument:
    """One free-text input document (typically a single review)."""

    id: str
    text: str


@dataclass
class Sentence:
    """A sentence with its normalized tokens and optional gold label.

    ``tokens`` is empty until :func:`prepare_sentence` fills it; sentences
    whose tokens remain empty after preprocessing are routed to an
    unclassifiable bucket downstream, never silently dropped.
    """

    id: str
    original_text: str
    tokens: list[str] = field(default_factory=list)
    gold_category: str | None = None


@functools.cache
def default_stopwords() -> frozenset[str]:
    """The stopword list shipped with the package (standard English)."""
    text = resources.files("simaspect.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


def read_stopword_file(path: str | Path) -> frozenset[str]:
    """Read a one-token-per-line stopword file."""
    with open(path, encoding="utf-8") as fh:
        return frozenset(line.strip() for line in fh if line.strip())


@dataclass(frozen=True)
class PreprocessConfig:
    lowercase: bool = True
    strip_punctuation: bool = True
    remove_stopwords: bool = True
    stopword_list: frozenset[str] = field(default_factory=default_stopwords)
    stemmer: str = STEMMER_NONE
    min_token_length: int = 1

    def __post_init__(self):
        if self.stemmer not in _STEMMERS:
            raise ConfigError(f"unknown stemmer {self.stemmer!r}; expected one of {_STEMMERS}")
        if self.min_token_length < 1:
            raise ConfigError("min_token_length must be >= 1")
        if self.remove_stopwords and not self.stopword_list:
            raise ConfigError("remove_stopwords is set but the stopword list is empty")


# A token is a run of letters/digits, with apostrophes allowed inside so
# pre-split clitics ("n't", "don't") survive as single tokens.
_TOKEN_RE = re.compile(r"[^\W_']+(?:'[^\W_']+)*")

# Characters normalize() strips from tokens when strip_punctuation is set.
_NONWORD_RE = re.compile(r"[^\w']|_")

# A sentence boundary candidate: a run of terminators followed by
# whitespace or end of text (so decimals like "3.5" never split).
_BOUNDARY_RE = re.compile(r"[.!?]+(?=\s|$)")

_LAST_WORD_RE = re.compile(r"(\S+)$")

# Title-style abbreviations whose trailing period does not end a sentence.
ABBREVIATIONS = frozenset({
    "dr", "mr", "mrs", "ms", "prof", "rev", "gen", "sgt", "col", "sr", "jr",
    "st", "vs", "etc", "eg", "ie", "e.g", "i.e", "inc", "ltd", "co", "corp",
    "dept", "univ", "approx", "fig", "al", "et",
})


def tokenize(text: str) -> list[str]:
    """Split text into tokens deterministically.

    Tokens are maximal runs of letters/digits with internal apostrophes;
    every other character is a separator, so "wi-fi!!" yields ["wi", "fi"]
    while a pre-tokenized "could n't" keeps "n't" intact.
    """
    return _TOKEN_RE.findall(text)


def _is_abbreviation(preceding: str) -> bool:
    m = _LAST_WORD_RE.search(preceding)
    if not m:
        return False
    word = m.group(1).strip("\"'()[]{},;:").rstrip(".").lower()
    if not word:
        return False
    return word in ABBREVIATIONS or (len(word) == 1 and word.isalpha())


def split_sentences(doc: RawDocument) -> list[Sentence]:
    """Rule-based sentence splitting on ``. ! ?`` with abbreviation guards.

    Sentence ids are the document id plus an ordinal suffix.  Tokens are
    left empty; callers fill them via :func:`prepare_sentence`.
    """
    text = doc.text
    chunks: list[str] = []
    start = 0
    for m in _BOUNDARY_RE.finditer(text):
        if m.group() == "." and _is_abbreviation(text[start:m.start()]):
            continue
        chunk = text[start:m.end()].strip()
        if chunk:
            chunks.append(chunk)
        start = m.end()
    tail = text[start:].strip()
    if tail:
        chunks.append(tail)
    return [
        Sentence(id=f"{doc.id}:{i}", original_text=chunk)
        for i, chunk in enumerate(chunks)
    ]


def normalize(tokens: Iterable[str], cfg: PreprocessConfig) -> list[str]:
    """Normalize a token list: lowercase, strip punctuation, drop stopwords,
    stem, then apply the minimum-length filter (in that order).

    Idempotent: running the output through ``normalize`` again returns it
    unchanged.  Stopwords are re-checked after stemming because stemming
    can map a token onto a stopword.
    """
    out: list[str] = []
    stopwords = cfg.stopword_list if cfg.remove_stopwords else frozenset()
    for tok in tokens:
        if cfg.lowercase:
            tok = tok.lower()
        if cfg.strip_punctuation:
            tok = _NONWORD_RE.sub("", tok).strip("'")
        if not tok or tok in stopwords:
            continue
        if cfg.stemmer == STEMMER_SUFFIX:
            tok = stem(tok)
            if tok in stopwords:
                continue
        if len(tok) < cfg.min_token_length:
            continue
        out.append(tok)
    return out


def prepare_sentence(sentence: Sentence, cfg: PreprocessConfig) -> Sentence:
    """Return a copy of the sentence with tokens filled in."""
    return replace(sentence, tokens=normalize(tokenize(sentence.original_text), cfg))


def filter_corpus(
    docs: Iterable[RawDocument],
    keywords: Iterable[str],
    *,
    stemmer: str = STEMMER_NONE,
) -> Iterator[RawDocument]:
    """Keep documents mentioning any keyword as a whole token (case-insensitive).

    An empty keyword set passes everything through.  When ``stemmer`` is
    enabled both the keywords and the document tokens are stemmed, so
    "laptop" matches "laptops"; without it, whole-token match is exact.
    Output order and multiplicity mirror the input.
    """
    keys = {k.lower() for k in keywords}
    if stemmer == STEMMER_SUFFIX:
        keys = {stem(k) for k in keys}
    elif stemmer != STEMMER_NONE:
        raise ConfigError(f"unknown stemmer {stemmer!r}; expected one of {_STEMMERS}")
    if not keys:
        yield from docs
        return
    for doc in docs:
        toks = tokenize(doc.text.lower())
        if stemmer == STEMMER_SUFFIX:
            toks = [stem(t) for t in toks]
        if any(t in keys for t in toks):
            yield doc


def read_line_corpus(path: str | Path) -> Iterator[RawDocument]:
    """Read a one-document-per-line UTF-8 corpus; ids are line ordinals."""
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            text = line.rstrip("\n")
            if text:
                yield RawDocument(id=f"d{i}", text=text)


def write_line_corpus(path: str | Path, docs: Iterable[RawDocument]) -> int:
    """Write documents one per line; returns the number written."""
    n = 0
    with open_write(path) as fh:
        for doc in docs:
            fh.write(doc.text.replace("\n", " ") + "\n")
            n += 1
    return n


def read_test_data(path: str | Path) -> list[Sentence]:
    """Read test sentences from a two-column TSV: text<TAB>gold_category.

    A header row is detected by the literal first cell ``sentence_text``.
    Sentence ids are ``t<row>`` ordinals over data rows.
    """
    sentences: list[Sentence] = []
    with open(path, encoding="utf-8") as fh:
        rows = [line.rstrip("\n") for line in fh]
    data_rows = [r for r in rows if r]
    if data_rows and data_rows[0].split("\t")[0] == "sentence_text":
        data_rows = data_rows[1:]
    for i, row in enumerate(data_rows):
        parts = row.split("\t")
        if len(parts) != 2:
            raise ConfigError(
                f"{path}: row {i} has {len(parts)} columns, expected "
                "sentence_text<TAB>gold_category"
            )
        text, gold = parts
        sentences.append(Sentence(id=f"t{i}", original_text=text, gold_category=gold or None))
    return sentences
