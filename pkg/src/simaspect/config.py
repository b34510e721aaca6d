"""Pipeline configuration: a single INI-style key-value document.

Every path is resolved relative to the config file's directory.  Unknown
sections or keys are rejected so typos surface before any work begins;
see the README for the full grammar and defaults.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from simaspect.attention import (
    COMBINE_CENTROID,
    MODE_DIRECT,
    ReferenceGroup,
    SimilarityMode,
)
from simaspect.classify import AGG_MEAN, _AGGREGATIONS, _WEIGHTINGS, WEIGHT_ATTENTION
from simaspect.corpus import (
    PreprocessConfig,
    STEMMER_NONE,
    default_stopwords,
    normalize,
    read_stopword_file,
    tokenize,
)
from simaspect.embedding import TrainConfig
from simaspect.errors import ConfigError

_KNOWN_KEYS = {
    "paths": {
        "raw_corpus", "filtered_corpus", "model", "test_data",
        "output_attention", "output_categories", "aspect_lexicon",
        "eval_report", "timing_report", "expanded_groups", "plot_csv",
    },
    "preprocess": {
        "lowercase", "strip_punctuation", "remove_stopwords",
        "stopword_file", "stemmer", "min_token_length",
    },
    "filter": {"keywords"},
    "train": {
        "dimensions", "window", "negative_samples", "epochs", "min_count",
        "initial_learning_rate", "seed", "subsample_threshold",
    },
    "similarity": {"mode", "context_weight", "group_combine"},
    "classify": {"aggregation", "top_n_aspects", "aspect_weighting"},
    "eval": {"label_unions"},
    "run": {"threads"},
    "groups": None,  # free-form: category = reference words
}

_PATH_KEYS_READ = {"raw_corpus", "test_data", "stopword_file"}


@dataclass
class PipelineConfig:
    """Everything the pipeline needs, wired from one config file."""

    base_dir: Path
    paths: dict[str, Path]
    preprocess: PreprocessConfig
    train: TrainConfig
    groups: list[ReferenceGroup]
    mode: SimilarityMode = field(default_factory=SimilarityMode)
    group_combine: str = COMBINE_CENTROID
    aggregation: str = AGG_MEAN
    top_n_aspects: int = 50
    aspect_weighting: str = WEIGHT_ATTENTION
    filter_keywords: frozenset[str] = frozenset()
    label_unions: dict[str, frozenset[str]] = field(default_factory=dict)
    threads: int = 1

    @property
    def group_order(self) -> list[str]:
        return [g.category for g in self.groups]

    def path(self, key: str) -> Path:
        try:
            return self.paths[key]
        except KeyError:
            raise ConfigError(f"config is missing [paths] {key}") from None

    def require_inputs(self, *keys: str) -> None:
        """Check that the input files a subcommand reads exist, before any
        output file is created or truncated."""
        missing = [k for k in keys if k not in self.paths]
        if missing:
            raise ConfigError(f"config is missing [paths] keys: {', '.join(missing)}")
        absent = [str(self.paths[k]) for k in keys if not self.paths[k].is_file()]
        if absent:
            raise ConfigError(f"input files not found: {', '.join(absent)}")


def _getboolean(raw: str, where: str) -> bool:
    truthy = {"1": True, "yes": True, "true": True, "on": True,
              "0": False, "no": False, "false": False, "off": False}
    try:
        return truthy[raw.strip().lower()]
    except KeyError:
        raise ConfigError(f"{where}: expected a boolean, got {raw!r}") from None


def _getint(raw: str, where: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{where}: expected an integer, got {raw!r}") from None


def _getfloat(raw: str, where: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{where}: expected a number, got {raw!r}") from None


def _parse_label_unions(raw: str) -> dict[str, frozenset[str]]:
    """``union:member,member;union2:member,...``"""
    unions: dict[str, frozenset[str]] = {}
    for entry in raw.split(";"):
        entry = entry.strip()
        if not entry:
            continue
        label, sep, members = entry.partition(":")
        if not sep or not members.strip():
            raise ConfigError(f"[eval] label_unions: malformed entry {entry!r}")
        unions[label.strip()] = frozenset(
            m.strip() for m in members.split(",") if m.strip()
        )
    return unions


def load_config(
    path: str | Path,
    *,
    threads: int | None = None,
    seed: int | None = None,
) -> PipelineConfig:
    """Parse and validate a config file; ``threads``/``seed`` override the
    file's values when given (CLI flags)."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None

    for section in parser.sections():
        if section not in _KNOWN_KEYS:
            raise ConfigError(f"{path}: unknown section [{section}]")
        known = _KNOWN_KEYS[section]
        if known is not None:
            for key in parser[section]:
                if key not in known:
                    raise ConfigError(f"{path}: unknown key {key!r} in [{section}]")

    base = path.parent

    def get(section: str, key: str, default: str | None = None) -> str | None:
        if parser.has_option(section, key):
            value = parser.get(section, key).strip()
            return value if value else default
        return default

    where = lambda s, k: f"{path}: [{s}] {k}"

    # preprocess
    stopword_file = get("preprocess", "stopword_file")
    stopwords = (
        read_stopword_file(base / stopword_file) if stopword_file else default_stopwords()
    )
    preprocess = PreprocessConfig(
        lowercase=_getboolean(get("preprocess", "lowercase", "true"), where("preprocess", "lowercase")),
        strip_punctuation=_getboolean(
            get("preprocess", "strip_punctuation", "true"), where("preprocess", "strip_punctuation")
        ),
        remove_stopwords=_getboolean(
            get("preprocess", "remove_stopwords", "true"), where("preprocess", "remove_stopwords")
        ),
        stopword_list=stopwords,
        stemmer=get("preprocess", "stemmer", STEMMER_NONE),
        min_token_length=_getint(
            get("preprocess", "min_token_length", "1"), where("preprocess", "min_token_length")
        ),
    )

    train = TrainConfig(
        dimensions=_getint(get("train", "dimensions", "200"), where("train", "dimensions")),
        window=_getint(get("train", "window", "5"), where("train", "window")),
        negative_samples=_getint(
            get("train", "negative_samples", "5"), where("train", "negative_samples")
        ),
        epochs=_getint(get("train", "epochs", "15"), where("train", "epochs")),
        min_count=_getint(get("train", "min_count", "5"), where("train", "min_count")),
        initial_learning_rate=_getfloat(
            get("train", "initial_learning_rate", "0.025"),
            where("train", "initial_learning_rate"),
        ),
        seed=seed if seed is not None else _getint(get("train", "seed", "1"), where("train", "seed")),
        subsample_threshold=_getfloat(
            get("train", "subsample_threshold", "0"), where("train", "subsample_threshold")
        ),
    )

    if not parser.has_section("groups") or not list(parser["groups"]):
        raise ConfigError(f"{path}: at least one reference group is required in [groups]")
    groups: list[ReferenceGroup] = []
    seen: set[str] = set()
    for category, raw_words in parser["groups"].items():
        if category in seen:
            raise ConfigError(f"{path}: duplicate category {category!r}")
        seen.add(category)
        words = normalize(tokenize(raw_words), preprocess)
        if not words:
            raise ConfigError(
                f"{path}: reference words for {category!r} are empty after preprocessing"
            )
        groups.append(ReferenceGroup(category, words))

    mode = SimilarityMode(
        kind=get("similarity", "mode", MODE_DIRECT),
        context_weight=_getfloat(
            get("similarity", "context_weight", "0.5"), where("similarity", "context_weight")
        ),
    )
    group_combine = get("similarity", "group_combine", COMBINE_CENTROID)
    if group_combine not in ("centroid", "max", "mean"):
        raise ConfigError(f"{path}: unknown group_combine {group_combine!r}")

    aggregation = get("classify", "aggregation", AGG_MEAN)
    if aggregation not in _AGGREGATIONS:
        raise ConfigError(f"{path}: unknown aggregation {aggregation!r}")
    aspect_weighting = get("classify", "aspect_weighting", WEIGHT_ATTENTION)
    if aspect_weighting not in _WEIGHTINGS:
        raise ConfigError(f"{path}: unknown aspect_weighting {aspect_weighting!r}")
    top_n = _getint(get("classify", "top_n_aspects", "50"), where("classify", "top_n_aspects"))
    if top_n < 0:
        raise ConfigError(f"{path}: top_n_aspects must be >= 0")

    keywords = frozenset((get("filter", "keywords", "") or "").split())

    unions = _parse_label_unions(get("eval", "label_unions", "") or "")

    n_threads = threads if threads is not None else _getint(
        get("run", "threads", "1"), where("run", "threads")
    )
    if n_threads < 1:
        raise ConfigError(f"{path}: threads must be >= 1")

    paths = {}
    if parser.has_section("paths"):
        for key, value in parser["paths"].items():
            if value.strip():
                paths[key] = (base / value.strip()).resolve()

    return PipelineConfig(
        base_dir=base,
        paths=paths,
        preprocess=preprocess,
        train=train,
        groups=groups,
        mode=mode,
        group_combine=group_combine,
        aggregation=aggregation,
        top_n_aspects=top_n,
        aspect_weighting=aspect_weighting,
        filter_keywords=keywords,
        label_unions=unions,
        threads=n_threads,
    )
