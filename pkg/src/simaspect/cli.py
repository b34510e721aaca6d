"""Command-line pipeline orchestration.

Subcommands mirror the pipeline stages (filter, train, expand, annotate,
classify, aspects, eval) plus ``pipeline`` to run them all in order and
``bench`` for a timed run.  Running the stages individually or via
``pipeline`` produces byte-identical artifacts in single-threaded mode.
"""

from __future__ import annotations

import functools
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from simaspect import attention as attn
from simaspect import classify as cls
from simaspect import corpus as corp
from simaspect import evaluation as ev
from simaspect.config import PipelineConfig, load_config
from simaspect.embedding import (
    EmbeddingModel,
    available_kernels,
    load_model,
    save_model,
    train_cbow,
)
from simaspect.errors import PipelineError


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except PipelineError as exc:
            raise click.ClickException(f"{type(exc).__name__}: {exc}") from exc

    return wrapper


@click.group()
@click.option("--config", "config_path", required=True, type=click.Path(), help="Pipeline config file (INI).")
@click.option("--threads", type=int, default=None, help="Worker threads for annotation/classification (1 = reproducible output).")
@click.option("--seed", type=int, default=None, help="Override the training seed from the config.")
@click.pass_context
def main(ctx, config_path, threads, seed):
    """Unsupervised aspect and category extraction over review text."""
    ctx.obj = {"config_path": config_path, "threads": threads, "seed": seed}


def _load(ctx) -> PipelineConfig:
    return load_config(
        ctx.obj["config_path"], threads=ctx.obj["threads"], seed=ctx.obj["seed"]
    )


# ---------------------------------------------------------------------------
# pipeline stages (shared by the individual subcommands and `pipeline`)


def _stage_filter(cfg: PipelineConfig) -> int:
    cfg.require_inputs("raw_corpus")
    out = cfg.path("filtered_corpus")
    docs = corp.filter_corpus(
        corp.read_line_corpus(cfg.path("raw_corpus")),
        cfg.filter_keywords,
        stemmer=cfg.preprocess.stemmer,
    )
    return corp.write_line_corpus(out, docs)


def _training_corpus_path(cfg: PipelineConfig) -> Path:
    return cfg.paths.get("filtered_corpus") or cfg.path("raw_corpus")


def _load_training_tokens(cfg: PipelineConfig) -> list[list[str]]:
    source = _training_corpus_path(cfg)
    if not source.is_file():
        raise_key = "filtered_corpus" if "filtered_corpus" in cfg.paths else "raw_corpus"
        cfg.require_inputs(raise_key)
    token_lists: list[list[str]] = []
    for doc in corp.read_line_corpus(source):
        for sent in corp.split_sentences(doc):
            toks = corp.normalize(corp.tokenize(sent.original_text), cfg.preprocess)
            if toks:
                token_lists.append(toks)
    return token_lists


def _stage_train(cfg: PipelineConfig, kernel: str = "auto") -> EmbeddingModel:
    token_lists = _load_training_tokens(cfg)
    model = train_cbow(token_lists, cfg.train, kernel=kernel)
    save_model(model, cfg.path("model"))
    return model


def _load_test_sentences(cfg: PipelineConfig) -> list[corp.Sentence]:
    cfg.require_inputs("test_data")
    return [
        corp.prepare_sentence(s, cfg.preprocess)
        for s in corp.read_test_data(cfg.path("test_data"))
    ]


def _annotate_all(
    cfg: PipelineConfig,
    model: EmbeddingModel,
    sentences: list[corp.Sentence],
    groups: list[attn.ReferenceGroup],
) -> list[attn.AnnotatedSentence]:
    if cfg.threads <= 1 or len(sentences) < 64:
        return attn.annotate_batch(model, sentences, groups, cfg.mode, combine=cfg.group_combine)
    chunk = max(32, len(sentences) // (cfg.threads * 4))
    parts = [sentences[i:i + chunk] for i in range(0, len(sentences), chunk)]
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        results = pool.map(
            lambda part: attn.annotate_batch(
                model, part, groups, cfg.mode, combine=cfg.group_combine
            ),
            parts,
        )
        return [ann for part in results for ann in part]


def _stage_annotate(
    cfg: PipelineConfig,
    model: EmbeddingModel | None = None,
    groups: list[attn.ReferenceGroup] | None = None,
) -> list[attn.AnnotatedSentence]:
    if model is None:
        cfg.require_inputs("model")
        model = load_model(cfg.path("model"))
    sentences = _load_test_sentences(cfg)
    annotated = _annotate_all(cfg, model, sentences, groups or cfg.groups)
    order = [g.category for g in (groups or cfg.groups)]
    attn.write_attention_file(cfg.path("output_attention"), annotated, order)
    return annotated


def _stage_classify(cfg: PipelineConfig) -> list[cls.CategoryAssignment]:
    cfg.require_inputs("output_attention")
    annotated = attn.read_attention_file(cfg.path("output_attention"))
    assignments = [
        cls.assign_category(ann, cfg.aggregation, cfg.group_order) for ann in annotated
    ]
    cls.write_category_file(cfg.path("output_categories"), assignments, cfg.group_order)
    return assignments


def _stage_aspects(cfg: PipelineConfig) -> dict[str, list[tuple[str, float]]]:
    cfg.require_inputs("output_attention", "output_categories")
    annotated = attn.read_attention_file(cfg.path("output_attention"))
    assignments = cls.read_category_file(cfg.path("output_categories"))
    lexicon = cls.extract_aspects(
        annotated, assignments, cfg.top_n_aspects, weighting=cfg.aspect_weighting
    )
    cls.write_aspect_lexicon(cfg.path("aspect_lexicon"), lexicon)
    return lexicon


def _stage_eval(cfg: PipelineConfig) -> dict[str, ev.MetricRow]:
    cfg.require_inputs("output_categories", "test_data")
    predictions = cls.read_category_file(cfg.path("output_categories"))
    gold = corp.read_test_data(cfg.path("test_data"))
    # union labels are legal gold categories even though no group carries them
    categories = cfg.group_order + [
        u for u in cfg.label_unions if u not in cfg.group_order
    ]
    rows = ev.evaluate(predictions, gold, categories, label_unions=cfg.label_unions)
    ev.write_eval_report(cfg.path("eval_report"), rows)
    if "plot_csv" in cfg.paths:
        ev.write_plot_csv(cfg.paths["plot_csv"], rows)
    return rows


def _echo_eval(rows: dict[str, ev.MetricRow]) -> None:
    for category, row in rows.items():
        click.echo(
            f"  {category:<16s} P={row.precision:.3f} R={row.recall:.3f} F1={row.f1:.3f}"
        )


# ---------------------------------------------------------------------------
# subcommands


@main.command(name="filter")
@click.pass_context
@_guarded
def filter_cmd(ctx):
    """Keep raw-corpus documents that mention a filter keyword."""
    cfg = _load(ctx)
    n = _stage_filter(cfg)
    click.echo(f"filtered corpus: {n} documents -> {cfg.path('filtered_corpus')}")


@main.command()
@click.option("--kernel", type=click.Choice(["auto", "compiled", "python"]), default="auto",
              help="Training kernel (auto prefers the compiled extension).")
@click.pass_context
@_guarded
def train(ctx, kernel):
    """Train word embeddings on the (filtered) corpus."""
    cfg = _load(ctx)
    model = _stage_train(cfg, kernel=kernel)
    click.echo(
        f"trained {len(model)}-word model ({model.dimensions} dims, "
        f"kernels available: {', '.join(available_kernels())}) -> {cfg.path('model')}"
    )


@main.command()
@click.option("-k", "--neighbors", type=int, default=10, show_default=True,
              help="Nearest neighbors to add per group.")
@click.pass_context
@_guarded
def expand(ctx, neighbors):
    """Expand seed reference groups with nearest-neighbor words."""
    cfg = _load(ctx)
    cfg.require_inputs("model")
    model = load_model(cfg.path("model"))
    expanded = [attn.expand_references(model, g, neighbors) for g in cfg.groups]
    out = cfg.path("expanded_groups")
    attn.write_groups_file(out, expanded)
    for g in expanded:
        click.echo(f"  {g.category}: {' '.join(g.words)}")
    click.echo(f"expanded groups -> {out}")


@main.command()
@click.option("--groups-file", type=click.Path(exists=True), default=None,
              help="Read reference groups from a file instead of the config.")
@click.pass_context
@_guarded
def annotate(ctx, groups_file):
    """Score test sentences: similarity and attention per token and category."""
    cfg = _load(ctx)
    groups = attn.read_groups_file(groups_file) if groups_file else None
    annotated = _stage_annotate(cfg, groups=groups)
    n_unclassifiable = sum(a.unclassifiable for a in annotated)
    click.echo(
        f"annotated {len(annotated)} sentences "
        f"({n_unclassifiable} unclassifiable) -> {cfg.path('output_attention')}"
    )


@main.command()
@click.pass_context
@_guarded
def classify(ctx):
    """Assign one category per sentence from the attention file."""
    cfg = _load(ctx)
    assignments = _stage_classify(cfg)
    n_unclassifiable = sum(a.unclassifiable for a in assignments)
    click.echo(
        f"classified {len(assignments)} sentences "
        f"({n_unclassifiable} unclassifiable) -> {cfg.path('output_categories')}"
    )


@main.command()
@click.pass_context
@_guarded
def aspects(ctx):
    """Extract the per-category aspect lexicon."""
    cfg = _load(ctx)
    lexicon = _stage_aspects(cfg)
    for category, entries in lexicon.items():
        preview = ", ".join(w for w, _ in entries[:8])
        click.echo(f"  {category}: {preview}")
    click.echo(f"aspect lexicon -> {cfg.path('aspect_lexicon')}")


@main.command(name="eval")
@click.pass_context
@_guarded
def eval_cmd(ctx):
    """Score categorized sentences against the gold labels."""
    cfg = _load(ctx)
    rows = _stage_eval(cfg)
    _echo_eval(rows)
    click.echo(f"eval report -> {cfg.path('eval_report')}")


@main.command()
@click.option("--kernel", type=click.Choice(["auto", "compiled", "python"]), default="auto")
@click.pass_context
@_guarded
def pipeline(ctx, kernel):
    """Run every stage in order: filter, train, annotate, classify, aspects, eval."""
    cfg = _load(ctx)
    if "filtered_corpus" in cfg.paths:
        n = _stage_filter(cfg)
        click.echo(f"filter: {n} documents")
    model = _stage_train(cfg, kernel=kernel)
    click.echo(f"train: {len(model)} words x {model.dimensions} dims")
    annotated = _stage_annotate(cfg, model=model)
    click.echo(f"annotate: {len(annotated)} sentences")
    assignments = _stage_classify(cfg)
    click.echo(f"classify: {len(assignments)} sentences")
    _stage_aspects(cfg)
    click.echo("aspects: lexicon written")
    rows = _stage_eval(cfg)
    _echo_eval(rows)
    click.echo("pipeline complete")


@main.command()
@click.option("--kernel", type=click.Choice(["auto", "compiled", "python"]), default="auto")
@click.pass_context
@_guarded
def bench(ctx, kernel):
    """Run the full pipeline with per-stage wall-clock timing."""
    cfg = _load(ctx)
    timer = ev.StageTimer()

    if "filtered_corpus" in cfg.paths:
        with timer.stage("filter") as st:
            st.sentences = _stage_filter(cfg)

    with timer.stage("preprocess") as st:
        token_lists = _load_training_tokens(cfg)
        test_sentences = _load_test_sentences(cfg)
        st.sentences = len(token_lists) + len(test_sentences)

    with timer.stage("train") as st:
        model = train_cbow(token_lists, cfg.train, kernel=kernel)
        save_model(model, cfg.path("model"))
        st.sentences = len(token_lists)

    with timer.stage("annotate") as st:
        annotated = _annotate_all(cfg, model, test_sentences, cfg.groups)
        attn.write_attention_file(cfg.path("output_attention"), annotated, cfg.group_order)
        st.sentences = len(annotated)

    with timer.stage("classify") as st:
        assignments = _stage_classify(cfg)
        st.sentences = len(assignments)

    with timer.stage("evaluate") as st:
        rows = _stage_eval(cfg)
        st.sentences = len(assignments)

    report = ev.runtime_report(timer.stages)
    ev.write_timing_report(cfg.path("timing_report"), report)
    for s in report.stages:
        tp = s.throughput
        tp_txt = "" if tp is None else f"  ({tp:,.0f} sentences/s)"
        click.echo(f"  {s.name:<20s} {s.seconds:8.3f}s{tp_txt}")
    _echo_eval(rows)
    click.echo(f"timing report -> {cfg.path('timing_report')}")


if __name__ == "__main__":
    main()
