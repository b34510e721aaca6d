"""Quality and runtime evaluation.

Scores predictions against gold labels (per-category and macro
precision/recall/F1) and assembles wall-clock timing reports with the
attention stage (annotate + classify) isolated from training and I/O.
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from simaspect._io import open_write
from simaspect.classify import CategoryAssignment
from simaspect.corpus import Sentence
from simaspect.errors import EmptyInput, MissingPrediction, UnknownGoldLabel


@dataclass
class CategoryCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0


@dataclass
class ConfusionCounts:
    """Per-category true-positive / false-positive / false-negative tallies
    for single-label evaluation."""

    per_category: dict[str, CategoryCounts]

    def total_gold(self) -> int:
        return sum(c.tp + c.fn for c in self.per_category.values())


@dataclass(frozen=True)
class MetricRow:
    """Precision/recall/F1 triple; ``degenerate`` flags zero-denominator
    values that were clamped to 0."""

    precision: float
    recall: float
    f1: float
    degenerate: bool = False


def confusion_counts(
    predictions: Iterable[CategoryAssignment],
    gold: Iterable[Sentence],
    categories: Sequence[str],
    *,
    label_unions: dict[str, frozenset[str]] | None = None,
) -> ConfusionCounts:
    """Tally confusion counts joining predictions to gold by sentence id.

    Every gold label must name a configured category.  Unclassifiable
    predictions count as a false negative for the gold category and a
    false positive for nothing.  ``label_unions`` lets a union gold label
    (e.g. one covering two related categories) accept a prediction of any
    member label.
    """
    unions = label_unions or {}
    counts = {c: CategoryCounts() for c in categories}
    by_id: dict[str, CategoryAssignment] = {}
    for pred in predictions:
        by_id[pred.sentence_id] = pred
    for sentence in gold:
        label = sentence.gold_category
        if label is None or label not in counts:
            raise UnknownGoldLabel(
                f"sentence {sentence.id!r} has gold label {label!r}, "
                f"not one of {list(categories)}"
            )
        pred = by_id.get(sentence.id)
        if pred is None:
            raise MissingPrediction(sentence.id)
        if pred.unclassifiable:
            counts[label].fn += 1
            continue
        hit = pred.category == label or pred.category in unions.get(label, frozenset())
        if hit:
            counts[label].tp += 1
        else:
            counts[label].fn += 1
            if pred.category in counts:
                counts[pred.category].fp += 1
    return ConfusionCounts(per_category=counts)


def precision_recall_f1(counts: CategoryCounts) -> MetricRow:
    """Standard P/R/F1 from one category's counts; zero denominators
    produce flagged zeros rather than errors."""
    degenerate = False
    if counts.tp + counts.fp > 0:
        precision = counts.tp / (counts.tp + counts.fp)
    else:
        precision, degenerate = 0.0, True
    if counts.tp + counts.fn > 0:
        recall = counts.tp / (counts.tp + counts.fn)
    else:
        recall, degenerate = 0.0, True
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return MetricRow(precision=precision, recall=recall, f1=f1, degenerate=degenerate)


def macro_average(rows: Sequence[MetricRow]) -> MetricRow:
    """Unweighted mean of P, R, and F1 taken independently (so the averaged
    F1 is the mean of F1 values, not the F1 of the means)."""
    if not rows:
        raise EmptyInput("macro average over no rows")
    n = len(rows)
    return MetricRow(
        precision=sum(r.precision for r in rows) / n,
        recall=sum(r.recall for r in rows) / n,
        f1=sum(r.f1 for r in rows) / n,
        degenerate=any(r.degenerate for r in rows),
    )


def evaluate(
    predictions: Iterable[CategoryAssignment],
    gold: Iterable[Sentence],
    categories: Sequence[str],
    *,
    label_unions: dict[str, frozenset[str]] | None = None,
) -> dict[str, MetricRow]:
    """Per-category metric rows plus a ``__macro__`` row."""
    counts = confusion_counts(predictions, gold, categories, label_unions=label_unions)
    rows = {c: precision_recall_f1(counts.per_category[c]) for c in categories}
    rows["__macro__"] = macro_average(list(rows.values()))
    return rows


# ---------------------------------------------------------------------------
# runtime measurement


@dataclass
class StageTiming:
    name: str
    seconds: float
    sentences: int = 0

    @property
    def throughput(self) -> float | None:
        """Sentences per second, or None when undefined (zero duration)."""
        if self.seconds <= 0.0 or self.sentences == 0:
            return None
        return self.sentences / self.seconds


ATTENTION_STAGES = ("annotate", "classify")
ATTENTION_STAGE_NAME = "annotate+classify"


@dataclass
class TimingReport:
    stages: list[StageTiming] = field(default_factory=list)

    def stage(self, name: str) -> StageTiming | None:
        for s in self.stages:
            if s.name == name:
                return s
        return None

    def attention_stage(self) -> StageTiming | None:
        """The combined annotate+classify stage, the pipeline's analogue of
        attention-mechanism time."""
        return self.stage(ATTENTION_STAGE_NAME)


class StageTimer:
    """Collects monotonic wall-clock timings per pipeline stage."""

    def __init__(self):
        self.stages: list[StageTiming] = []

    @contextmanager
    def stage(self, name: str):
        timing = StageTiming(name=name, seconds=0.0)
        start = time.perf_counter()
        try:
            yield timing
        finally:
            timing.seconds = time.perf_counter() - start
            self.stages.append(timing)


def runtime_report(stages: Sequence[StageTiming]) -> TimingReport:
    """Assemble the timing report, adding the combined annotate+classify
    row when both stages were measured."""
    report = TimingReport(stages=list(stages))
    measured = [s for s in stages if s.name in ATTENTION_STAGES]
    if len(measured) == len(ATTENTION_STAGES):
        report.stages.append(
            StageTiming(
                name=ATTENTION_STAGE_NAME,
                seconds=sum(s.seconds for s in measured),
                sentences=max(s.sentences for s in measured),
            )
        )
    return report


# ---------------------------------------------------------------------------
# report files


def write_eval_report(path: str | Path, rows: dict[str, MetricRow]) -> None:
    """TSV of ``category  P  R  F1`` with the ``__macro__`` row last."""
    with open_write(path) as fh:
        for category, row in rows.items():
            if category == "__macro__":
                continue
            fh.write(f"{category}\t{row.precision:.6f}\t{row.recall:.6f}\t{row.f1:.6f}\n")
        macro = rows.get("__macro__")
        if macro is not None:
            fh.write(f"__macro__\t{macro.precision:.6f}\t{macro.recall:.6f}\t{macro.f1:.6f}\n")


def read_eval_report(path: str | Path) -> dict[str, MetricRow]:
    rows: dict[str, MetricRow] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            category, p, r, f1 = line.split("\t")
            rows[category] = MetricRow(float(p), float(r), float(f1))
    return rows


def write_timing_report(path: str | Path, report: TimingReport) -> None:
    """TSV of ``stage  seconds  sentences  throughput``; undefined
    throughput is written as ``NA``, never infinity."""
    with open_write(path) as fh:
        for s in report.stages:
            tp = s.throughput
            tp_cell = "NA" if tp is None else f"{tp:.1f}"
            fh.write(f"{s.name}\t{s.seconds:.4f}\t{s.sentences}\t{tp_cell}\n")


def write_plot_csv(path: str | Path, rows: dict[str, MetricRow]) -> None:
    """CSV of per-category metrics suitable for external bar-chart plotting."""
    with open_write(path) as fh:
        fh.write("category,metric,value\n")
        for category, row in rows.items():
            for metric, value in (
                ("precision", row.precision),
                ("recall", row.recall),
                ("f1", row.f1),
            ):
                fh.write(f"{category},{metric},{value:.6f}\n")
