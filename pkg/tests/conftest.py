"""Shared fixtures and the acceptance-suite summary printer."""

from __future__ import annotations

import re

import pytest

from helpers import two_topic_corpus
from simaspect.embedding import TrainConfig, train_cbow

TWO_TOPIC_TRAIN = TrainConfig(
    dimensions=48, window=5, negative_samples=5, epochs=15, min_count=5, seed=42
)


@pytest.fixture(scope="session")
def two_topic_tokens() -> list[list[str]]:
    return two_topic_corpus()


@pytest.fixture(scope="session")
def two_topic_model(two_topic_tokens):
    return train_cbow(two_topic_tokens, TWO_TOPIC_TRAIN)


# ---------------------------------------------------------------------------
# one PASS/FAIL line per acceptance criterion

_CRITERION_RE = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes: dict[str, dict[str, int]] = {}
    for status in ("passed", "failed", "skipped"):
        for report in terminalreporter.stats.get(status, []):
            m = _CRITERION_RE.search(getattr(report, "nodeid", ""))
            if m:
                bucket = outcomes.setdefault(m.group(1), {"passed": 0, "failed": 0, "skipped": 0})
                bucket[status] += 1
    if not outcomes:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num in sorted(outcomes):
        counts = outcomes[num]
        if counts["failed"]:
            verdict = f"FAIL ({counts['failed']} of {sum(counts.values())} checks)"
        elif counts["passed"]:
            verdict = "PASS"
        else:
            verdict = "SKIP"
        terminalreporter.write_line(f"criterion {num}: {verdict}")
