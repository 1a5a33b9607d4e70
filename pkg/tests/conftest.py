"""Shared fixtures: synthetic datasets with known-informative features and
the acceptance-summary reporting hook."""

from typing import List, Tuple

import numpy as np
import pytest

from featsel.classify import ClassifierSpec
from featsel.data import Dataset, FoldPlan, stratified_kfold

PLANTED = (2, 7, 11)


def make_planted(n_rows: int = 200, n_noise: int = 12, seed: int = 0,
                 margin: float = 0.1, planted: Tuple[int, ...] = PLANTED) -> Dataset:
    """Dataset whose label is the majority vote of three hidden bits.

    The bits are expressed through the `planted` feature columns, pushed
    at least `margin` away from the 0.5 threshold; every other column is
    uniform noise. Any classifier that finds the planted columns can score
    far above chance, and their marginal mutual information with the label
    dominates the noise columns' small-sample bias.
    """
    n_features = n_noise + len(planted)
    if max(planted) >= n_features:
        raise ValueError("planted indices must fit the feature count")
    rng = np.random.default_rng(seed)
    X = rng.random((n_rows, n_features))
    bits = rng.random((n_rows, len(planted))) < 0.5
    spread = rng.random((n_rows, len(planted))) * (0.5 - margin)
    for j, col in enumerate(planted):
        low = 0.5 - margin - spread[:, j]
        high = 0.5 + margin + spread[:, j]
        X[:, col] = np.where(bits[:, j], high, low)
    labels = (bits.sum(axis=1) * 2 > len(planted)).astype(np.int64)
    return Dataset(features=X, labels=labels, n_classes=2)


def make_constant_fitness(n_rows: int = 20, n_features: int = 6) -> Dataset:
    """All-zero features: every non-empty subset yields identical KNN
    predictions (all distances tie, resolved by training index), so the
    search fitness is constant across chromosomes and generations."""
    labels = np.arange(n_rows, dtype=np.int64) % 2
    return Dataset(features=np.zeros((n_rows, n_features)), labels=labels,
                   n_classes=2)


@pytest.fixture(scope="session")
def planted_ds() -> Dataset:
    return make_planted(n_rows=200, n_noise=12, seed=123)


@pytest.fixture(scope="session")
def planted_folds(planted_ds) -> FoldPlan:
    return stratified_kfold(planted_ds, 5, seed=0)


@pytest.fixture(scope="session")
def knn3() -> ClassifierSpec:
    return ClassifierSpec(kind="knn", k=3)


# ---------------------------------------------------------------------------
# Acceptance summary: one visible pass/fail line per criterion, printed in
# the terminal summary regardless of output capture.
# ---------------------------------------------------------------------------

_ACCEPTANCE_LINES: List[str] = []


def record_acceptance(name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    line = f"[acceptance] {name}: {status}" + (f" ({detail})" if detail else "")
    _ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def record_acceptance_skip(name: str, detail: str) -> None:
    line = f"[acceptance] {name}: SKIP ({detail})"
    _ACCEPTANCE_LINES.append(line)
    print(line)
    pytest.skip(detail)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
