"""Dataset loading, min-max normalization, interval discretization, and
deterministic stratified cross-validation folds."""

import csv
import math
import os
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

__all__ = [
    "Dataset",
    "DiscreteDataset",
    "FoldPlan",
    "load_csv",
    "normalize_column",
    "normalize_dataset",
    "discretize",
    "stratified_kfold",
    "load_fold_assignments",
]


@dataclass(frozen=True)
class Dataset:
    """Instance-by-feature numeric matrix with integer class labels.

    Immutable after construction: the backing arrays are marked read-only
    so instances can be shared freely across threads.
    """

    features: np.ndarray
    labels: np.ndarray
    n_classes: int
    feature_names: Optional[tuple] = None

    def __post_init__(self):
        features = np.array(self.features, dtype=np.float64, order="C")
        labels = np.array(self.labels, dtype=np.int64)
        if features.ndim != 2:
            raise ValueError("features must be a 2-D matrix")
        if labels.ndim != 1 or labels.shape[0] != features.shape[0]:
            raise ValueError("labels length must equal the number of instance rows")
        if not np.isfinite(features).all():
            raise ValueError("features contain non-finite values")
        if self.n_classes < 2:
            raise ValueError("need at least 2 classes")
        if labels.size and (labels.min() < 0 or labels.max() >= self.n_classes):
            raise ValueError("labels must lie in [0, n_classes)")
        if self.feature_names is not None:
            names = tuple(self.feature_names)
            if len(names) != features.shape[1]:
                raise ValueError("feature_names length must equal the feature count")
            object.__setattr__(self, "feature_names", names)
        features.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)

    @property
    def n_instances(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def feature_name(self, index: int) -> str:
        if self.feature_names is not None:
            return self.feature_names[index]
        return str(index)

    def class_counts(self) -> dict:
        """Per-class instance counts, keyed by class id."""
        counts = np.bincount(self.labels, minlength=self.n_classes)
        return {c: int(counts[c]) for c in range(self.n_classes)}


@dataclass(frozen=True)
class DiscreteDataset:
    """Binned integer view of a Dataset, one bin index per cell."""

    bins: np.ndarray
    n_bins: int
    source: Dataset

    def __post_init__(self):
        bins = np.array(self.bins, dtype=np.int64, order="C")
        if bins.shape != self.source.features.shape:
            raise ValueError("bins must have the same shape as the source features")
        if bins.size and (bins.min() < 0 or bins.max() >= self.n_bins):
            raise ValueError("bin indices must lie in [0, n_bins)")
        bins.flags.writeable = False
        object.__setattr__(self, "bins", bins)

    @property
    def n_features(self) -> int:
        return self.bins.shape[1]


@dataclass(frozen=True)
class FoldPlan:
    """Cross-validation fold assignment, one fold index per instance."""

    k: int
    assignments: np.ndarray
    seed: int

    def __post_init__(self):
        assignments = np.array(self.assignments, dtype=np.int64)
        if self.k < 2:
            raise ValueError("need at least 2 folds")
        if assignments.min() < 0 or assignments.max() >= self.k:
            raise ValueError("fold indices must lie in [0, k)")
        if np.bincount(assignments, minlength=self.k).min() == 0:
            raise ValueError("every fold must be non-empty")
        assignments.flags.writeable = False
        object.__setattr__(self, "assignments", assignments)

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)

    def splits(self):
        """Yield (train_indices, test_indices) for each fold in order."""
        for fold in range(self.k):
            yield self.train_indices(fold), self.test_indices(fold)

    def save(self, path) -> None:
        """Write the plan as plain text, one fold index per line (audit format)."""
        with open(path, "w", encoding="utf-8") as fh:
            for a in self.assignments:
                fh.write(f"{a}\n")


def load_fold_assignments(path) -> np.ndarray:
    """Read a fold-per-line audit file back into an assignment vector."""
    with open(path, encoding="utf-8") as fh:
        return np.array([int(line) for line in fh if line.strip()], dtype=np.int64)


def load_csv(path, label_column: Union[str, int] = "label") -> Dataset:
    """Load a comma-separated, UTF-8, header-first dataset file.

    Parameters
    ----------
    path : CSV file path.
    label_column : header name or 0-based column index of the class column.

    Labels are re-encoded to contiguous integers in order of first
    appearance. Every other cell must parse as a finite real number;
    parse failures report the offending file line and column name.
    """
    if not os.path.exists(path):
        raise FileNotFoundError(f"dataset file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"empty dataset file: {path}") from None
        header = [h.strip() for h in header]

        if isinstance(label_column, int):
            label_idx = label_column if label_column >= 0 else len(header) + label_column
            if not 0 <= label_idx < len(header):
                raise ValueError(f"label column index {label_column} out of range "
                                 f"for {len(header)} columns")
        else:
            try:
                label_idx = header.index(label_column)
            except ValueError:
                raise ValueError(f"label column {label_column!r} not found; "
                                 f"columns are {header}") from None

        feature_names = tuple(h for i, h in enumerate(header) if i != label_idx)
        rows = []
        raw_labels = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(f"line {line_no}: expected {len(header)} fields, "
                                 f"got {len(row)}")
            values = np.empty(len(header) - 1, dtype=np.float64)
            j = 0
            for i, cell in enumerate(row):
                if i == label_idx:
                    continue
                cell = cell.strip()
                try:
                    v = float(cell)
                except ValueError:
                    raise ValueError(f"line {line_no}, column {header[i]!r}: "
                                     f"cannot parse {cell!r} as a number") from None
                if not math.isfinite(v):
                    raise ValueError(f"line {line_no}, column {header[i]!r}: "
                                     f"non-finite value {cell!r}")
                values[j] = v
                j += 1
            rows.append(values)
            raw_labels.append(row[label_idx].strip())

    if not rows:
        raise ValueError(f"dataset file has a header but no data rows: {path}")

    encoding = {}
    labels = np.empty(len(raw_labels), dtype=np.int64)
    for i, raw in enumerate(raw_labels):
        if raw not in encoding:
            encoding[raw] = len(encoding)
        labels[i] = encoding[raw]
    if len(encoding) < 2:
        raise ValueError(f"label column has a single distinct value "
                         f"({next(iter(encoding))!r}); need at least 2 classes")

    return Dataset(
        features=np.vstack(rows),
        labels=labels,
        n_classes=len(encoding),
        feature_names=feature_names,
    )


def normalize_column(values) -> np.ndarray:
    """Min-max rescale a vector into [0, 1].

    Constant columns map to all zeros: they carry no information and a
    zero image keeps downstream mutual information at exactly 0.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise ValueError("cannot normalize an empty vector")
    if not np.isfinite(v).all():
        raise ValueError("cannot normalize non-finite values")
    lo = v.min()
    hi = v.max()
    if hi == lo:
        return np.zeros_like(v)
    return (v - lo) / (hi - lo)


def normalize_dataset(ds: Dataset) -> Dataset:
    """Apply min-max normalization to every feature column."""
    normalized = np.empty_like(ds.features)
    for j in range(ds.n_features):
        normalized[:, j] = normalize_column(ds.features[:, j])
    return Dataset(normalized, ds.labels, ds.n_classes, ds.feature_names)


def discretize(ds: Dataset, n_bins: int = 10) -> DiscreteDataset:
    """Bucket each feature into `n_bins` equal-width intervals of [0, 1].

    Per column: bin = floor(normalized * n_bins), with the right endpoint
    1.0 clamped into the top bin.
    """
    if n_bins < 2:
        raise ValueError("need at least 2 bins")
    bins = np.empty(ds.features.shape, dtype=np.int64)
    for j in range(ds.n_features):
        scaled = np.floor(normalize_column(ds.features[:, j]) * n_bins)
        bins[:, j] = np.minimum(scaled, n_bins - 1).astype(np.int64)
    return DiscreteDataset(bins=bins, n_bins=n_bins, source=ds)


def stratified_kfold(ds: Dataset, k: int, seed: int) -> FoldPlan:
    """Deterministic stratified fold assignment.

    Within each class the (shuffled) members are dealt cyclically; the
    dealing cursor continues across classes so remainders spread out and
    every fold is non-empty whenever k <= n_instances. Per class, fold
    counts differ by at most one.
    """
    if k < 2:
        raise ValueError("need at least 2 folds")
    if k > ds.n_instances:
        raise ValueError(f"cannot split {ds.n_instances} instances into {k} folds")
    rng = np.random.default_rng(seed)
    assignments = np.empty(ds.n_instances, dtype=np.int64)
    cursor = 0
    for c in range(ds.n_classes):
        members = np.flatnonzero(ds.labels == c)
        rng.shuffle(members)
        for idx in members:
            assignments[idx] = cursor
            cursor = (cursor + 1) % k
    return FoldPlan(k=k, assignments=assignments, seed=seed)
