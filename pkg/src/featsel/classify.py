"""Built-in evaluators (Gaussian naive Bayes, k-nearest neighbors) and the
cross-validated subset-fitness function shared by the wrapper searches.

Both classifiers are deliberately minimal: GNB stores frequency priors plus
per-class feature moments, KNN is exact brute-force with a vote-fraction
score. Prediction scores are per-class distributions (rows sum to 1), which
is what the one-vs-rest AUC needs.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .data import Dataset, FoldPlan
from .metrics import accuracy, confusion, macro_auc_ovr, macro_f1

__all__ = [
    "ClassifierSpec",
    "GnbModel",
    "default_variance_floor",
    "gnb_fit",
    "gnb_predict",
    "knn_predict",
    "EvaluationReport",
    "evaluate_subset",
    "subset_fitness",
]

_KINDS = ("gnb", "knn")


@dataclass(frozen=True)
class ClassifierSpec:
    """Which classifier to run inside the fitness loop.

    k applies to knn only; variance_floor applies to gnb only (None picks
    a data-driven default at fit time).
    """

    kind: str
    k: int = 3
    variance_floor: Optional[float] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown classifier kind {self.kind!r}, expected one of {_KINDS}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.variance_floor is not None and not self.variance_floor > 0:
            raise ValueError(f"variance_floor must be > 0, got {self.variance_floor}")


@dataclass(frozen=True)
class GnbModel:
    log_priors: np.ndarray   # (C,)
    means: np.ndarray        # (C, F)
    variances: np.ndarray    # (C, F), floored, strictly positive

    @property
    def n_classes(self) -> int:
        return len(self.log_priors)

    @property
    def n_features(self) -> int:
        return self.means.shape[1]


def default_variance_floor(features: np.ndarray) -> float:
    """1e-9 times the largest per-feature variance of the training block,
    falling back to 1e-9 when every feature is constant."""
    features = np.asarray(features, dtype=np.float64)
    max_var = float(features.var(axis=0).max()) if features.size else 0.0
    return 1e-9 * (max_var if max_var > 0 else 1.0)


def gnb_fit(train_features, train_labels, n_classes: int,
            variance_floor: Optional[float] = None) -> GnbModel:
    """Fit Gaussian naive Bayes: frequency priors, per-class feature means
    and population variances, variances floored to stay positive."""
    X = np.ascontiguousarray(train_features, dtype=np.float64)
    y = np.asarray(train_labels, dtype=np.int64)
    if X.ndim != 2:
        raise ValueError("training features must be a 2-D matrix")
    if y.ndim != 1 or y.size != X.shape[0]:
        raise ValueError("training labels must align with feature rows")
    if n_classes < 1:
        raise ValueError("n_classes must be >= 1")
    n = X.shape[0]
    floor = default_variance_floor(X) if variance_floor is None else float(variance_floor)
    log_priors = np.empty(n_classes)
    means = np.empty((n_classes, X.shape[1]))
    variances = np.empty((n_classes, X.shape[1]))
    for c in range(n_classes):
        rows = X[y == c]
        if rows.shape[0] == 0:
            raise ValueError(f"class {c} has no training instances in this fold")
        log_priors[c] = np.log(rows.shape[0] / n)
        means[c] = rows.mean(axis=0)
        variances[c] = np.maximum(rows.var(axis=0), floor)
    return GnbModel(log_priors=log_priors, means=means, variances=variances)


def gnb_predict(model: GnbModel, features) -> np.ndarray:
    """Per-row class posteriors, computed in log space and normalized."""
    X = np.ascontiguousarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise ValueError(
            f"feature dimensionality mismatch: model expects {model.n_features}")
    n, n_classes = X.shape[0], model.n_classes
    log_post = np.empty((n, n_classes))
    for c in range(n_classes):
        var = model.variances[c]
        log_norm = float(np.log(2.0 * np.pi * var).sum())
        sq = ((X - model.means[c]) ** 2 / var).sum(axis=1)
        log_post[:, c] = model.log_priors[c] - 0.5 * (log_norm + sq)
    # softmax rows: subtract the row max before exponentiating
    log_post -= log_post.max(axis=1, keepdims=True)
    scores = np.exp(log_post)
    scores /= scores.sum(axis=1, keepdims=True)
    return scores


def knn_predict(train_features, train_labels, query_features, k: int,
                n_classes: int) -> np.ndarray:
    """Vote fractions of the k nearest training points per query row.
    Distance ties go to the lower training index."""
    train = np.ascontiguousarray(train_features, dtype=np.float64)
    labels = np.ascontiguousarray(train_labels, dtype=np.int64)
    query = np.ascontiguousarray(query_features, dtype=np.float64)
    if train.ndim != 2 or query.ndim != 2 or train.shape[1] != query.shape[1]:
        raise ValueError("train and query feature dimensionalities must match")
    if labels.shape != (train.shape[0],):
        raise ValueError("training labels must align with feature rows")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > train.shape[0]:
        raise ValueError(f"k={k} exceeds training size {train.shape[0]}")
    if labels.size and (labels.min() < 0 or labels.max() >= n_classes):
        raise ValueError(f"training label out of range [0, {n_classes})")
    return _kernels.knn_scores(train, labels, query, k, n_classes)


def _predict_fold(spec: ClassifierSpec, train_X, train_y, test_X,
                  n_classes: int) -> np.ndarray:
    if spec.kind == "gnb":
        model = gnb_fit(train_X, train_y, n_classes, spec.variance_floor)
        return gnb_predict(model, test_X)
    return knn_predict(train_X, train_y, test_X, spec.k, n_classes)


@dataclass(frozen=True)
class EvaluationReport:
    """Per-fold cross-validation metrics for one feature subset.

    fitness is the mean fold accuracy; degenerate marks the empty-subset
    sentinel (all metrics forced to 0).
    """

    subset: Tuple[int, ...]
    fold_accuracy: Tuple[float, ...]
    fold_f1: Tuple[float, ...]
    fold_auc: Tuple[float, ...]
    degenerate: bool = False

    @property
    def n_folds(self) -> int:
        return len(self.fold_accuracy)

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.fold_accuracy))

    @property
    def std_accuracy(self) -> float:
        return float(np.std(self.fold_accuracy))

    @property
    def mean_f1(self) -> float:
        return float(np.mean(self.fold_f1))

    @property
    def std_f1(self) -> float:
        return float(np.std(self.fold_f1))

    @property
    def mean_auc(self) -> float:
        return float(np.mean(self.fold_auc))

    @property
    def std_auc(self) -> float:
        return float(np.std(self.fold_auc))

    @property
    def fitness(self) -> float:
        return self.mean_accuracy


def _canonical_subset(subset: Sequence[int], n_features: int) -> Tuple[int, ...]:
    canon = sorted({int(i) for i in subset})
    for i in canon:
        if i < 0 or i >= n_features:
            raise IndexError(f"feature index {i} out of range [0, {n_features})")
    return tuple(canon)


def _fold_scores(ds: Dataset, columns: Tuple[int, ...], spec: ClassifierSpec,
                 folds: FoldPlan):
    """Yield (scores, predicted, true) per fold, in fold order."""
    if len(folds.assignments) != ds.n_instances:
        raise ValueError("fold plan does not match dataset size")
    sub = np.ascontiguousarray(ds.features[:, columns])
    for train_idx, test_idx in folds.splits():
        scores = _predict_fold(spec, sub[train_idx], ds.labels[train_idx],
                               sub[test_idx], ds.n_classes)
        pred = scores.argmax(axis=1).astype(np.int64)
        yield scores, pred, ds.labels[test_idx]


def _degenerate_report(k: int) -> EvaluationReport:
    zeros = tuple(0.0 for _ in range(k))
    return EvaluationReport(subset=(), fold_accuracy=zeros, fold_f1=zeros,
                            fold_auc=zeros, degenerate=True)


def evaluate_subset(ds: Dataset, subset: Sequence[int], spec: ClassifierSpec,
                    folds: FoldPlan) -> EvaluationReport:
    """Cross-validated accuracy / macro-F1 / macro-AUC of the classifier
    restricted to the given feature columns. The empty subset is a valid
    degenerate input with fitness 0."""
    columns = _canonical_subset(subset, ds.n_features)
    if not columns:
        return _degenerate_report(folds.k)
    accs, f1s, aucs = [], [], []
    for scores, pred, true in _fold_scores(ds, columns, spec, folds):
        accs.append(accuracy(pred, true))
        f1s.append(macro_f1(confusion(pred, true, ds.n_classes)))
        aucs.append(macro_auc_ovr(scores, true))
    return EvaluationReport(subset=columns, fold_accuracy=tuple(accs),
                            fold_f1=tuple(f1s), fold_auc=tuple(aucs))


def subset_fitness(ds: Dataset, subset: Sequence[int], spec: ClassifierSpec,
                   folds: FoldPlan) -> float:
    """Mean cross-validated accuracy only — the search-loop fast path.
    Matches evaluate_subset(...).fitness exactly."""
    columns = _canonical_subset(subset, ds.n_features)
    if not columns:
        return 0.0
    accs = [accuracy(pred, true) for _, pred, true in _fold_scores(ds, columns, spec, folds)]
    return float(np.mean(accs))
