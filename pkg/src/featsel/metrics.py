"""Classification metrics (accuracy, macro F1, macro one-vs-rest AUC) and
the paired two-tailed t-test behind win/tie/loss tables."""

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "ConfusionCounts",
    "confusion",
    "accuracy",
    "accuracy_from_counts",
    "macro_f1",
    "macro_auc_ovr",
    "TTestResult",
    "paired_t_test",
]

log = logging.getLogger(__name__)

WIN, TIE, LOSS = "win", "tie", "loss"


@dataclass(frozen=True)
class ConfusionCounts:
    """One-vs-rest confusion counts per class (int64 vectors)."""

    tp: np.ndarray
    tn: np.ndarray
    fp: np.ndarray
    fn: np.ndarray

    @property
    def n_classes(self) -> int:
        return len(self.tp)

    @property
    def total(self) -> int:
        return int(self.tp[0] + self.tn[0] + self.fp[0] + self.fn[0])


def _check_labels(pred, true, n_classes):
    pred = np.asarray(pred, dtype=np.int64)
    true = np.asarray(true, dtype=np.int64)
    if pred.shape != true.shape:
        raise ValueError(f"length mismatch: {pred.shape} vs {true.shape}")
    if pred.size == 0:
        raise ValueError("empty label vectors")
    for name, v in (("predicted", pred), ("true", true)):
        if v.min() < 0 or v.max() >= n_classes:
            raise ValueError(f"{name} label out of range [0, {n_classes})")
    return pred, true


def confusion(pred_labels, true_labels, n_classes: int) -> ConfusionCounts:
    """One-vs-rest TP/TN/FP/FN tallies for each class."""
    pred, true = _check_labels(pred_labels, true_labels, n_classes)
    n = pred.size
    tp = np.zeros(n_classes, dtype=np.int64)
    fp = np.zeros(n_classes, dtype=np.int64)
    fn = np.zeros(n_classes, dtype=np.int64)
    for c in range(n_classes):
        tp[c] = np.count_nonzero((pred == c) & (true == c))
        fp[c] = np.count_nonzero((pred == c) & (true != c))
        fn[c] = np.count_nonzero((pred != c) & (true == c))
    tn = n - tp - fp - fn
    return ConfusionCounts(tp=tp, tn=tn, fp=fp, fn=fn)


def accuracy(pred_labels, true_labels) -> float:
    """Fraction of exact label matches."""
    pred = np.asarray(pred_labels)
    true = np.asarray(true_labels)
    if pred.shape != true.shape:
        raise ValueError(f"length mismatch: {pred.shape} vs {true.shape}")
    if pred.size == 0:
        raise ValueError("empty label vectors")
    return float(np.count_nonzero(pred == true) / pred.size)


def accuracy_from_counts(tp: int, tn: int, fp: int, fn: int) -> float:
    """Binary-form accuracy (TP + TN) / (TP + TN + FP + FN)."""
    total = tp + tn + fp + fn
    if total <= 0:
        raise ValueError("empty confusion counts")
    return (tp + tn) / total


def macro_f1(counts: ConfusionCounts) -> float:
    """Unweighted mean of per-class F1; any 0/0 ratio resolves to 0."""
    f1s = []
    for c in range(counts.n_classes):
        tp, fp, fn = int(counts.tp[c]), int(counts.fp[c]), int(counts.fn[c])
        precision = tp / (tp + fp) if tp + fp > 0 else 0.0
        recall = tp / (tp + fn) if tp + fn > 0 else 0.0
        if precision + recall > 0:
            f1s.append(2 * precision * recall / (precision + recall))
        else:
            f1s.append(0.0)
    return float(np.mean(f1s))


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties assigned their group's average rank."""
    n = values.size
    order = np.argsort(values, kind="stable")
    sorted_v = values[order]
    new_group = np.r_[True, sorted_v[1:] != sorted_v[:-1]]
    group_id = np.cumsum(new_group) - 1
    first = np.flatnonzero(new_group)
    sizes = np.diff(np.r_[first, n])
    group_rank = first + (sizes + 1) / 2.0
    ranks = np.empty(n)
    ranks[order] = group_rank[group_id]
    return ranks


def macro_auc_ovr(scores, true_labels) -> float:
    """Macro one-vs-rest AUC: per class, the probability that a positive
    instance outscores a negative one on that class's column, ties
    counting one half. Classes without both a positive and a negative
    instance are skipped (and logged)."""
    scores = np.asarray(scores, dtype=np.float64)
    true = np.asarray(true_labels, dtype=np.int64)
    if scores.ndim != 2 or scores.shape[0] != true.size:
        raise ValueError("scores must be (n_instances, n_classes)")
    n, n_classes = scores.shape
    aucs = []
    skipped = []
    for c in range(n_classes):
        pos = true == c
        n_pos = int(pos.sum())
        n_neg = n - n_pos
        if n_pos == 0 or n_neg == 0:
            skipped.append(c)
            continue
        ranks = _average_ranks(scores[:, c])
        auc = (ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)
        aucs.append(auc)
    if skipped:
        log.debug("macro AUC skipped classes without both outcomes: %s", skipped)
    if not aucs:
        raise ValueError("no class has both positive and negative instances")
    return float(np.mean(aucs))


# ---------------------------------------------------------------------------
# Student's t, via the regularized incomplete beta function (continued
# fraction, Lentz's method). Avoids a statistics dependency and is checked
# against an independent CDF oracle in the tests.
# ---------------------------------------------------------------------------

_CF_MAX_ITER = 300
_CF_EPS = 3e-16
_CF_TINY = 1e-300


def _betacf(a: float, b: float, x: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise RuntimeError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def _betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_two_tailed_p(t: float, df: int) -> float:
    """P(|T_df| >= |t|) for Student's t with df degrees of freedom."""
    if df < 1:
        raise ValueError("degrees of freedom must be >= 1")
    if math.isinf(t):
        return 0.0
    return _betainc_reg(df / 2.0, 0.5, df / (df + t * t))


class TTestResult(NamedTuple):
    t: float
    p_value: float
    verdict: str


def paired_t_test(a, b, alpha: float = 0.05) -> TTestResult:
    """Paired two-tailed t-test on index-aligned score vectors.

    Verdict is 'win' when a beats b significantly (p < alpha and mean
    difference positive), 'loss' for the mirror case, 'tie' otherwise.
    Degenerate zero-variance differences: exact equality is a tie with
    p = 1; a constant non-zero shift is the infinite-t limit, reported
    as p = 0 with the verdict following the sign.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    n = a.size
    if n < 2:
        raise ValueError("need at least 2 paired samples")
    d = a - b
    mean = float(d.mean())
    sd = float(d.std(ddof=1))
    if sd == 0.0:
        if mean == 0.0:
            return TTestResult(0.0, 1.0, TIE)
        t = math.inf if mean > 0 else -math.inf
        return TTestResult(t, 0.0, WIN if mean > 0 else LOSS)
    t = mean / (sd / math.sqrt(n))
    p = student_two_tailed_p(t, n - 1)
    if p < alpha:
        verdict = WIN if mean > 0 else LOSS
    else:
        verdict = TIE
    return TTestResult(float(t), float(p), verdict)
