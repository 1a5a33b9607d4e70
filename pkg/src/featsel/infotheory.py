"""Plug-in entropy and mutual information estimators for discrete
(binned) variables. All quantities are in nats."""

from dataclasses import dataclass

import numpy as np

from . import _kernels

__all__ = [
    "DiscreteVariable",
    "entropy",
    "conditional_entropy",
    "mutual_information",
]

# Estimator drift below this magnitude is treated as exactly zero.
_NEG_EPS = 1e-12


@dataclass(frozen=True)
class DiscreteVariable:
    """Integer symbol vector with a declared cardinality."""

    values: np.ndarray
    cardinality: int

    def __post_init__(self):
        values = np.array(self.values, dtype=np.int64)
        if values.ndim != 1:
            raise ValueError("values must be a 1-D vector")
        if values.size and (values.min() < 0 or values.max() >= self.cardinality):
            raise ValueError("values must lie in [0, cardinality)")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)


def _as_symbols(x) -> tuple:
    """Accept a DiscreteVariable or a plain integer vector."""
    if isinstance(x, DiscreteVariable):
        return x.values, x.cardinality
    v = np.ascontiguousarray(x, dtype=np.int64)
    if v.ndim != 1:
        raise ValueError("expected a 1-D integer vector")
    if v.size == 0:
        raise ValueError("expected a non-empty vector")
    if v.min() < 0:
        raise ValueError("symbols must be non-negative integers")
    return v, int(v.max()) + 1


def _entropy_from_counts(counts: np.ndarray, n: int) -> float:
    """H = ln n - (sum c ln c) / n over the non-zero counts."""
    c = counts[counts > 0].astype(np.float64)
    return float(np.log(n) - (c * np.log(c)).sum() / n)


def entropy(x) -> float:
    """Plug-in entropy of a discrete variable, in nats.

    Empirical symbol frequencies, 0 ln 0 := 0. Bounded by ln(cardinality).
    """
    values, cardinality = _as_symbols(x)
    if values.size == 0:
        raise ValueError("entropy of an empty vector is undefined")
    counts = np.bincount(values, minlength=cardinality)
    return _entropy_from_counts(counts, values.size)


def conditional_entropy(x, y) -> float:
    """H(X | Y) = sum_y p(y) H(X | Y=y), plug-in, in nats."""
    vx, cx = _as_symbols(x)
    vy, cy = _as_symbols(y)
    if vx.size != vy.size:
        raise ValueError(f"length mismatch: {vx.size} vs {vy.size}")
    if vx.size == 0:
        raise ValueError("conditional entropy of empty vectors is undefined")
    table = _kernels.contingency_table(vx, vy, cx, cy)
    n = vx.size
    y_counts = table.sum(axis=0)
    cells = table[table > 0].astype(np.float64)
    yc = y_counts[y_counts > 0].astype(np.float64)
    # (1/n) * (sum_y n_y ln n_y - sum_xy c_xy ln c_xy)
    h = ((yc * np.log(yc)).sum() - (cells * np.log(cells)).sum()) / n
    return max(0.0, float(h))


def mutual_information(x, y) -> float:
    """I(X, Y) = H(X) - H(X | Y), plug-in, in nats.

    Tiny negative rounding drift (within 1e-12 of zero) is clipped to 0.
    """
    mi = entropy(x) - conditional_entropy(x, y)
    if -_NEG_EPS < mi < 0.0:
        return 0.0
    return mi
