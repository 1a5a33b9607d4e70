"""Pure numpy reference implementations of the hot kernels.

These define the semantics; the Cython module `_core` is a drop-in
replacement selected at import time when it compiled successfully.
"""

import numpy as np


def contingency_table(x, y, nx, ny):
    """Joint count table of two symbol vectors, shape (nx, ny), int64.

    Parameters
    ----------
    x, y : int64 arrays of equal length with values in [0, nx) / [0, ny).
    nx, ny : declared cardinalities.
    """
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape[0]} vs {y.shape[0]}")
    if nx < 1 or ny < 1:
        raise ValueError("cardinalities must be positive")
    if x.size and (x.min() < 0 or x.max() >= nx or y.min() < 0 or y.max() >= ny):
        raise ValueError("symbol out of range for declared cardinality")
    flat = np.bincount(x * ny + y, minlength=nx * ny)
    return flat.reshape(nx, ny).astype(np.int64)


def knn_scores(train, labels, query, k, n_classes):
    """Per-class vote fractions of the k nearest training rows.

    Squared Euclidean distance; ties broken by lower training index.
    """
    train = np.asarray(train, dtype=np.float64)
    query = np.asarray(query, dtype=np.float64)
    labels = np.asarray(labels)
    nt = train.shape[0]
    if labels.shape[0] != nt:
        raise ValueError("labels length does not match training rows")
    if query.shape[1] != train.shape[1]:
        raise ValueError(f"query dimensionality {query.shape[1]} != training {train.shape[1]}")
    if not 1 <= k <= nt:
        raise ValueError("k must be in [1, n_train]")
    if labels.size and (labels.min() < 0 or labels.max() >= n_classes):
        raise ValueError("label out of range")

    scores = np.zeros((query.shape[0], n_classes), dtype=np.float64)
    for q in range(query.shape[0]):
        d2 = ((train - query[q]) ** 2).sum(axis=1)
        nearest = np.argsort(d2, kind="stable")[:k]
        votes = np.bincount(labels[nearest], minlength=n_classes)
        scores[q] = votes / k
    return scores
