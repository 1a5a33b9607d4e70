"""Compare the compiled compute kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeats N]

Times the two kernel entry points (contingency counting for mutual
information, and KNN vote scoring) on sizes representative of the search
workload, then a full probability-vector search run through each backend.
"""

import argparse
import time

import numpy as np

from featsel._kernels import fallback

try:
    from featsel._kernels import _core
except ImportError:
    _core = None


def _best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_contingency(repeats):
    rng = np.random.default_rng(0)
    n, n_pairs = 2000, 300
    xs = rng.integers(0, 10, size=(n_pairs, n)).astype(np.int64)
    ys = rng.integers(0, 10, size=(n_pairs, n)).astype(np.int64)

    def run(mod):
        def body():
            for i in range(n_pairs):
                mod.contingency_table(xs[i], ys[i], 10, 10)
        return body

    rows = []
    base = _best_of(run(fallback), repeats)
    rows.append(("contingency_table", "fallback", base, 1.0))
    if _core is not None:
        t = _best_of(run(_core), repeats)
        rows.append(("contingency_table", "compiled", t, base / t))
    return rows


def bench_knn(repeats):
    rng = np.random.default_rng(1)
    train = rng.random((160, 40))
    labels = rng.integers(0, 3, size=160).astype(np.int64)
    query = rng.random((40, 40))

    def run(mod):
        def body():
            for _ in range(50):
                mod.knn_scores(train, labels, query, 3, 3)
        return body

    rows = []
    base = _best_of(run(fallback), repeats)
    rows.append(("knn_scores", "fallback", base, 1.0))
    if _core is not None:
        t = _best_of(run(_core), repeats)
        rows.append(("knn_scores", "compiled", t, base / t))
    return rows


def bench_search(repeats):
    # End-to-end: one small search run per backend, forcing the backend
    # through a fresh interpreter would be cleaner, but monkeypatching the
    # kernel module is enough because classify resolves it at call time.
    import featsel._kernels as kernels
    from featsel.classify import ClassifierSpec
    from featsel.data import Dataset, stratified_kfold
    from featsel.search import SearchConfig, gadp_run

    rng = np.random.default_rng(2)
    X = rng.random((120, 20))
    y = (X[:, [3, 8, 14]].sum(axis=1) > 1.5).astype(np.int64)
    ds = Dataset(features=X, labels=y, n_classes=2)
    folds = stratified_kfold(ds, 5, seed=0)
    spec = ClassifierSpec(kind="knn", k=3)
    cfg = SearchConfig(population=20, max_iterations=8, patience=4, seed=0)

    original = (kernels.contingency_table, kernels.knn_scores)

    def run(mod):
        def body():
            kernels.contingency_table = mod.contingency_table
            kernels.knn_scores = mod.knn_scores
            gadp_run(ds, list(range(20)), spec, folds, cfg)
        return body

    rows = []
    try:
        base = _best_of(run(fallback), repeats)
        rows.append(("gadp_run (end to end)", "fallback", base, 1.0))
        if _core is not None:
            t = _best_of(run(_core), repeats)
            rows.append(("gadp_run (end to end)", "compiled", t, base / t))
    finally:
        kernels.contingency_table, kernels.knn_scores = original
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3,
                        help="timing repeats, best-of (default 3)")
    args = parser.parse_args()
    if _core is None:
        print("note: compiled kernels unavailable, timing fallback only")
    rows = []
    rows += bench_contingency(args.repeats)
    rows += bench_knn(args.repeats)
    rows += bench_search(args.repeats)
    width = max(len(r[0]) for r in rows)
    print(f"{'benchmark':<{width}}  {'backend':<8}  {'seconds':>9}  {'speedup':>7}")
    for name, backend, seconds, speedup in rows:
        print(f"{name:<{width}}  {backend:<8}  {seconds:9.4f}  {speedup:6.2f}x")


if __name__ == "__main__":
    main()
