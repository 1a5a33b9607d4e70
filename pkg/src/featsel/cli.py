"""Command-line front end.

Subcommands:
  rank    score features by the relevance-minus-redundancy criterion
  select  run the full pipeline (filter + population search) on one dataset
  bench   execute a benchmark plan across datasets/variants/classifiers
  info    print a dataset summary line

Exit code 0 on full success, 1 on any failure. FEATSEL_THREADS caps the
benchmark worker count (0 = one per CPU); FEATSEL_PURE_PYTHON=1 forces the
pure-Python compute kernels.
"""

import argparse
import sys
from pathlib import Path

from . import __version__
from ._kernels import BACKEND
from .classify import ClassifierSpec
from .data import discretize, load_csv, normalize_dataset
from .mrmr import rank_detailed
from .pipeline import (VariantSpec, info, parse_plan, run_benchmark,
                       run_pipeline, worker_count, write_history_csv,
                       write_report_csv, write_selection, write_timing_csv)
from .search import SearchConfig


def _clamp_pair(raw: str):
    parts = raw.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'lo,hi', got {raw!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    return lo, hi


def _add_dataset_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dataset", required=True, help="CSV file with a label column")
    p.add_argument("--label-col", default="label",
                   help="label column name, or integer position (default: label)")


def _add_search_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--population", type=int, default=50)
    p.add_argument("--iterations", type=int, default=50)
    p.add_argument("--patience", type=int, default=10)
    p.add_argument("--init-prob", type=float, default=0.65)
    p.add_argument("--clamp", type=_clamp_pair, default=(0.0, 1.0),
                   metavar="LO,HI", help="gene probability bounds (default: 0,1)")
    p.add_argument("--discard-frac", type=float, default=1.0 / 3.0)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="featsel",
        description="Feature selection: mutual-information filtering plus "
                    "probability-vector population search.")
    parser.add_argument("--version", action="version",
                        version=f"featsel {__version__} ({BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_rank = sub.add_parser("rank", help="rank features by relevance minus redundancy")
    _add_dataset_args(p_rank)
    p_rank.add_argument("--top", type=int, default=70)
    p_rank.add_argument("--bins", type=int, default=10)
    p_rank.add_argument("--out", default=None, help="output CSV (default: stdout)")

    p_sel = sub.add_parser("select", help="filter + search + cross-validated report")
    _add_dataset_args(p_sel)
    p_sel.add_argument("--classifier", choices=("gnb", "knn"), default="knn")
    p_sel.add_argument("--k", type=int, default=3, help="neighbor count for knn")
    p_sel.add_argument("--top", type=int, default=70)
    p_sel.add_argument("--bins", type=int, default=10)
    p_sel.add_argument("--folds", type=int, default=5)
    p_sel.add_argument("--filter", choices=("mrmr", "full"), default="mrmr")
    p_sel.add_argument("--engine", choices=("gadp", "ga", "none"), default="gadp")
    _add_search_args(p_sel)
    p_sel.add_argument("--outdir", default="featsel-out")

    p_bench = sub.add_parser("bench", help="run a benchmark plan file")
    p_bench.add_argument("--plan", required=True)
    p_bench.add_argument("--outdir", default=None,
                         help="override the plan's output directory")

    p_info = sub.add_parser("info", help="dataset summary")
    _add_dataset_args(p_info)
    return parser


def _cmd_rank(args) -> int:
    ds = load_csv(args.dataset, label_column=args.label_col)
    disc = discretize(normalize_dataset(ds), n_bins=args.bins)
    top = min(args.top, ds.n_features)
    ranked = rank_detailed(disc, ds.labels, top)
    lines = ["rank,feature,relevance,score"]
    for pos, rf in enumerate(ranked, start=1):
        lines.append(f"{pos},{ds.feature_name(rf.index)},"
                     f"{rf.relevance!r},{rf.score!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_select(args) -> int:
    ds = load_csv(args.dataset, label_column=args.label_col)
    spec = ClassifierSpec(kind=args.classifier, k=args.k)
    cfg = SearchConfig(population=args.population, max_iterations=args.iterations,
                       patience=args.patience, discard_fraction=args.discard_frac,
                       init_prob=args.init_prob, clamp=args.clamp, seed=args.seed)
    variant = VariantSpec(name=f"{args.filter}+{args.engine}",
                          filter_kind=args.filter, search_kind=args.engine,
                          top=args.top, search=cfg)
    result = run_pipeline(ds, variant, spec, cfg=cfg, seed=args.seed,
                          k_folds=args.folds, bins=args.bins)
    outdir = Path(args.outdir)
    write_selection(outdir / "selection.txt", result.selected, ds)
    write_report_csv(outdir / "report.csv", result.report)
    if result.search_result is not None:
        write_history_csv(outdir / "history.csv", result.search_result)
    write_timing_csv(outdir / "timing.csv", result.timings)

    rep = result.report
    print(f"selected {len(result.selected)} features: "
          + ",".join(str(i) for i in result.selected))
    if result.search_result is not None:
        sr = result.search_result
        print(f"search: {sr.generations_run} generations, "
              f"{sr.n_evaluations} evaluations, stop={sr.stop_reason}, "
              f"best fitness {sr.best_fitness:.6f}")
    print(f"cv accuracy {rep.mean_accuracy:.6f} +- {rep.std_accuracy:.6f}, "
          f"macro-F1 {rep.mean_f1:.6f}, macro-AUC {rep.mean_auc:.6f}")
    print(f"outputs written to {outdir}")
    return 0


def _cmd_bench(args) -> int:
    plan = parse_plan(args.plan)
    if args.outdir is not None:
        import dataclasses
        plan = dataclasses.replace(plan, outdir=args.outdir)
    print(f"benchmark: {len(plan.datasets)} dataset(s), "
          f"{len(plan.variants)} variant(s), {len(plan.classifiers)} "
          f"classifier(s), {plan.repeats} repeat(s), "
          f"{worker_count()} worker(s)")
    result = run_benchmark(plan)
    print(f"summary written to {result.outdir}/summary.csv and summary.md")
    for (variant, classifier), (w, t, l) in sorted(result.wtl.items()):
        print(f"  {variant} ({classifier}): W/T/L = {w}/{t}/{l}")
    if result.failures:
        print(f"{len(result.failures)} cell(s) failed; see "
              f"{result.outdir}/errors.log", file=sys.stderr)
        return 1
    return 0


def _cmd_info(args) -> int:
    ds = load_csv(args.dataset, label_column=args.label_col)
    print(info(ds))
    return 0


_COMMANDS = {
    "rank": _cmd_rank,
    "select": _cmd_select,
    "bench": _cmd_bench,
    "info": _cmd_info,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (OSError, ValueError, IndexError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
