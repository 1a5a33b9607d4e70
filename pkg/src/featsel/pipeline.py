"""Experiment orchestration: the two-layer pipeline (filter stage, then
population search, then a cross-validated report), batch benchmarking over
datasets x variants x classifiers, and table rendering.

A benchmark plan is a plain INI file:

    [plan]
    datasets = iris.csv, wine.csv
    label_col = label
    classifiers = knn, gnb
    k = 3
    folds = 5
    bins = 10
    repeats = 1
    seed = 0
    reference = mrmr+gadp
    outdir = results

    [variant.mrmr+gadp]
    filter = mrmr
    search = gadp
    top = 70
    population = 50
    iterations = 50
    patience = 10
    init_prob = 0.65
    clamp = 0,1
    discard_frac = 0.33333333333333333

Outputs land under <outdir>/<dataset>/<variant>/<classifier>/ as report.csv,
selection.txt, history.csv (search variants only), and timing.csv. Wall
times live only in timing.csv so that everything else is byte-reproducible
across reruns with the same seed. Summary tables (summary.csv, summary.md)
carry a paired t-test verdict per cell against the reference variant and a
final W/T/L row, written as +/=/- in the markdown view.
"""

import configparser
import csv
import dataclasses
import os
import time
import traceback
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .classify import ClassifierSpec, EvaluationReport, evaluate_subset
from .data import Dataset, FoldPlan, discretize, load_csv, normalize_dataset, stratified_kfold
from .metrics import TTestResult, paired_t_test
from .mrmr import rank
from .search import SearchConfig, SearchResult, ga_run, gadp_run

__all__ = [
    "VariantSpec",
    "ExperimentPlan",
    "parse_plan",
    "PipelineResult",
    "run_pipeline",
    "BenchmarkResult",
    "run_benchmark",
    "info",
    "worker_count",
]

FILTER_KINDS = ("mrmr", "full")
SEARCH_KINDS = ("none", "gadp", "ga")

_SYMBOL = {"win": "+", "tie": "=", "loss": "-"}


@dataclass(frozen=True)
class VariantSpec:
    """One pipeline configuration: filter stage + optional search stage."""

    name: str
    filter_kind: str = "mrmr"
    search_kind: str = "gadp"
    top: int = 70
    search: SearchConfig = dataclasses.field(default_factory=SearchConfig)

    def __post_init__(self):
        if not self.name:
            raise ValueError("variant name must be non-empty")
        if self.filter_kind not in FILTER_KINDS:
            raise ValueError(f"filter must be one of {FILTER_KINDS}, got {self.filter_kind!r}")
        if self.search_kind not in SEARCH_KINDS:
            raise ValueError(f"search must be one of {SEARCH_KINDS}, got {self.search_kind!r}")
        if self.top < 1:
            raise ValueError("top must be >= 1")


@dataclass(frozen=True)
class ExperimentPlan:
    datasets: Tuple[str, ...]
    variants: Tuple[VariantSpec, ...]
    classifiers: Tuple[ClassifierSpec, ...]
    label_column: str = "label"
    k_folds: int = 5
    bins: int = 10
    repeats: int = 1
    seed: int = 0
    reference: str = ""
    outdir: str = "results"

    def __post_init__(self):
        if not self.datasets:
            raise ValueError("plan needs at least one dataset")
        if not self.variants:
            raise ValueError("plan needs at least one variant")
        if not self.classifiers:
            raise ValueError("plan needs at least one classifier")
        names = [v.name for v in self.variants]
        if len(set(names)) != len(names):
            raise ValueError("variant names must be unique")
        ref = self.reference or names[0]
        if ref not in names:
            raise ValueError(f"reference variant {ref!r} is not defined")
        object.__setattr__(self, "reference", ref)
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")
        for path in self.datasets:
            if not Path(path).is_file():
                raise FileNotFoundError(f"dataset file not found: {path}")


def _split_list(raw: str) -> List[str]:
    parts = [p.strip() for chunk in raw.splitlines() for p in chunk.split(",")]
    return [p for p in parts if p]


def _parse_clamp(raw: str) -> Tuple[float, float]:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 2:
        raise ValueError(f"clamp must be 'lo,hi', got {raw!r}")
    return float(parts[0]), float(parts[1])


def _variant_from_section(name: str, section, plan_seed: int) -> VariantSpec:
    cfg = SearchConfig(
        population=section.getint("population", 50),
        max_iterations=section.getint("iterations", 50),
        patience=section.getint("patience", 10),
        discard_fraction=section.getfloat("discard_frac", 1.0 / 3.0),
        init_prob=section.getfloat("init_prob", 0.65),
        clamp=_parse_clamp(section.get("clamp", "0,1")),
        seed=plan_seed,
    )
    return VariantSpec(
        name=name,
        filter_kind=section.get("filter", "mrmr"),
        search_kind=section.get("search", "gadp"),
        top=section.getint("top", 70),
        search=cfg,
    )


def parse_plan(path, base_dir: Optional[str] = None) -> ExperimentPlan:
    """Read an INI benchmark plan. Relative dataset and output paths are
    resolved against the plan file's directory."""
    path = Path(path)
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    read = parser.read(path)
    if not read:
        raise FileNotFoundError(f"plan file not found: {path}")
    if "plan" not in parser:
        raise ValueError("plan file must contain a [plan] section")
    plan_sec = parser["plan"]
    base = Path(base_dir) if base_dir is not None else path.parent

    def resolve(p: str) -> str:
        q = Path(p)
        return str(q if q.is_absolute() else base / q)

    datasets = tuple(resolve(p) for p in _split_list(plan_sec.get("datasets", "")))
    seed = plan_sec.getint("seed", 0)
    default_k = plan_sec.getint("k", 3)
    classifiers = []
    for item in _split_list(plan_sec.get("classifiers", "knn")):
        if ":" in item:
            kind, k_raw = item.split(":", 1)
            classifiers.append(ClassifierSpec(kind=kind.strip(), k=int(k_raw)))
        else:
            classifiers.append(ClassifierSpec(kind=item, k=default_k))
    variants = []
    for sec_name in parser.sections():
        if sec_name.startswith("variant."):
            variants.append(_variant_from_section(
                sec_name[len("variant."):], parser[sec_name], seed))
    return ExperimentPlan(
        datasets=datasets,
        variants=tuple(variants),
        classifiers=tuple(classifiers),
        label_column=plan_sec.get("label_col", "label"),
        k_folds=plan_sec.getint("folds", 5),
        bins=plan_sec.getint("bins", 10),
        repeats=plan_sec.getint("repeats", 1),
        seed=seed,
        reference=plan_sec.get("reference", ""),
        outdir=resolve(plan_sec.get("outdir", "results")),
    )


@dataclass(frozen=True)
class PipelineResult:
    variant: str
    selected: Tuple[int, ...]
    report: EvaluationReport
    search_result: Optional[SearchResult]
    timings: Dict[str, float]
    folds: FoldPlan


def run_pipeline(ds: Dataset, variant: VariantSpec, spec: ClassifierSpec,
                 cfg: Optional[SearchConfig] = None, seed: int = 0, *,
                 k_folds: int = 5, bins: int = 10,
                 folds: Optional[FoldPlan] = None) -> PipelineResult:
    """Normalize, optionally rank and keep the top features by the
    relevance-minus-redundancy criterion, optionally run a population
    search over the survivors, and report cross-validated metrics for the
    final subset. Per-stage wall times are returned alongside."""
    cfg = cfg if cfg is not None else (variant.search or SearchConfig())
    cfg = dataclasses.replace(cfg, seed=seed)
    timings: Dict[str, float] = {}

    t0 = time.perf_counter()
    norm = normalize_dataset(ds)
    timings["normalize"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if folds is None:
        folds = stratified_kfold(ds, k_folds, seed)
    timings["folds"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if variant.filter_kind == "mrmr":
        disc = discretize(norm, n_bins=bins)
        top = min(variant.top, ds.n_features)
        candidates = rank(disc, ds.labels, top)
    else:
        candidates = list(range(ds.n_features))
    timings["filter"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    search_result: Optional[SearchResult] = None
    if variant.search_kind == "none":
        selected = tuple(sorted(candidates))
    else:
        engine = gadp_run if variant.search_kind == "gadp" else ga_run
        search_result = engine(norm, candidates, spec, folds, cfg)
        selected = tuple(sorted(search_result.best.decode(candidates)))
    timings["search"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    report = evaluate_subset(norm, selected, spec, folds)
    timings["evaluate"] = time.perf_counter() - t0
    timings["total"] = sum(timings.values())

    return PipelineResult(variant=variant.name, selected=selected,
                          report=report, search_result=search_result,
                          timings=timings, folds=folds)


def info(ds: Dataset) -> str:
    """Dataset summary line: instances, features, classes, class counts."""
    counts = ds.class_counts()
    body = ", ".join(f"{c}: {int(counts[c])}" for c in range(ds.n_classes))
    return (f"{ds.n_instances} instances, {ds.n_features} features, "
            f"{ds.n_classes} classes, {{{body}}}")


def worker_count() -> int:
    """Worker cap from FEATSEL_THREADS; 0 means one per CPU, default 1."""
    raw = os.environ.get("FEATSEL_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValueError(f"FEATSEL_THREADS must be an integer, got {raw!r}") from exc
    if n < 0:
        raise ValueError("FEATSEL_THREADS must be >= 0")
    if n == 0:
        return os.cpu_count() or 1
    return n


# ---------------------------------------------------------------------------
# Benchmark harness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _CellKey:
    dataset: str       # dataset display name (file stem)
    variant: str
    classifier: str    # e.g. "knn3" or "gnb"
    repeat: int


@dataclass
class _Cell:
    key: _CellKey
    result: Optional[PipelineResult] = None
    error: Optional[str] = None


@dataclass(frozen=True)
class SummaryRow:
    dataset: str
    classifier: str
    variant: str
    mean_accuracy: float
    std_accuracy: float
    mean_f1: float
    std_f1: float
    mean_auc: float
    std_auc: float
    std_over: str          # "folds" or "runs"
    ttest: TTestResult


@dataclass(frozen=True)
class BenchmarkResult:
    rows: Tuple[SummaryRow, ...]
    wtl: Dict[Tuple[str, str], Tuple[int, int, int]]  # (variant, classifier) -> W/T/L
    failures: Tuple[str, ...]
    outdir: str

    @property
    def ok(self) -> bool:
        return not self.failures


def _classifier_name(spec: ClassifierSpec) -> str:
    return f"knn{spec.k}" if spec.kind == "knn" else spec.kind


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_report_csv(path: Path, report: EvaluationReport) -> None:
    rows = [[i + 1, _fmt(a), _fmt(f), _fmt(u)]
            for i, (a, f, u) in enumerate(zip(report.fold_accuracy,
                                              report.fold_f1, report.fold_auc))]
    rows.append(["mean", _fmt(report.mean_accuracy), _fmt(report.mean_f1),
                 _fmt(report.mean_auc)])
    rows.append(["std", _fmt(report.std_accuracy), _fmt(report.std_f1),
                 _fmt(report.std_auc)])
    _write_csv(path, ["fold", "accuracy", "macro_f1", "macro_auc"], rows)


def write_history_csv(path: Path, result: SearchResult) -> None:
    rows = [[rec.generation, _fmt(rec.best_fitness), _fmt(rec.mean_fitness),
             _fmt(rec.entropy)] for rec in result.history]
    _write_csv(path, ["generation", "best_fitness", "mean_fitness", "entropy"], rows)


def write_selection(path: Path, selected: Sequence[int], ds: Dataset) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{i},{ds.feature_name(i)}" for i in selected]
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def write_timing_csv(path: Path, timings: Dict[str, float]) -> None:
    _write_csv(path, ["stage", "seconds"],
               [[stage, _fmt(seconds)] for stage, seconds in timings.items()])


def _cell_dir(outdir: Path, key: _CellKey, repeats: int) -> Path:
    d = outdir / key.dataset / key.variant / key.classifier
    if repeats > 1:
        d = d / f"rep{key.repeat}"
    return d


def _run_cell(ds: Dataset, variant: VariantSpec, spec: ClassifierSpec,
              folds: FoldPlan, seed: int) -> PipelineResult:
    return run_pipeline(ds, variant, spec, cfg=variant.search, seed=seed,
                        folds=folds)


def _pool_scores(cells: List[_Cell], metric: str) -> List[float]:
    pooled: List[float] = []
    for cell in cells:
        pooled.extend(getattr(cell.result.report, metric))
    return pooled


def _mean_std(cells: List[_Cell], metric: str, repeats: int) -> Tuple[float, float, str]:
    pooled = _pool_scores(cells, metric)
    mean = float(np.mean(pooled))
    if repeats > 1:
        per_run = [float(np.mean(getattr(c.result.report, metric))) for c in cells]
        return mean, float(np.std(per_run)), "runs"
    return mean, float(np.std(pooled)), "folds"


def run_benchmark(plan: ExperimentPlan) -> BenchmarkResult:
    """Execute every dataset x variant x classifier x repeat cell, write
    per-cell artifacts and the summary tables, and return the aggregate.

    Failures are isolated per cell (a broken dataset skips only its own
    cells) and recorded in errors.log. All variants of one dataset/repeat
    share an identical fold plan so the paired t-tests stay valid.
    """
    outdir = Path(plan.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    cells: List[_Cell] = []
    failures: List[str] = []
    loaded: Dict[str, Tuple[Dataset, List[FoldPlan]]] = {}

    for path in plan.datasets:
        name = Path(path).stem
        try:
            ds = load_csv(path, label_column=plan.label_column)
            folds = [stratified_kfold(ds, plan.k_folds, plan.seed + r)
                     for r in range(plan.repeats)]
            loaded[name] = (ds, folds)
        except Exception as exc:  # noqa: BLE001 - isolation requires broad catch
            failures.append(f"{name}: {exc}")
            continue
        for variant in plan.variants:
            for spec in plan.classifiers:
                for r in range(plan.repeats):
                    cells.append(_Cell(key=_CellKey(
                        dataset=name, variant=variant.name,
                        classifier=_classifier_name(spec), repeat=r)))

    variant_by_name = {v.name: v for v in plan.variants}
    spec_by_name = {_classifier_name(s): s for s in plan.classifiers}

    def execute(cell: _Cell) -> None:
        ds, folds = loaded[cell.key.dataset]
        try:
            cell.result = _run_cell(ds, variant_by_name[cell.key.variant],
                                    spec_by_name[cell.key.classifier],
                                    folds[cell.key.repeat],
                                    plan.seed + cell.key.repeat)
        except Exception:  # noqa: BLE001 - isolation requires broad catch
            cell.error = traceback.format_exc(limit=3).strip()

    workers = worker_count()
    if workers > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(execute, cells))
    else:
        for cell in cells:
            execute(cell)

    # Sequential assembly in deterministic order.
    for cell in sorted(cells, key=lambda c: (c.key.dataset, c.key.variant,
                                             c.key.classifier, c.key.repeat)):
        if cell.error is not None:
            failures.append(f"{cell.key.dataset}/{cell.key.variant}/"
                            f"{cell.key.classifier}/rep{cell.key.repeat}: {cell.error}")
            continue
        d = _cell_dir(outdir, cell.key, plan.repeats)
        ds, _ = loaded[cell.key.dataset]
        write_report_csv(d / "report.csv", cell.result.report)
        write_selection(d / "selection.txt", cell.result.selected, ds)
        if cell.result.search_result is not None:
            write_history_csv(d / "history.csv", cell.result.search_result)
        write_timing_csv(d / "timing.csv", cell.result.timings)

    rows: List[SummaryRow] = []
    wtl: Dict[Tuple[str, str], List[int]] = {}
    by_group: Dict[Tuple[str, str, str], List[_Cell]] = {}
    for cell in cells:
        if cell.error is None and cell.result is not None:
            by_group.setdefault((cell.key.dataset, cell.key.classifier,
                                 cell.key.variant), []).append(cell)

    for (dataset, classifier, variant), group in sorted(by_group.items()):
        group.sort(key=lambda c: c.key.repeat)
        ref_group = by_group.get((dataset, classifier, plan.reference))
        acc_mean, acc_std, std_over = _mean_std(group, "fold_accuracy", plan.repeats)
        f1_mean, f1_std, _ = _mean_std(group, "fold_f1", plan.repeats)
        auc_mean, auc_std, _ = _mean_std(group, "fold_auc", plan.repeats)
        if ref_group is not None and len(ref_group) == len(group):
            ref_group = sorted(ref_group, key=lambda c: c.key.repeat)
            ttest = paired_t_test(_pool_scores(group, "fold_accuracy"),
                                  _pool_scores(ref_group, "fold_accuracy"))
        else:
            ttest = TTestResult(float("nan"), float("nan"), "tie")
        rows.append(SummaryRow(dataset=dataset, classifier=classifier,
                               variant=variant, mean_accuracy=acc_mean,
                               std_accuracy=acc_std, mean_f1=f1_mean,
                               std_f1=f1_std, mean_auc=auc_mean,
                               std_auc=auc_std, std_over=std_over, ttest=ttest))
        counts = wtl.setdefault((variant, classifier), [0, 0, 0])
        counts[{"win": 0, "tie": 1, "loss": 2}[ttest.verdict]] += 1

    wtl_final = {k: (v[0], v[1], v[2]) for k, v in wtl.items()}
    _write_summary_csv(outdir / "summary.csv", rows, wtl_final)
    _write_summary_md(outdir / "summary.md", rows, wtl_final, plan.reference)
    if failures:
        (outdir / "errors.log").write_text(
            "\n".join(sorted(failures)) + "\n", encoding="utf-8")
    return BenchmarkResult(rows=tuple(rows), wtl=wtl_final,
                           failures=tuple(sorted(failures)), outdir=str(outdir))


def _write_summary_csv(path: Path, rows: Sequence[SummaryRow],
                       wtl: Dict[Tuple[str, str], Tuple[int, int, int]]) -> None:
    header = ["dataset", "classifier", "variant", "mean_accuracy", "std_accuracy",
              "mean_f1", "std_f1", "mean_auc", "std_auc", "std_over",
              "t_stat", "p_value", "verdict"]
    out_rows: List[List] = []
    for r in rows:
        out_rows.append([r.dataset, r.classifier, r.variant,
                         _fmt(r.mean_accuracy), _fmt(r.std_accuracy),
                         _fmt(r.mean_f1), _fmt(r.std_f1),
                         _fmt(r.mean_auc), _fmt(r.std_auc), r.std_over,
                         _fmt(r.ttest.t), _fmt(r.ttest.p_value), r.ttest.verdict])
    for (variant, classifier), (w, t, l) in sorted(wtl.items()):
        out_rows.append(["W/T/L", classifier, variant, "", "", "", "", "", "",
                         "", "", "", f"{w}/{t}/{l}"])
    _write_csv(path, header, out_rows)


def _write_summary_md(path: Path, rows: Sequence[SummaryRow],
                      wtl: Dict[Tuple[str, str], Tuple[int, int, int]],
                      reference: str) -> None:
    """Markdown table: one row per dataset, one column per variant x
    classifier cell holding mean+-std and the +/=/- verdict symbol, with a
    closing W/T/L row."""
    columns = sorted({(r.variant, r.classifier) for r in rows})
    datasets = sorted({r.dataset for r in rows})
    cell_by = {(r.dataset, r.variant, r.classifier): r for r in rows}
    col_names = [f"{v} ({c})" for v, c in columns]
    lines = ["| dataset | " + " | ".join(col_names) + " |",
             "|" + "---|" * (len(columns) + 1)]
    for dataset in datasets:
        parts = []
        for v, c in columns:
            r = cell_by.get((dataset, v, c))
            if r is None:
                parts.append("failed")
            else:
                parts.append(f"{r.mean_accuracy:.4f}+-{r.std_accuracy:.4f} "
                             f"{_SYMBOL[r.ttest.verdict]}")
        lines.append(f"| {dataset} | " + " | ".join(parts) + " |")
    wtl_parts = []
    for v, c in columns:
        w, t, l = wtl.get((v, c), (0, 0, 0))
        wtl_parts.append(f"{w}/{t}/{l}")
    lines.append("| W/T/L | " + " | ".join(wtl_parts) + " |")
    lines.append("")
    lines.append(f"Verdicts are paired t-tests at the 5% level against "
                 f"reference variant `{reference}`.")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
