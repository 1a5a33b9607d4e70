"""featsel: mutual-information feature filtering plus probability-vector
population search, with built-in classifiers and a benchmark harness."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .classify import ClassifierSpec, EvaluationReport, evaluate_subset, subset_fitness
from .data import (Dataset, DiscreteDataset, FoldPlan, discretize, load_csv,
                   normalize_dataset, stratified_kfold)
from .infotheory import conditional_entropy, entropy, mutual_information
from .metrics import macro_auc_ovr, macro_f1, paired_t_test
from .mrmr import rank, rank_detailed
from .pipeline import ExperimentPlan, VariantSpec, parse_plan, run_benchmark, run_pipeline
from .search import SearchConfig, SearchResult, ga_run, gadp_run, gene_entropy

__all__ = [
    "__version__",
    "BACKEND",
    "ClassifierSpec",
    "EvaluationReport",
    "evaluate_subset",
    "subset_fitness",
    "Dataset",
    "DiscreteDataset",
    "FoldPlan",
    "discretize",
    "load_csv",
    "normalize_dataset",
    "stratified_kfold",
    "entropy",
    "conditional_entropy",
    "mutual_information",
    "macro_f1",
    "macro_auc_ovr",
    "paired_t_test",
    "rank",
    "rank_detailed",
    "SearchConfig",
    "SearchResult",
    "gadp_run",
    "ga_run",
    "gene_entropy",
    "ExperimentPlan",
    "VariantSpec",
    "parse_plan",
    "run_benchmark",
    "run_pipeline",
]
