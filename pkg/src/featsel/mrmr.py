"""Greedy minimum-redundancy maximum-relevance ranking of features against the
class label; the pipeline's global filter layer."""

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from .data import DiscreteDataset
from .infotheory import _as_symbols, mutual_information

__all__ = ["TIE_TOL", "MrmrState", "score_candidate", "RankedFeature",
           "rank_detailed", "rank"]

# Scores within this distance of the step maximum count as tied, and the
# lowest feature index wins. Keeps the argmax stable across mathematically
# equivalent evaluation orders of the same sums.
TIE_TOL = 1e-12


@dataclass
class MrmrState:
    """Mutable state of one greedy ranking run.

    redundancy_sum[f] accumulates sum over selected s of I(f_s; f_f), so a
    candidate's mean redundancy is always redundancy_sum[f] / |selected|.
    """

    selected: List[int]
    remaining: List[int]
    relevance: np.ndarray
    columns: List[np.ndarray] = field(repr=False)
    pairwise_cache: Dict[Tuple[int, int], float] = field(default_factory=dict)
    redundancy_sum: np.ndarray = None

    def __post_init__(self):
        if self.redundancy_sum is None:
            self.redundancy_sum = np.zeros(len(self.relevance))

    @classmethod
    def initial(cls, ds: DiscreteDataset, labels) -> "MrmrState":
        """Relevance of every feature computed, nothing selected yet."""
        y, _ = _as_symbols(labels)
        if y.size != ds.bins.shape[0]:
            raise ValueError("labels length does not match the dataset rows")
        columns = [np.ascontiguousarray(ds.bins[:, j]) for j in range(ds.n_features)]
        relevance = np.array([mutual_information(col, y) for col in columns])
        return cls(selected=[], remaining=list(range(ds.n_features)),
                   relevance=relevance, columns=columns)

    def select(self, f: int) -> None:
        """Move f to the selected list and fold its pairwise mutual
        information into every remaining candidate's redundancy sum."""
        if f not in self.remaining:
            raise ValueError(f"feature {f} is not a remaining candidate")
        self.remaining.remove(f)
        self.selected.append(f)
        for g in self.remaining:
            mi = self.pairwise_cache.get((f, g))
            if mi is None:
                mi = mutual_information(self.columns[f], self.columns[g])
                self.pairwise_cache[(f, g)] = mi
            self.redundancy_sum[g] += mi


def score_candidate(f: int, state: MrmrState) -> float:
    """Relevance of f minus its mean pairwise redundancy with the selected set."""
    if f in state.selected:
        raise ValueError(f"feature {f} is already selected")
    if f not in state.remaining:
        raise ValueError(f"feature {f} is not a remaining candidate")
    if not state.selected:
        raise ValueError("selected set is empty; the seed feature is chosen by relevance")
    return float(state.relevance[f] - state.redundancy_sum[f] / len(state.selected))


def _pick_max(candidates: List[int], scores) -> int:
    """Lowest candidate index whose score is within TIE_TOL of the maximum."""
    best = max(scores[f] for f in candidates)
    for f in candidates:
        if scores[f] >= best - TIE_TOL:
            return f
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class RankedFeature:
    index: int
    relevance: float
    score: float


def rank_detailed(ds: DiscreteDataset, labels, top: int) -> List[RankedFeature]:
    """Greedy ranking with the per-step selection scores retained.

    The seed feature is the relevance maximum and its reported score is
    that relevance; each later pick maximizes relevance minus mean mutual
    information with the already-selected set.
    """
    if not 1 <= top <= ds.n_features:
        raise ValueError(f"top must be in [1, {ds.n_features}], got {top}")
    state = MrmrState.initial(ds, labels)
    seed = _pick_max(state.remaining, state.relevance)
    ranked = [RankedFeature(seed, float(state.relevance[seed]),
                            float(state.relevance[seed]))]
    state.select(seed)
    while len(state.selected) < top:
        scores = {f: score_candidate(f, state) for f in state.remaining}
        pick = _pick_max(state.remaining, scores)
        ranked.append(RankedFeature(pick, float(state.relevance[pick]),
                                    scores[pick]))
        state.select(pick)
    return ranked


def rank(ds: DiscreteDataset, labels, top: int) -> List[int]:
    """Indices of the top features, most relevant-and-novel first."""
    return [rf.index for rf in rank_detailed(ds, labels, top)]
