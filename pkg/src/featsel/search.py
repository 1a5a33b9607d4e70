"""Population search over feature subsets.

Two engines share one result shape: a probability-vector search that
resamples every generation from per-gene inclusion probabilities updated
to the survivor frequencies (no crossover, no mutation, no elite carried
into the population), and a classical genetic algorithm baseline with
tournament selection, single-point crossover, and bit-flip mutation.

Chromosomes are bit vectors over a candidate feature list; gene g set
means candidates[g] joins the evaluated subset. Fitness is mean
cross-validated accuracy.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .classify import ClassifierSpec, subset_fitness
from .data import Dataset, FoldPlan

__all__ = [
    "Chromosome",
    "GeneProbabilities",
    "SearchConfig",
    "GenerationRecord",
    "SearchResult",
    "sample_population",
    "select_survivors",
    "update_probabilities",
    "gene_entropy",
    "chromosome_entropy",
    "gadp_run",
    "ga_run",
]

log = logging.getLogger(__name__)

STOP_MAX_ITERATIONS = "max_iterations"
STOP_PATIENCE = "patience"

# Baseline GA operator constants. The comparison protocol fixes only the
# population and iteration budget, so these are ordinary textbook choices.
GA_TOURNAMENT_SIZE = 2
GA_CROSSOVER_RATE = 0.9
GA_ELITE_COUNT = 1
GA_INIT_PROB = 0.5


@dataclass
class Chromosome:
    """Bit vector over the candidate list, with fitness once evaluated."""

    genes: np.ndarray
    fitness: Optional[float] = None

    def __post_init__(self):
        genes = np.ascontiguousarray(self.genes, dtype=np.uint8)
        if genes.ndim != 1 or genes.size == 0:
            raise ValueError("genes must be a non-empty 1-D bit vector")
        if genes.max(initial=0) > 1:
            raise ValueError("genes must be 0/1 valued")
        object.__setattr__(self, "genes", genes)

    @property
    def n_genes(self) -> int:
        return self.genes.size

    def decode(self, candidates: Sequence[int]) -> Tuple[int, ...]:
        """The feature subset this chromosome stands for."""
        if len(candidates) != self.genes.size:
            raise ValueError("candidate list length must equal gene count")
        return tuple(int(candidates[g]) for g in np.flatnonzero(self.genes))

    def copy(self) -> "Chromosome":
        return Chromosome(genes=self.genes.copy(), fitness=self.fitness)


@dataclass(frozen=True)
class GeneProbabilities:
    """Per-gene inclusion probabilities with the active clamp interval."""

    p: np.ndarray
    clamp: Tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        p = np.ascontiguousarray(self.p, dtype=np.float64)
        lo, hi = self.clamp
        if not (0.0 <= lo < hi <= 1.0):
            raise ValueError(f"clamp must satisfy 0 <= lo < hi <= 1, got {self.clamp}")
        if p.ndim != 1 or p.size == 0:
            raise ValueError("p must be a non-empty 1-D vector")
        if p.min() < 0.0 or p.max() > 1.0:
            raise ValueError("probabilities must lie in [0, 1]")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "clamp", (float(lo), float(hi)))

    @property
    def n_genes(self) -> int:
        return self.p.size

    @classmethod
    def uniform(cls, n_genes: int, value: float,
                clamp: Tuple[float, float] = (0.0, 1.0)) -> "GeneProbabilities":
        return cls(p=np.full(n_genes, float(value)), clamp=clamp)


@dataclass(frozen=True)
class SearchConfig:
    population: int = 50
    max_iterations: int = 50
    patience: int = 10
    discard_fraction: float = 1.0 / 3.0
    init_prob: float = 0.65
    clamp: Tuple[float, float] = (0.0, 1.0)
    seed: int = 0
    # Accepted for config compatibility; no effect on the search (the
    # source protocol lists the knob without ever applying it).
    max_features: Optional[int] = None

    def __post_init__(self):
        if self.population < 1:
            raise ValueError("population must be >= 1")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")
        if self.patience < 1:
            raise ValueError("patience must be >= 1")
        if not 0.0 < self.discard_fraction < 1.0:
            raise ValueError("discard_fraction must lie in (0, 1)")
        if not 0.0 < self.init_prob < 1.0:
            raise ValueError("init_prob must lie in (0, 1)")
        lo, hi = self.clamp
        if not (0.0 <= lo < hi <= 1.0):
            raise ValueError(f"clamp must satisfy 0 <= lo < hi <= 1, got {self.clamp}")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.max_features is not None:
            if self.max_features < 1:
                raise ValueError("max_features must be >= 1 when set")
            log.warning("max_features is accepted but has no effect on the search")


@dataclass(frozen=True)
class GenerationRecord:
    generation: int            # 1-based
    best_fitness: float        # best-so-far after this generation
    mean_fitness: float        # mean fitness of this generation's population
    probabilities: np.ndarray  # vector this generation was sampled from
    entropy: float             # sum of gene entropies of that vector


@dataclass(frozen=True)
class SearchResult:
    best: Chromosome
    history: Tuple[GenerationRecord, ...]
    generations_run: int
    stop_reason: str
    n_evaluations: int

    @property
    def best_fitness(self) -> float:
        return float(self.best.fitness)

    def best_subset(self, candidates: Sequence[int]) -> Tuple[int, ...]:
        return self.best.decode(candidates)


def sample_population(probs: GeneProbabilities, n: int,
                      rng: np.random.Generator) -> List[Chromosome]:
    """n chromosomes with each gene drawn independently Bernoulli(p_g)."""
    if n < 1:
        raise ValueError("population size must be >= 1")
    bits = (rng.random((n, probs.n_genes)) < probs.p).astype(np.uint8)
    return [Chromosome(genes=bits[i]) for i in range(n)]


def discard_count(n: int, discard_fraction: float) -> int:
    """floor(n * discard_fraction), nudged so exact thirds of divisible
    populations do not round down through float error."""
    return int(n * discard_fraction + 1e-9)


def select_survivors(population: Sequence[Chromosome],
                     discard_fraction: float) -> List[Chromosome]:
    """Keep the best n - floor(n*l) chromosomes, fitness descending,
    ties resolved in favor of the lower population index."""
    n = len(population)
    if n == 0:
        raise ValueError("population is empty")
    for i, chrom in enumerate(population):
        if chrom.fitness is None:
            raise ValueError(f"chromosome {i} has no fitness")
    order = sorted(range(n), key=lambda i: (-population[i].fitness, i))
    keep = n - discard_count(n, discard_fraction)
    if keep < 1:
        raise ValueError("discard fraction leaves no survivors")
    return [population[i] for i in order[:keep]]


def update_probabilities(survivors: Sequence[Chromosome],
                         clamp: Tuple[float, float]) -> GeneProbabilities:
    """Survivor gene frequencies, clamped into [lo, hi]."""
    if len(survivors) == 0:
        raise ValueError("survivor list is empty")
    bits = np.stack([c.genes for c in survivors]).astype(np.float64)
    p = bits.mean(axis=0)
    lo, hi = clamp
    return GeneProbabilities(p=np.clip(p, lo, hi), clamp=(lo, hi))


def gene_entropy(p: float) -> float:
    """Bernoulli entropy in nats, -p ln p - (1-p) ln(1-p), with 0 ln 0 = 0."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of [0, 1]: {p}")
    h = 0.0
    if p > 0.0:
        h -= p * math.log(p)
    if p < 1.0:
        h -= (1.0 - p) * math.log(1.0 - p)
    return h


def chromosome_entropy(p: np.ndarray) -> float:
    """Sum of per-gene entropies: the population-level entropy telemetry."""
    return float(math.fsum(gene_entropy(v) for v in np.asarray(p, dtype=np.float64)))


def _generation_rng(seed: int, generation: int) -> np.random.Generator:
    # One independent, reproducible stream per generation, so evaluation
    # order or parallelism can never perturb the sampling draws.
    return np.random.default_rng(np.random.SeedSequence((seed, generation)))


class _FitnessMemo:
    """Evaluate each distinct bit pattern once per run (fitness is pure)."""

    def __init__(self, ds: Dataset, candidates: Sequence[int],
                 spec: ClassifierSpec, folds: FoldPlan):
        self.ds = ds
        self.candidates = list(candidates)
        self.spec = spec
        self.folds = folds
        self.cache: Dict[bytes, float] = {}
        self.n_evaluations = 0

    def __call__(self, chrom: Chromosome) -> float:
        key = chrom.genes.tobytes()
        hit = self.cache.get(key)
        if hit is None:
            hit = subset_fitness(self.ds, chrom.decode(self.candidates),
                                 self.spec, self.folds)
            self.cache[key] = hit
            self.n_evaluations += 1
        return hit


def _validate_candidates(candidates: Sequence[int], n_features: int) -> List[int]:
    cand = [int(i) for i in candidates]
    if not cand:
        raise ValueError("candidate feature list is empty")
    if len(set(cand)) != len(cand):
        raise ValueError("candidate feature list contains duplicates")
    for i in cand:
        if i < 0 or i >= n_features:
            raise IndexError(f"candidate index {i} out of range [0, {n_features})")
    return cand


def _evaluate(population: List[Chromosome], memo: _FitnessMemo) -> None:
    for chrom in population:
        chrom.fitness = memo(chrom)


class _RunState:
    """Best-so-far tracking plus the patience counter, shared by both engines."""

    def __init__(self, patience: int):
        self.patience = patience
        self.best: Optional[Chromosome] = None
        self.stagnant = 0
        self.history: List[GenerationRecord] = []

    def absorb(self, population: List[Chromosome]) -> None:
        improved = False
        for chrom in population:
            if self.best is None or chrom.fitness > self.best.fitness:
                self.best = chrom.copy()
                improved = True
        self.stagnant = 0 if improved else self.stagnant + 1

    def record(self, generation: int, population: List[Chromosome],
               snapshot: np.ndarray) -> None:
        mean_fit = float(np.mean([c.fitness for c in population]))
        self.history.append(GenerationRecord(
            generation=generation,
            best_fitness=float(self.best.fitness),
            mean_fitness=mean_fit,
            probabilities=snapshot.copy(),
            entropy=chromosome_entropy(snapshot),
        ))

    def exhausted_patience(self) -> bool:
        return self.stagnant >= self.patience

    def result(self, stop_reason: str, n_evaluations: int) -> SearchResult:
        return SearchResult(best=self.best, history=tuple(self.history),
                            generations_run=len(self.history),
                            stop_reason=stop_reason,
                            n_evaluations=n_evaluations)


def gadp_run(ds: Dataset, candidates: Sequence[int], spec: ClassifierSpec,
             folds: FoldPlan, cfg: SearchConfig) -> SearchResult:
    """Probability-vector search over subsets of `candidates`.

    Each generation is sampled afresh from the gene probabilities, scored,
    stripped of the worst floor(n*l) chromosomes, and the probabilities are
    replaced by the survivors' gene frequencies (clamped). Only the
    probability vector and the best-ever chromosome persist between
    generations. Stops after `patience` consecutive generations without a
    strict best-fitness improvement, or at the iteration budget. A zero
    budget still samples one generation so the caller always gets a best
    chromosome.
    """
    cand = _validate_candidates(candidates, ds.n_features)
    memo = _FitnessMemo(ds, cand, spec, folds)
    state = _RunState(cfg.patience)
    probs = GeneProbabilities.uniform(len(cand), cfg.init_prob, cfg.clamp)
    budget = max(1, cfg.max_iterations)
    stop_reason = STOP_MAX_ITERATIONS
    for gen in range(1, budget + 1):
        rng = _generation_rng(cfg.seed, gen)
        population = sample_population(probs, cfg.population, rng)
        _evaluate(population, memo)
        state.absorb(population)
        state.record(gen, population, probs.p)
        if state.exhausted_patience():
            stop_reason = STOP_PATIENCE
            break
        if gen == budget:
            break
        survivors = select_survivors(population, cfg.discard_fraction)
        probs = update_probabilities(survivors, cfg.clamp)
    return state.result(stop_reason, memo.n_evaluations)


def _tournament_pick(population: List[Chromosome],
                     rng: np.random.Generator) -> Chromosome:
    idx = rng.integers(0, len(population), size=GA_TOURNAMENT_SIZE)
    best = min(idx, key=lambda i: (-population[i].fitness, i))
    return population[int(best)]


def _crossover(a: Chromosome, b: Chromosome,
               rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    m = a.n_genes
    if m >= 2 and rng.random() < GA_CROSSOVER_RATE:
        cut = int(rng.integers(1, m))
        child1 = np.concatenate([a.genes[:cut], b.genes[cut:]])
        child2 = np.concatenate([b.genes[:cut], a.genes[cut:]])
        return child1, child2
    return a.genes.copy(), b.genes.copy()


def _mutate(genes: np.ndarray, rate: float, rng: np.random.Generator) -> np.ndarray:
    flips = rng.random(genes.size) < rate
    return np.where(flips, 1 - genes, genes).astype(np.uint8)


def _ga_offspring(population: List[Chromosome], n: int, mutation_rate: float,
                  rng: np.random.Generator) -> List[Chromosome]:
    elite_order = sorted(range(len(population)),
                         key=lambda i: (-population[i].fitness, i))
    children: List[Chromosome] = [population[elite_order[i]].copy()
                                  for i in range(GA_ELITE_COUNT)]
    while len(children) < n:
        pa = _tournament_pick(population, rng)
        pb = _tournament_pick(population, rng)
        g1, g2 = _crossover(pa, pb, rng)
        for g in (g1, g2):
            if len(children) < n:
                children.append(Chromosome(genes=_mutate(g, mutation_rate, rng)))
    return children


def _population_frequencies(population: List[Chromosome]) -> np.ndarray:
    return np.stack([c.genes for c in population]).astype(np.float64).mean(axis=0)


def ga_run(ds: Dataset, candidates: Sequence[int], spec: ClassifierSpec,
           folds: FoldPlan, cfg: SearchConfig) -> SearchResult:
    """Classical GA baseline on the same fitness, budget, and stop rules:
    Bernoulli(0.5) initialization, tournament-2 selection, single-point
    crossover at rate 0.9, per-gene bit-flip mutation at rate 1/m, one
    elite carried over. History snapshots record the population's gene
    frequencies so both engines log comparable entropy curves.
    """
    cand = _validate_candidates(candidates, ds.n_features)
    memo = _FitnessMemo(ds, cand, spec, folds)
    state = _RunState(cfg.patience)
    m = len(cand)
    mutation_rate = 1.0 / m
    budget = max(1, cfg.max_iterations)
    stop_reason = STOP_MAX_ITERATIONS
    population: List[Chromosome] = []
    for gen in range(1, budget + 1):
        rng = _generation_rng(cfg.seed, gen)
        if gen == 1:
            init = GeneProbabilities.uniform(m, GA_INIT_PROB)
            population = sample_population(init, cfg.population, rng)
        else:
            population = _ga_offspring(population, cfg.population,
                                       mutation_rate, rng)
        _evaluate(population, memo)
        state.absorb(population)
        state.record(gen, population, _population_frequencies(population))
        if state.exhausted_patience():
            stop_reason = STOP_PATIENCE
            break
    return state.result(stop_reason, memo.n_evaluations)
