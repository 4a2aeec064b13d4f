"""Basic evolutionary search over cascade genomes.

Each generation: split the population into two random halves, mutate every member
of one half, cross over consecutive pairs of the other, evaluate parents plus
offspring and keep the best N.
"""
from __future__ import annotations

import logging
from typing import Callable, Dict, List, MutableMapping, Optional, Sequence, Tuple

from joblib import Parallel, delayed
from tqdm import tqdm

from src.cascade import TrainedPipeline, fit_pipeline
from src.datasets import Dataset
from src.errors import PipelineFitError
from src.genome import PipelineGenome, crossover, mutate, random_genome
from src.metrics import FitnessRecord, cross_validate, stratified_folds
from src.seeding import derive_seed, make_rng

from .config import EAConfig, GenerationReport

logger = logging.getLogger(__name__)

TOP_K = 10

Evaluator = Callable[[Sequence[PipelineGenome]], List[FitnessRecord]]
FitnessCache = MutableMapping[int, FitnessRecord]


class CrossValidationEvaluator:
    """Scores genomes by k-fold CV, fanning out over ``worker_count`` joblib workers.

    The fold partition is drawn once, so every genome of a run is scored on the
    same folds and cached scores stay exact.
    """

    def __init__(self, train: Dataset, folds: int, seed: int, worker_count: int = 1):
        self.train = train
        self.folds = folds
        self.seed = seed
        self.worker_count = worker_count
        self.fold_indices = stratified_folds(train.labels, folds, seed)

    def __call__(self, genomes: Sequence[PipelineGenome]) -> List[FitnessRecord]:
        if not genomes:
            return []
        if self.worker_count == 1:
            return [cross_validate(g, self.train, self.folds, self.seed, self.fold_indices) for g in genomes]
        # results come back in submission order regardless of which worker finished first
        return Parallel(n_jobs=self.worker_count)(
            delayed(cross_validate)(g, self.train, self.folds, self.seed, self.fold_indices) for g in genomes
        )


def rank_key(record: FitnessRecord) -> Tuple[float, int, int]:
    """Higher score first, then fewer nodes, then older genome."""
    return (-record.cv_score, record.total_nodes, record.genome_id)


def rank(genomes: Sequence[PipelineGenome], cache: FitnessCache) -> List[PipelineGenome]:
    return sorted(genomes, key=lambda g: rank_key(cache[g.id]))


def evaluate_missing(genomes: Sequence[PipelineGenome], cache: FitnessCache, evaluator: Evaluator) -> None:
    pending = [g for g in genomes if g.id not in cache]
    for g, record in zip(pending, evaluator(pending)):
        cache[g.id] = record


def initialize(config: EAConfig) -> List[PipelineGenome]:
    return [
        random_genome(config.bounds, derive_seed(config.master_seed, "init", i), genome_id=i)
        for i in range(config.population_n)
    ]


def make_offspring(population: Sequence[PipelineGenome], config: EAConfig, gen_index: int, next_id: int) -> List[PipelineGenome]:
    n = config.population_n
    half = n // 2
    master = config.master_seed
    order = make_rng(derive_seed(master, "partition", gen_index)).permutation(n)
    to_mutate = [population[i] for i in order[:half]]
    to_cross = [population[i] for i in order[half:]]

    offspring = [
        mutate(g, config.bounds, derive_seed(master, "mutate", gen_index, slot), genome_id=next_id + slot)
        for slot, g in enumerate(to_mutate)
    ]
    nid = next_id + half
    for p in range(0, half, 2):
        paired = p + 1 < half
        a = to_cross[p]
        # an odd half crosses its last member with the first and keeps one child
        b = to_cross[p + 1] if paired else to_cross[0]
        first, second = crossover(a, b, config.bounds, derive_seed(master, "crossover", gen_index, p // 2), child_ids=(nid, nid + 1))
        offspring.append(first)
        nid += 1
        if paired:
            offspring.append(second)
            nid += 1
    return offspring


def step(
    population: Sequence[PipelineGenome],
    fitness_cache: FitnessCache,
    config: EAConfig,
    gen_index: int,
    evaluator: Evaluator,
) -> Tuple[List[PipelineGenome], GenerationReport]:
    """One generation. ``fitness_cache`` gains an entry for every newly scored genome."""
    if len(population) != config.population_n:
        raise ValueError(f"population has {len(population)} genomes, expected {config.population_n}")
    next_id = max([g.id for g in population] + list(fitness_cache)) + 1
    offspring = make_offspring(population, config, gen_index, next_id)
    pool = list(population) + offspring
    evaluate_missing(pool, fitness_cache, evaluator)
    survivors = rank(pool, fitness_cache)[: config.population_n]
    report = GenerationReport.from_records(gen_index, [fitness_cache[g.id] for g in survivors])
    return survivors, report


def run(
    config: EAConfig,
    train: Dataset,
    evaluator: Optional[Evaluator] = None,
    on_generation: Optional[Callable[[GenerationReport], None]] = None,
    progress: bool = False,
) -> List[Tuple[TrainedPipeline, FitnessRecord]]:
    """Evolve for ``iterations_m`` generations and refit the top pipelines on ``train``."""
    if evaluator is None:
        evaluator = CrossValidationEvaluator(
            train, config.cv_folds, derive_seed(config.master_seed, "cv"), config.worker_count
        )
    cache: Dict[int, FitnessRecord] = {}

    def emit(report: GenerationReport) -> None:
        logger.info(
            "generation %d: best=%.4f median=%.4f mean=%.4f",
            report.generation_index, report.best_score, report.median_score, report.mean_score,
        )
        if on_generation is not None:
            on_generation(report)

    population = initialize(config)
    evaluate_missing(population, cache, evaluator)
    population = rank(population, cache)
    emit(GenerationReport.from_records(0, [cache[g.id] for g in population]))

    for gen in tqdm(range(1, config.iterations_m + 1), desc="generations", disable=not progress):
        population, report = step(population, cache, config, gen, evaluator)
        emit(report)

    ranked: List[Tuple[TrainedPipeline, FitnessRecord]] = []
    for r, g in enumerate(population[: min(TOP_K, config.population_n)]):
        try:
            pipeline = fit_pipeline(g, train, derive_seed(config.master_seed, "refit", r))
        except PipelineFitError as e:
            logger.warning("skipping genome %d: refit on the full training set failed: %s", g.id, e)
            continue
        ranked.append((pipeline, cache[g.id]))
    return ranked
