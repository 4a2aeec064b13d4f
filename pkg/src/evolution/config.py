from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Sequence, Tuple

import numpy as np

from src.errors import ConfigError
from src.genome import SearchBounds
from src.metrics import FitnessRecord


@dataclass(frozen=True)
class EAConfig:
    population_n: int = 200
    iterations_m: int = 10
    bounds: SearchBounds = field(default_factory=SearchBounds)
    cv_folds: int = 5
    master_seed: int = 0
    worker_count: int = 1

    def __post_init__(self):
        if self.population_n < 4 or self.population_n % 2:
            raise ConfigError(f"population_n must be an even integer >= 4, got {self.population_n}", "population_n")
        if self.iterations_m < 0:
            raise ConfigError(f"iterations_m must be >= 0, got {self.iterations_m}", "iterations_m")
        if self.cv_folds < 2:
            raise ConfigError(f"cv_folds must be >= 2, got {self.cv_folds}", "cv_folds")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}", "seed")
        if self.worker_count < 1:
            raise ConfigError(f"worker_count must be >= 1, got {self.worker_count}", "workers")


@dataclass(frozen=True)
class GenerationReport:
    generation_index: int
    best_score: float
    median_score: float
    mean_score: float
    population_digest: Tuple[Tuple[int, float, int], ...]

    @classmethod
    def from_records(cls, generation_index: int, records: Sequence[FitnessRecord]) -> "GenerationReport":
        scores = np.array([r.cv_score for r in records])
        return cls(
            generation_index=generation_index,
            best_score=float(scores.max()),
            median_score=float(np.median(scores)),
            mean_score=float(scores.mean()),
            population_digest=tuple((r.genome_id, r.cv_score, r.total_nodes) for r in records),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "generation": self.generation_index,
            "best_score": self.best_score,
            "median_score": self.median_score,
            "mean_score": self.mean_score,
            "population": [
                {"genome_id": gid, "cv_score": score, "total_nodes": nodes}
                for gid, score, nodes in self.population_digest
            ],
        }
