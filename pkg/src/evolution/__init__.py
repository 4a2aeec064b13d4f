from .config import EAConfig, GenerationReport
from .search import (
    TOP_K,
    CrossValidationEvaluator,
    initialize,
    make_offspring,
    rank,
    rank_key,
    run,
    step,
)

__all__ = [
    "EAConfig",
    "GenerationReport",
    "TOP_K",
    "CrossValidationEvaluator",
    "initialize",
    "make_offspring",
    "rank",
    "rank_key",
    "run",
    "step",
]
