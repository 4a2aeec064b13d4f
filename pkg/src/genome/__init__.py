from .model import (
    PipelineGenome,
    SearchBounds,
    check_shape,
    genome_digest,
    is_valid,
    shape_label,
    validate_genome,
)
from .operators import applicable_moves, crossover, mutate, random_genome, random_node

__all__ = [
    "PipelineGenome",
    "SearchBounds",
    "check_shape",
    "genome_digest",
    "is_valid",
    "shape_label",
    "validate_genome",
    "applicable_moves",
    "crossover",
    "mutate",
    "random_genome",
    "random_node",
]
