from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.cascade import fit_pipeline, predict_pipeline
from src.datasets import Dataset
from src.errors import TooFewRowsForFoldsError
from src.genome import PipelineGenome
from src.seeding import derive_seed, make_rng

from .scoring import balanced_accuracy

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FitnessRecord:
    genome_id: int
    cv_score: float
    fold_scores: Tuple[float, ...]
    total_nodes: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "genome_id": self.genome_id,
            "cv_score": self.cv_score,
            "fold_scores": list(self.fold_scores),
            "total_nodes": self.total_nodes,
        }


def stratified_folds(labels: np.ndarray, folds: int, seed: int) -> List[np.ndarray]:
    """Held-out row indices for each fold.

    Each class is shuffled with the seeded generator and dealt round-robin, starting
    where the previous class stopped so fold sizes differ by at most one. A class
    with fewer members than ``folds`` simply misses some folds.
    """
    labels = np.asarray(labels)
    if folds < 2:
        raise ValueError(f"need at least 2 folds, got {folds}")
    if len(labels) < folds:
        raise TooFewRowsForFoldsError(len(labels), folds)
    rng = make_rng(seed)
    assignment = np.empty(len(labels), dtype=np.int64)
    offset = 0
    for c in np.unique(labels):
        members = rng.permutation(np.flatnonzero(labels == c))
        assignment[members] = (offset + np.arange(len(members))) % folds
        offset += len(members)
    return [np.flatnonzero(assignment == k) for k in range(folds)]


def cross_validate(
    genome: PipelineGenome,
    train: Dataset,
    folds: int,
    seed: int,
    fold_indices: Optional[Sequence[np.ndarray]] = None,
) -> FitnessRecord:
    """Mean balanced accuracy of ``genome`` over stratified k-fold CV.

    ``seed`` fixes both the fold partition and the per-fold fit seeds, so every genome
    evaluated with the same (train, folds, seed) sees identical folds. A fold whose
    fit or prediction fails scores 0.
    """
    if fold_indices is None:
        fold_indices = stratified_folds(train.labels, folds, seed)
    all_rows = np.arange(train.n_rows)
    scores: List[float] = []
    for k, held_out in enumerate(fold_indices):
        fit_rows = np.setdiff1d(all_rows, held_out, assume_unique=True)
        try:
            pipeline = fit_pipeline(genome, train.take(fit_rows), derive_seed(seed, "fold", k))
            pred = predict_pipeline(pipeline, train.features[held_out])
            scores.append(balanced_accuracy(train.labels[held_out], pred, train.n_classes))
        except Exception as e:
            logger.warning("genome %d failed on fold %d, scoring 0: %s", genome.id, k, e)
            scores.append(0.0)
    return FitnessRecord(
        genome_id=genome.id,
        cv_score=float(np.mean(scores)),
        fold_scores=tuple(scores),
        total_nodes=genome.total_nodes,
    )
