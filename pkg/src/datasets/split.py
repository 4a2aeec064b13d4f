from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.errors import ClassMissingFromTrainError, DatasetError

from .dataset import Dataset

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise DatasetError(f"train_fraction must lie in (0, 1), got {self.train_fraction}")
        if not 0 <= self.seed < 2**64:
            raise DatasetError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


def train_size(n_rows: int, train_fraction: float) -> int:
    return int(math.floor(train_fraction * n_rows))


def _stratified_quotas(counts: np.ndarray, n_train: int, train_fraction: float) -> np.ndarray:
    """Per-class train quotas summing to n_train (largest remainder)."""
    exact = counts * train_fraction
    quotas = np.floor(exact).astype(np.int64)
    remaining = n_train - int(quotas.sum())
    # classes still without a train row go first, then by largest remainder, then index
    order = sorted(
        range(len(counts)),
        key=lambda c: (quotas[c] > 0 or counts[c] == 0, -(exact[c] - quotas[c]), c),
    )
    for c in order:
        if remaining <= 0:
            break
        if quotas[c] < counts[c]:
            quotas[c] += 1
            remaining -= 1
    return quotas


def shuffle_split(d: Dataset, s: SplitSpec, stratify: bool = False) -> Tuple[Dataset, Dataset]:
    """Seeded shuffle and train/test partition.

    The permutation depends only on ``s.seed``; the train part holds
    floor(train_fraction * n_rows) rows and the test part the remainder.
    """
    n = d.n_rows
    n_train = train_size(n, s.train_fraction)
    if n_train < 1 or n_train >= n:
        raise DatasetError(
            f"train_fraction {s.train_fraction} on {n} rows leaves an empty partition"
        )
    rng = np.random.default_rng(s.seed)

    if stratify:
        quotas = _stratified_quotas(d.class_counts(), n_train, s.train_fraction)
        train_parts, test_parts = [], []
        for c in range(d.n_classes):
            members = rng.permutation(np.flatnonzero(d.labels == c))
            train_parts.append(members[: quotas[c]])
            test_parts.append(members[quotas[c]:])
        train_idx = rng.permutation(np.concatenate(train_parts))
        test_idx = rng.permutation(np.concatenate(test_parts))
    else:
        perm = rng.permutation(n)
        train_idx, test_idx = perm[:n_train], perm[n_train:]

    train, test = d.take(train_idx), d.take(test_idx)
    missing = [c for c, k in enumerate(train.class_counts()) if k == 0]
    if missing:
        raise ClassMissingFromTrainError([d.class_names[c] for c in missing])
    logger.info("Split %d rows -> %d train / %d test (seed=%d, stratify=%s)", n, train.n_rows, test.n_rows, s.seed, stratify)
    return train, test
