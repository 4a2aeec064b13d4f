from __future__ import annotations

import itertools

import numpy as np
import pandas as pd

from .dataset import Dataset


def make_parity(n_bits: int = 5, replicas: int = 8) -> Dataset:
    """Every n-bit pattern repeated ``replicas`` times; label is the parity of the bits."""
    patterns = np.array(list(itertools.product((0.0, 1.0), repeat=n_bits)))
    X = np.tile(patterns, (replicas, 1))
    y = (X.sum(axis=1).astype(np.int64) % 2)
    return Dataset(
        features=X,
        labels=y,
        n_classes=2,
        class_names=("even", "odd"),
        feature_names=tuple(f"b{i}" for i in range(n_bits)),
    )


def make_blobs(
    n_rows: int = 200,
    n_features: int = 2,
    n_classes: int = 2,
    separation: float = 6.0,
    seed: int = 0,
) -> Dataset:
    """Isotropic Gaussian blobs with standard deviation 0.5.

    Class c is centred at ``separation * (c - (n_classes - 1) / 2)`` on every axis, so
    neighbouring classes sit ``separation`` apart along the diagonal.
    """
    rng = np.random.default_rng(seed)
    y = np.arange(n_rows, dtype=np.int64) % n_classes
    centres = np.array(
        [separation * (c - (n_classes - 1) / 2.0) for c in range(n_classes)]
    )
    X = centres[y][:, None] + rng.normal(scale=0.5, size=(n_rows, n_features))
    order = rng.permutation(n_rows)
    return Dataset(
        features=X[order],
        labels=y[order],
        n_classes=n_classes,
        class_names=tuple(f"c{c}" for c in range(n_classes)),
        feature_names=tuple(f"f{i}" for i in range(n_features)),
    )


def to_frame(d: Dataset, label_column: str = "label") -> pd.DataFrame:
    df = pd.DataFrame(d.features, columns=list(d.feature_names))
    df[label_column] = [d.class_names[c] for c in d.labels]
    return df


def write_csv(d: Dataset, path: str, label_column: str = "label") -> str:
    to_frame(d, label_column).to_csv(path, index=False)
    return path
