import os
import sys

import numpy as np
import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from src.datasets import Dataset, make_blobs, make_parity, write_csv  # noqa: E402
from src.genome import SearchBounds  # noqa: E402

FAST_PRIMITIVES = ("decision_tree", "knn", "gaussian_nb")


def xor_grid() -> Dataset:
    """200 noiseless XOR points: four 5x10 grid clusters, one per quadrant."""
    gx, gy = np.meshgrid(np.arange(5) * 0.1, np.arange(10) * 0.04, indexing="ij")
    base = np.column_stack([gx.ravel(), gy.ravel()])
    X, y = [], []
    for ox in (0, 1):
        for oy in (0, 1):
            X.append(base + np.array([ox, oy], dtype=np.float64))
            y.append(np.full(len(base), ox ^ oy))
    return Dataset(features=np.vstack(X), labels=np.concatenate(y), n_classes=2)


def xor_corners(replicas: int = 50) -> Dataset:
    """The four XOR corners, each repeated ``replicas`` times (200 rows by default)."""
    X = np.tile(np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]), (replicas, 1))
    return Dataset(features=X, labels=np.tile(np.array([0, 1, 1, 0]), replicas), n_classes=2)


@pytest.fixture
def blobs() -> Dataset:
    return make_blobs(n_rows=200, n_features=2, n_classes=2, seed=0)


@pytest.fixture
def small_blobs() -> Dataset:
    return make_blobs(n_rows=50, n_features=3, n_classes=2, seed=3)


@pytest.fixture
def xor4() -> Dataset:
    X = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
    return Dataset(features=X, labels=np.array([0, 1, 1, 0]), n_classes=2)


@pytest.fixture
def xor200() -> Dataset:
    return xor_grid()


@pytest.fixture
def xor_corners200() -> Dataset:
    return xor_corners()


@pytest.fixture
def parity() -> Dataset:
    return make_parity(5, 8)


@pytest.fixture
def fast_bounds() -> SearchBounds:
    return SearchBounds(max_layers=3, max_nodes=2, allowed_primitives=FAST_PRIMITIVES)


@pytest.fixture
def blobs_csv(tmp_path, small_blobs) -> str:
    return write_csv(small_blobs, str(tmp_path / "blobs.csv"))
