"""CART-style classification trees on numpy arrays.

Trees split on ``x[feature] <= threshold``. Among equally good splits the lowest
feature index wins, then the lowest threshold, which keeps fits deterministic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional

import numpy as np

from .base import Classifier

LEAF = -1
_TIE_TOL = 1e-12


def weighted_impurity(counts: np.ndarray, criterion: str) -> np.ndarray:
    """Impurity of each class-count vector in ``counts`` (last axis), times its total weight."""
    total = counts.sum(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        if criterion == "gini":
            out = total - (counts ** 2).sum(axis=-1) / total
        elif criterion == "entropy":
            p = counts / total[..., None]
            logs = np.where(counts > 0, np.log2(np.where(p > 0, p, 1.0)), 0.0)
            out = -(counts * logs).sum(axis=-1)
        else:
            raise ValueError(f"unknown criterion {criterion!r}")
    return np.where(total > 0, out, 0.0)


def n_split_features(max_features: Any, n_features: int) -> int:
    if max_features in (None, "all"):
        return n_features
    if max_features == "sqrt":
        return max(1, int(math.sqrt(n_features)))
    return max(1, min(n_features, int(max_features)))


@dataclass
class TreeArrays:
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    def apply(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(X.shape[0], dtype=np.int64)
        active = self.feature[node] != LEAF
        while active.any():
            rows = np.flatnonzero(active)
            cur = node[rows]
            go_left = X[rows, self.feature[cur]] <= self.threshold[cur]
            node[rows] = np.where(go_left, self.left[cur], self.right[cur])
            active = self.feature[node] != LEAF
        return node

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.value[self.apply(X)]

    def to_dict(self) -> Dict[str, List]:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "TreeArrays":
        return cls(
            feature=np.asarray(d["feature"], dtype=np.int64),
            threshold=np.asarray(d["threshold"], dtype=np.float64),
            left=np.asarray(d["left"], dtype=np.int64),
            right=np.asarray(d["right"], dtype=np.int64),
            value=np.asarray(d["value"], dtype=np.int64),
        )


def _best_split(X, Yw, features, criterion, min_leaf):
    """Exhaustive threshold search over ``features`` (sorted ascending)."""
    n = X.shape[0]
    Xf = X[:, features]
    order = np.argsort(Xf, axis=0, kind="stable")
    xs = np.take_along_axis(Xf, order, axis=0)
    cum = np.cumsum(Yw[order], axis=0)  # (n, F, C)
    left = cum[:-1]
    right = cum[-1][None, :, :] - left
    pos = np.arange(1, n)[:, None]
    valid = (xs[:-1] < xs[1:]) & (pos >= min_leaf) & (n - pos >= min_leaf)
    if not valid.any():
        return None
    cost = np.where(valid, weighted_impurity(left, criterion) + weighted_impurity(right, criterion), np.inf)
    best = cost.min()
    f = int(np.argmax((cost <= best + _TIE_TOL).any(axis=0)))
    i = int(np.argmax(cost[:, f] <= best + _TIE_TOL))
    threshold = (xs[i, f] + xs[i + 1, f]) / 2.0
    return int(features[f]), float(threshold), float(best)


def _random_split(X, Yw, features, criterion, min_leaf, rng):
    """One uniformly drawn threshold per feature, best feature wins (extra-trees)."""
    Xf = X[:, features]
    lo, hi = Xf.min(axis=0), Xf.max(axis=0)
    thresholds = rng.uniform(lo, hi)
    mask = Xf <= thresholds[None, :]  # (n, F)
    left = np.einsum("nf,nc->fc", mask.astype(np.float64), Yw)
    right = Yw.sum(axis=0)[None, :] - left
    n_left = mask.sum(axis=0)
    n_right = X.shape[0] - n_left
    valid = (lo < hi) & (n_left >= min_leaf) & (n_right >= min_leaf)
    if not valid.any():
        return None
    cost = np.where(valid, weighted_impurity(left, criterion) + weighted_impurity(right, criterion), np.inf)
    best = cost.min()
    f = int(np.argmax(cost <= best + _TIE_TOL))
    return int(features[f]), float(thresholds[f]), float(best)


def grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    *,
    sample_weight: Optional[np.ndarray] = None,
    max_depth: Optional[int] = None,
    min_samples_leaf: int = 1,
    criterion: str = "gini",
    max_features: Any = "all",
    splitter: str = "best",
    rng: Optional[np.random.Generator] = None,
) -> TreeArrays:
    n, n_features = X.shape
    w = np.ones(n) if sample_weight is None else np.asarray(sample_weight, dtype=np.float64)
    Yw = np.zeros((n, n_classes))
    Yw[np.arange(n), y] = w
    k = n_split_features(max_features, n_features)
    if (k < n_features or splitter == "random") and rng is None:
        raise ValueError("a random generator is required for randomized splits")

    feature: List[int] = []
    threshold: List[float] = []
    left: List[int] = []
    right: List[int] = []
    value: List[int] = []

    def new_node(rows: np.ndarray) -> int:
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        value.append(int(np.argmax(Yw[rows].sum(axis=0))))
        return len(feature) - 1

    root = np.arange(n)
    stack = [(new_node(root), root, 0)]
    while stack:
        node, rows, depth = stack.pop()
        counts = Yw[rows].sum(axis=0)
        if np.count_nonzero(counts) <= 1:
            continue
        if max_depth is not None and depth >= max_depth:
            continue
        if len(rows) < 2 * min_samples_leaf:
            continue
        if k < n_features:
            features = np.sort(rng.choice(n_features, size=k, replace=False))
        else:
            features = np.arange(n_features)
        Xn = X[rows]
        if splitter == "random":
            found = _random_split(Xn, Yw[rows], features, criterion, min_samples_leaf, rng)
        else:
            found = _best_split(Xn, Yw[rows], features, criterion, min_samples_leaf)
        if found is None:
            continue
        f, t, _ = found
        mask = Xn[:, f] <= t
        if mask.all() or not mask.any():
            continue
        left_rows, right_rows = rows[mask], rows[~mask]
        feature[node] = f
        threshold[node] = t
        left[node] = new_node(left_rows)
        right[node] = new_node(right_rows)
        # right pushed first so the left subtree is numbered first
        stack.append((right[node], right_rows, depth + 1))
        stack.append((left[node], left_rows, depth + 1))

    return TreeArrays(
        feature=np.asarray(feature, dtype=np.int64),
        threshold=np.asarray(threshold, dtype=np.float64),
        left=np.asarray(left, dtype=np.int64),
        right=np.asarray(right, dtype=np.int64),
        value=np.asarray(value, dtype=np.int64),
    )


class DecisionTreeClassifier(Classifier):
    name = "decision_tree"
    hyper_grid = {
        "max_depth": (1, 2, 3, 5, 8, 12),
        "min_samples_leaf": (1, 2, 5),
        "criterion": ("gini", "entropy"),
    }

    def __init__(self, max_depth=5, min_samples_leaf=1, criterion="gini"):
        super().__init__(max_depth=max_depth, min_samples_leaf=min_samples_leaf, criterion=criterion)
        self.tree: Optional[TreeArrays] = None

    def fit(self, X, y, n_classes, rng):
        self.tree = grow_tree(
            X, y, n_classes,
            max_depth=self.hypers["max_depth"],
            min_samples_leaf=self.hypers["min_samples_leaf"],
            criterion=self.hypers["criterion"],
        )
        return self

    def predict(self, X):
        return self.tree.predict(X)

    def get_state(self):
        return {"tree": self.tree.to_dict()}

    def set_state(self, state):
        self.tree = TreeArrays.from_dict(state["tree"])
