from __future__ import annotations

from typing import List

import numpy as np

from .base import Classifier, vote
from .trees import TreeArrays, grow_tree


class _TreeEnsemble(Classifier):
    """Shared predict/state plumbing for ensembles of TreeArrays."""

    def __init__(self, **hypers):
        super().__init__(**hypers)
        self.trees: List[TreeArrays] = []
        self.weights = np.ones(0)
        self.n_classes = 0

    def predict(self, X):
        ballots = np.stack([t.predict(X) for t in self.trees])
        return vote(ballots, self.n_classes, self.weights)

    def get_state(self):
        return {
            "n_classes": self.n_classes,
            "weights": self.weights.tolist(),
            "trees": [t.to_dict() for t in self.trees],
        }

    def set_state(self, state):
        self.n_classes = int(state["n_classes"])
        self.weights = np.asarray(state["weights"], dtype=np.float64)
        self.trees = [TreeArrays.from_dict(t) for t in state["trees"]]


class RandomForestClassifier(_TreeEnsemble):
    name = "random_forest"
    hyper_grid = {
        "n_estimators": (10, 30, 100),
        "max_depth": (3, 5, 8, None),
        "max_features": ("sqrt", "all"),
    }
    splitter = "best"

    def __init__(self, n_estimators=10, max_depth=None, max_features="sqrt", bootstrap=True):
        super().__init__(n_estimators=n_estimators, max_depth=max_depth, max_features=max_features)
        self.bootstrap = bootstrap

    def fit(self, X, y, n_classes, rng):
        n = X.shape[0]
        self.n_classes = n_classes
        self.trees = []
        for child in rng.spawn(self.hypers["n_estimators"]):
            rows = child.integers(0, n, size=n) if self.bootstrap else np.arange(n)
            self.trees.append(
                grow_tree(
                    X[rows], y[rows], n_classes,
                    max_depth=self.hypers["max_depth"],
                    max_features=self.hypers["max_features"],
                    splitter=self.splitter,
                    rng=child,
                )
            )
        self.weights = np.ones(len(self.trees))
        return self


class ExtraTreesClassifier(RandomForestClassifier):
    name = "extra_trees"
    splitter = "random"

    def __init__(self, n_estimators=10, max_depth=None, max_features="sqrt", bootstrap=False):
        super().__init__(n_estimators=n_estimators, max_depth=max_depth, max_features=max_features, bootstrap=bootstrap)


class BaggingClassifier(_TreeEnsemble):
    name = "bagging"
    hyper_grid = {
        "n_estimators": (10, 30, 100),
        "max_depth": (3, 5, 8, None),
    }

    def __init__(self, n_estimators=10, max_depth=None):
        super().__init__(n_estimators=n_estimators, max_depth=max_depth)

    def fit(self, X, y, n_classes, rng):
        n = X.shape[0]
        self.n_classes = n_classes
        self.trees = []
        for child in rng.spawn(self.hypers["n_estimators"]):
            rows = child.integers(0, n, size=n)
            self.trees.append(grow_tree(X[rows], y[rows], n_classes, max_depth=self.hypers["max_depth"]))
        self.weights = np.ones(len(self.trees))
        return self


class AdaBoostClassifier(_TreeEnsemble):
    """Multi-class AdaBoost (SAMME) over shallow weighted trees."""

    name = "adaboost"
    hyper_grid = {
        "n_estimators": (10, 50, 100),
        "base_max_depth": (1, 2, 3),
    }

    def __init__(self, n_estimators=50, base_max_depth=1):
        super().__init__(n_estimators=n_estimators, base_max_depth=base_max_depth)

    def fit(self, X, y, n_classes, rng):
        self.n_classes = n_classes
        self.trees = []
        alphas: List[float] = []
        # unit weights on the first round: a one-round booster is exactly its base tree
        w = np.ones(X.shape[0])
        for _ in range(self.hypers["n_estimators"]):
            tree = grow_tree(X, y, n_classes, sample_weight=w, max_depth=self.hypers["base_max_depth"])
            miss = tree.predict(X) != y
            err = w[miss].sum() / w.sum()
            if err <= 0.0:
                self.trees.append(tree)
                alphas.append(1.0)
                break
            if err >= 1.0 - 1.0 / n_classes:
                if not self.trees:
                    self.trees.append(tree)
                    alphas.append(1.0)
                break
            alpha = np.log((1.0 - err) / err) + np.log(n_classes - 1.0)
            self.trees.append(tree)
            alphas.append(float(alpha))
            w = w * np.exp(alpha * miss)
            w = w / w.mean()
        self.weights = np.asarray(alphas)
        return self
