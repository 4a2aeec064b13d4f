from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from .base import Classifier

_CHUNK = 512


class KNeighborsClassifier(Classifier):
    """Euclidean k-nearest-neighbour vote.

    Equidistant neighbours are taken in training-row order; vote ties go to the
    smallest class index. With inverse-distance weighting, exact matches (distance 0)
    outvote everything else.
    """

    name = "knn"
    hyper_grid = {
        "k": (1, 3, 5, 7, 11),
        "weighting": ("uniform", "inverse_distance"),
    }

    def __init__(self, k=5, weighting="uniform"):
        super().__init__(k=k, weighting=weighting)
        self.X = np.zeros((0, 0))
        self.y = np.zeros(0, dtype=np.int64)
        self.n_classes = 0

    def fit(self, X, y, n_classes, rng):
        self.X = np.array(X, dtype=np.float64)
        self.y = np.array(y, dtype=np.int64)
        self.n_classes = n_classes
        return self

    def predict(self, X):
        k = min(self.hypers["k"], self.X.shape[0])
        out = np.empty(X.shape[0], dtype=np.int64)
        for start in range(0, X.shape[0], _CHUNK):
            D = cdist(X[start:start + _CHUNK], self.X, metric="euclidean")
            nn = np.argsort(D, axis=1, kind="stable")[:, :k]
            dist = np.take_along_axis(D, nn, axis=1)
            labels = self.y[nn]
            if self.hypers["weighting"] == "inverse_distance":
                exact = dist == 0.0
                with np.errstate(divide="ignore"):
                    w = np.where(exact.any(axis=1, keepdims=True), exact.astype(np.float64), 1.0 / dist)
            else:
                w = np.ones_like(dist)
            tally = np.zeros((len(nn), self.n_classes))
            rows = np.repeat(np.arange(len(nn)), k)
            np.add.at(tally, (rows, labels.ravel()), w.ravel())
            out[start:start + _CHUNK] = np.argmax(tally, axis=1)
        return out

    def get_state(self):
        return {"n_classes": self.n_classes, "X": self.X.tolist(), "y": self.y.tolist()}

    def set_state(self, state):
        self.n_classes = int(state["n_classes"])
        self.y = np.asarray(state["y"], dtype=np.int64)
        self.X = np.asarray(state["X"], dtype=np.float64).reshape(len(self.y), -1)
