from __future__ import annotations

import abc
from typing import Any, ClassVar, Dict, Mapping, Tuple

import numpy as np


class Classifier(abc.ABC):
    """Uniform fit/predict interface shared by every primitive.

    Subclasses declare ``name`` and ``hyper_grid`` (hyperparameter -> allowed values,
    in a fixed order) and keep their learned parameters in plain numpy arrays so
    ``get_state`` can hand them to the JSON writer.
    """

    name: ClassVar[str]
    hyper_grid: ClassVar[Mapping[str, Tuple[Any, ...]]] = {}
    state_version: ClassVar[int] = 1

    def __init__(self, **hypers: Any):
        self.hypers: Dict[str, Any] = dict(hypers)

    @abc.abstractmethod
    def fit(self, X: np.ndarray, y: np.ndarray, n_classes: int, rng: np.random.Generator) -> "Classifier":
        ...

    @abc.abstractmethod
    def predict(self, X: np.ndarray) -> np.ndarray:
        ...

    @abc.abstractmethod
    def get_state(self) -> Dict[str, Any]:
        ...

    @abc.abstractmethod
    def set_state(self, state: Mapping[str, Any]) -> None:
        ...


def vote(ballots: np.ndarray, n_classes: int, weights: np.ndarray | None = None) -> np.ndarray:
    """Weighted plurality over rows of ``ballots`` (n_voters, n_rows).

    Ties go to the smallest class index.
    """
    n_voters, n_rows = ballots.shape
    w = np.ones(n_voters) if weights is None else np.asarray(weights, dtype=np.float64)
    tally = np.zeros((n_rows, n_classes))
    rows = np.arange(n_rows)
    for v in range(n_voters):
        tally[rows, ballots[v]] += w[v]
    return np.argmax(tally, axis=1).astype(np.int64)


def standardize_fit(X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    scale[scale == 0.0] = 1.0
    return mean, scale


class ConstantClassifier(Classifier):
    """Always predicts one class; the fallback for single-class training data."""

    name = "constant"

    def __init__(self, value: int = 0):
        super().__init__()
        self.value = int(value)

    def fit(self, X, y, n_classes, rng):
        self.value = int(y[0])
        return self

    def predict(self, X):
        return np.full(X.shape[0], self.value, dtype=np.int64)

    def get_state(self):
        return {"value": self.value}

    def set_state(self, state):
        self.value = int(state["value"])
