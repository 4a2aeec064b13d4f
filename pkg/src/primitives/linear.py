from __future__ import annotations

import numpy as np

from .base import Classifier, standardize_fit


class _OneVsRestLinear(Classifier):
    """Linear scores per class on standardized inputs; predict takes the argmax."""

    def __init__(self, **hypers):
        super().__init__(**hypers)
        self.mean = np.zeros(0)
        self.scale = np.ones(0)
        self.coef = np.zeros((0, 0))
        self.intercept = np.zeros(0)

    def decision_function(self, X):
        Z = (X - self.mean) / self.scale
        return Z @ self.coef.T + self.intercept

    def predict(self, X):
        return np.argmax(self.decision_function(X), axis=1).astype(np.int64)

    def get_state(self):
        return {
            "mean": self.mean.tolist(),
            "scale": self.scale.tolist(),
            "coef": self.coef.tolist(),
            "intercept": self.intercept.tolist(),
        }

    def set_state(self, state):
        self.mean = np.asarray(state["mean"], dtype=np.float64)
        self.scale = np.asarray(state["scale"], dtype=np.float64)
        self.coef = np.asarray(state["coef"], dtype=np.float64).reshape(len(state["coef"]), -1)
        self.intercept = np.asarray(state["intercept"], dtype=np.float64)


class LogisticRegressionClassifier(_OneVsRestLinear):
    name = "logistic_regression"
    hyper_grid = {
        "l2_penalty": (0.0001, 0.001, 0.01, 0.1),
        "max_iters": (100, 500),
    }
    learning_rate = 0.5

    def __init__(self, l2_penalty=0.001, max_iters=100):
        super().__init__(l2_penalty=l2_penalty, max_iters=max_iters)

    def fit(self, X, y, n_classes, rng):
        self.mean, self.scale = standardize_fit(X)
        Z = (X - self.mean) / self.scale
        n, d = Z.shape
        T = (y[:, None] == np.arange(n_classes)[None, :]).astype(np.float64)
        W = np.zeros((n_classes, d))
        b = np.zeros(n_classes)
        lam = self.hypers["l2_penalty"]
        # all one-vs-rest problems advance together by full-batch gradient descent
        for _ in range(self.hypers["max_iters"]):
            P = 1.0 / (1.0 + np.exp(-np.clip(Z @ W.T + b, -35.0, 35.0)))
            G = P - T
            W -= self.learning_rate * (G.T @ Z / n + lam * W)
            b -= self.learning_rate * G.mean(axis=0)
        self.coef, self.intercept = W, b
        return self


class PerceptronClassifier(_OneVsRestLinear):
    name = "perceptron"
    hyper_grid = {
        "epochs": (10, 50),
        "learning_rate": (0.1, 1.0),
    }

    def __init__(self, epochs=10, learning_rate=1.0):
        super().__init__(epochs=epochs, learning_rate=learning_rate)

    def fit(self, X, y, n_classes, rng):
        self.mean, self.scale = standardize_fit(X)
        Z = (X - self.mean) / self.scale
        n, d = Z.shape
        eta = self.hypers["learning_rate"]
        W = rng.normal(scale=0.01, size=(n_classes, d))
        b = np.zeros(n_classes)
        sign = np.where(y[:, None] == np.arange(n_classes)[None, :], 1.0, -1.0)
        for _ in range(self.hypers["epochs"]):
            for i in rng.permutation(n):
                wrong = sign[i] * (W @ Z[i] + b) <= 0.0
                if wrong.any():
                    W[wrong] += eta * sign[i, wrong][:, None] * Z[i]
                    b[wrong] += eta * sign[i, wrong]
        self.coef, self.intercept = W, b
        return self
