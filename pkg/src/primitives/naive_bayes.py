from __future__ import annotations

import numpy as np

from .base import Classifier


def _log_priors(y: np.ndarray, n_classes: int) -> np.ndarray:
    counts = np.bincount(y, minlength=n_classes).astype(np.float64)
    with np.errstate(divide="ignore"):
        return np.log(counts / counts.sum())


class GaussianNBClassifier(Classifier):
    name = "gaussian_nb"
    hyper_grid = {"variance_smoothing": (1e-9, 1e-6)}

    def __init__(self, variance_smoothing=1e-9):
        super().__init__(variance_smoothing=variance_smoothing)
        self.theta = np.zeros((0, 0))
        self.var = np.ones((0, 0))
        self.log_prior = np.zeros(0)

    def fit(self, X, y, n_classes, rng):
        d = X.shape[1]
        eps = self.hypers["variance_smoothing"] * max(float(X.var(axis=0).max()), 1.0e-300)
        self.theta = np.zeros((n_classes, d))
        self.var = np.ones((n_classes, d))
        for c in range(n_classes):
            Xc = X[y == c]
            if len(Xc):
                self.theta[c] = Xc.mean(axis=0)
                self.var[c] = Xc.var(axis=0) + eps
        self.log_prior = _log_priors(y, n_classes)
        return self

    def predict(self, X):
        jll = -0.5 * np.sum(np.log(2.0 * np.pi * self.var), axis=1)[None, :] - 0.5 * (
            ((X[:, None, :] - self.theta[None, :, :]) ** 2) / self.var[None, :, :]
        ).sum(axis=2)
        jll = jll + self.log_prior[None, :]
        return np.argmax(jll, axis=1).astype(np.int64)

    def get_state(self):
        return {
            "theta": self.theta.tolist(),
            "var": self.var.tolist(),
            "log_prior": [float(v) if np.isfinite(v) else None for v in self.log_prior],
        }

    def set_state(self, state):
        self.theta = np.asarray(state["theta"], dtype=np.float64)
        self.var = np.asarray(state["var"], dtype=np.float64)
        self.log_prior = np.array([-np.inf if v is None else v for v in state["log_prior"]], dtype=np.float64)


class BernoulliNBClassifier(Classifier):
    name = "bernoulli_nb"
    hyper_grid = {
        "alpha": (0.1, 1.0),
        "binarize": (0.0, 0.5),
    }

    def __init__(self, alpha=1.0, binarize=0.0):
        super().__init__(alpha=alpha, binarize=binarize)
        self.log_p = np.zeros((0, 0))
        self.log_q = np.zeros((0, 0))
        self.log_prior = np.zeros(0)

    def fit(self, X, y, n_classes, rng):
        B = (X > self.hypers["binarize"]).astype(np.float64)
        alpha = self.hypers["alpha"]
        on = np.zeros((n_classes, X.shape[1]))
        counts = np.bincount(y, minlength=n_classes).astype(np.float64)
        np.add.at(on, y, B)
        p = (on + alpha) / (counts[:, None] + 2.0 * alpha)
        self.log_p, self.log_q = np.log(p), np.log1p(-p)
        self.log_prior = _log_priors(y, n_classes)
        return self

    def predict(self, X):
        B = (X > self.hypers["binarize"]).astype(np.float64)
        jll = B @ self.log_p.T + (1.0 - B) @ self.log_q.T + self.log_prior[None, :]
        return np.argmax(jll, axis=1).astype(np.int64)

    def get_state(self):
        return {
            "log_p": self.log_p.tolist(),
            "log_q": self.log_q.tolist(),
            "log_prior": [float(v) if np.isfinite(v) else None for v in self.log_prior],
        }

    def set_state(self, state):
        self.log_p = np.asarray(state["log_p"], dtype=np.float64)
        self.log_q = np.asarray(state["log_q"], dtype=np.float64)
        self.log_prior = np.array([-np.inf if v is None else v for v in state["log_prior"]], dtype=np.float64)
