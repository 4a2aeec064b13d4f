from __future__ import annotations

import numpy as np


def balanced_accuracy(y_true, y_pred, n_classes: int) -> float:
    """Mean per-class recall over the classes present in ``y_true``."""
    t = np.asarray(y_true, dtype=np.int64)
    p = np.asarray(y_pred, dtype=np.int64)
    if t.ndim != 1 or p.ndim != 1:
        raise ValueError("label vectors must be 1-D")
    if len(t) == 0:
        raise ValueError("balanced accuracy of empty vectors is undefined")
    if len(t) != len(p):
        raise ValueError(f"length mismatch: {len(t)} true labels vs {len(p)} predictions")
    for name, v in (("y_true", t), ("y_pred", p)):
        if v.min() < 0 or v.max() >= n_classes:
            raise ValueError(f"{name} has labels outside [0, {n_classes})")
    support = np.bincount(t, minlength=n_classes)
    correct = np.bincount(t[t == p], minlength=n_classes)
    present = support > 0
    return float(np.mean(correct[present] / support[present]))
