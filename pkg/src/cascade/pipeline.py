from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src import primitives
from src.datasets import ColumnTag, Dataset
from src.errors import DatasetError, GenomeError, PipelineFitError, WidthMismatchError
from src.genome import PipelineGenome
from src.primitives import TrainedPrimitive
from src.seeding import derive_seed

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TrainedPipeline:
    genome: PipelineGenome
    fitted_nodes: Tuple[Tuple[TrainedPrimitive, ...], ...]
    raw_width: int
    class_names: Tuple[str, ...] = ()
    feature_names: Tuple[str, ...] = ()
    label_column: Optional[str] = None
    # final-layer predictions on the training matrix, kept from fitting; not serialized
    train_predictions: Optional[np.ndarray] = field(default=None, repr=False)


def augment(d: Dataset, predictions: Sequence[np.ndarray], layer_index: int) -> Dataset:
    """Append one synthetic column per prediction vector (class index as a real)."""
    if not predictions:
        return d
    for j, p in enumerate(predictions):
        if len(p) != d.n_rows:
            raise DatasetError(f"prediction vector {j} has length {len(p)}, dataset has {d.n_rows} rows")
    columns = np.column_stack([np.asarray(p, dtype=np.float64) for p in predictions])
    tags = [ColumnTag.synthetic(layer_index, j) for j in range(len(predictions))]
    names = [f"L{layer_index}N{j}" for j in range(len(predictions))]
    return d.with_columns(columns, tags, names)


def _check_topology(genome: PipelineGenome) -> None:
    if not genome.layers or any(len(layer) == 0 for layer in genome.layers):
        raise GenomeError("every layer needs at least one node")
    if len(genome.layers[-1]) != 1:
        raise GenomeError("final layer must have exactly one node")


def fit_pipeline(genome: PipelineGenome, train: Dataset, seed: int) -> TrainedPipeline:
    """Train layer by layer; each layer's in-sample predictions widen the next input."""
    _check_topology(genome)
    current = train
    fitted: List[Tuple[TrainedPrimitive, ...]] = []
    preds: List[np.ndarray] = []
    last = genome.n_layers - 1
    for i, layer in enumerate(genome.layers):
        layer_fits, preds = [], []
        for j, node in enumerate(layer):
            try:
                tp = primitives.fit(node, current, derive_seed(seed, i, j))
                preds.append(primitives.predict(tp, current.features))
            except Exception as e:
                raise PipelineFitError(i, j, e) from e
            layer_fits.append(tp)
        fitted.append(tuple(layer_fits))
        if i < last:
            current = augment(current, preds, i)
    return TrainedPipeline(
        genome=genome,
        fitted_nodes=tuple(fitted),
        raw_width=train.raw_width,
        class_names=train.class_names,
        feature_names=tuple(n for n, tag in zip(train.feature_names, train.column_meta) if tag.is_raw),
        train_predictions=preds[0],
    )


def predict_pipeline(p: TrainedPipeline, features: np.ndarray) -> np.ndarray:
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != p.raw_width:
        raise WidthMismatchError(p.raw_width, X.shape[1] if X.ndim == 2 else -1)
    last = len(p.fitted_nodes) - 1
    out = None
    for i, layer in enumerate(p.fitted_nodes):
        outputs = [primitives.predict(node, X) for node in layer]
        if i < last:
            X = np.hstack([X, np.column_stack(outputs).astype(np.float64)])
        else:
            out = outputs[0]
    return out
