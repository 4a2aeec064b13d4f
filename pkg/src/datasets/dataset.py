from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from src.errors import DatasetError


@dataclass(frozen=True)
class ColumnTag:
    """Provenance of one feature column: raw input or a cascade node's output."""

    kind: str = "raw"
    layer: Optional[int] = None
    node: Optional[int] = None

    @classmethod
    def synthetic(cls, layer: int, node: int) -> "ColumnTag":
        return cls("synthetic", layer, node)

    @property
    def is_raw(self) -> bool:
        return self.kind == "raw"


RAW = ColumnTag()


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Dataset:
    """Numeric feature matrix plus dense integer class labels.

    Arrays are made read-only on construction so a Dataset can be shared across
    evaluation workers.
    """

    features: np.ndarray
    labels: np.ndarray
    n_classes: int
    column_meta: Tuple[ColumnTag, ...] = ()
    class_names: Tuple[str, ...] = ()
    feature_names: Tuple[str, ...] = ()
    row_ids: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        X = np.array(self.features, dtype=np.float64, copy=True)
        y = np.array(self.labels, dtype=np.int64, copy=True)
        if X.ndim != 2:
            raise DatasetError(f"features must be a 2-D matrix, got shape {X.shape}")
        n_rows, n_cols = X.shape
        if n_rows < 1 or n_cols < 1:
            raise DatasetError(f"dataset needs at least one row and one column, got {X.shape}")
        if not np.isfinite(X).all():
            r, c = np.argwhere(~np.isfinite(X))[0]
            raise DatasetError(f"non-finite feature value at row {r}, column {c}")
        if y.shape != (n_rows,):
            raise DatasetError(f"labels length {y.shape} does not match {n_rows} rows")
        if self.n_classes < 1:
            raise DatasetError("n_classes must be positive")
        if y.min() < 0 or y.max() >= self.n_classes:
            raise DatasetError(f"labels must lie in [0, {self.n_classes})")

        meta = tuple(self.column_meta) or tuple(RAW for _ in range(n_cols))
        if len(meta) != n_cols:
            raise DatasetError(f"column_meta has {len(meta)} entries for {n_cols} columns")
        names = tuple(self.feature_names) or tuple(f"x{i}" for i in range(n_cols))
        if len(names) != n_cols:
            raise DatasetError(f"feature_names has {len(names)} entries for {n_cols} columns")
        classes = tuple(self.class_names) or tuple(str(c) for c in range(self.n_classes))
        if len(classes) != self.n_classes:
            raise DatasetError(f"class_names has {len(classes)} entries for {self.n_classes} classes")
        ids = np.arange(n_rows, dtype=np.int64) if self.row_ids is None else np.array(self.row_ids, dtype=np.int64)
        if ids.shape != (n_rows,):
            raise DatasetError("row_ids must have one entry per row")

        object.__setattr__(self, "features", _frozen(X))
        object.__setattr__(self, "labels", _frozen(y))
        object.__setattr__(self, "column_meta", meta)
        object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "class_names", classes)
        object.__setattr__(self, "row_ids", _frozen(ids))

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_cols(self) -> int:
        return self.features.shape[1]

    @property
    def raw_width(self) -> int:
        return sum(1 for tag in self.column_meta if tag.is_raw)

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes)

    def take(self, rows: Sequence[int]) -> "Dataset":
        idx = np.asarray(rows, dtype=np.int64)
        return Dataset(
            features=self.features[idx],
            labels=self.labels[idx],
            n_classes=self.n_classes,
            column_meta=self.column_meta,
            class_names=self.class_names,
            feature_names=self.feature_names,
            row_ids=self.row_ids[idx],
        )

    def with_columns(self, columns: np.ndarray, tags: Sequence[ColumnTag], names: Sequence[str]) -> "Dataset":
        """Return a copy with extra columns appended on the right."""
        return Dataset(
            features=np.hstack([self.features, columns]),
            labels=self.labels,
            n_classes=self.n_classes,
            column_meta=self.column_meta + tuple(tags),
            class_names=self.class_names,
            feature_names=self.feature_names + tuple(names),
            row_ids=self.row_ids,
        )
