from __future__ import annotations

import logging
import os
from typing import List, Tuple, Union

import numpy as np
import pandas as pd

from src.errors import (
    CellParseError,
    DatasetError,
    DatasetFileNotFoundError,
    MissingLabelColumnError,
    TooFewClassesError,
)

from .dataset import Dataset

logger = logging.getLogger(__name__)

LabelColumn = Union[str, int]


def read_table(path: str) -> pd.DataFrame:
    """Read a CSV with every cell kept as text, so parse errors can be located."""
    if not os.path.isfile(path):
        raise DatasetFileNotFoundError(path)
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError as e:
        raise DatasetError(f"{path} is empty") from e
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise DatasetError(f"{path} is not a readable CSV: {e}") from e
    return df


def resolve_label_column(df: pd.DataFrame, label_column: LabelColumn) -> str:
    columns = list(df.columns)
    if isinstance(label_column, str):
        if label_column in columns:
            return label_column
        if label_column.lstrip("-").isdigit():
            label_column = int(label_column)
        else:
            raise MissingLabelColumnError(label_column, columns)
    idx = int(label_column)
    if idx < 0:
        idx += len(columns)
    if not 0 <= idx < len(columns):
        raise MissingLabelColumnError(label_column, columns)
    return columns[idx]


def parse_feature_matrix(df: pd.DataFrame) -> np.ndarray:
    """Convert text cells to a float matrix; the first bad cell raises CellParseError."""
    out = np.empty(df.shape, dtype=np.float64)
    for j, col in enumerate(df.columns):
        raw = df[col]
        values = pd.to_numeric(raw.str.strip(), errors="coerce").to_numpy(dtype=np.float64)
        bad = ~np.isfinite(values)
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            # +2: one for the header line, one for 1-based numbering
            raise CellParseError(row=i + 2, column=str(col), value=raw.iloc[i])
        out[:, j] = values
    return out


def encode_labels(raw: pd.Series) -> Tuple[np.ndarray, List[str]]:
    """Dense class indices by first appearance of each distinct label string."""
    codes, uniques = pd.factorize(raw, sort=False)
    return codes.astype(np.int64), [str(u) for u in uniques]


def load_csv(path: str, label_column: LabelColumn) -> Dataset:
    df = read_table(path)
    label_name = resolve_label_column(df, label_column)
    if df.shape[0] < 1:
        raise DatasetError(f"{path} has a header but no data rows")
    feature_df = df.drop(columns=[label_name])
    if feature_df.shape[1] < 1:
        raise DatasetError(f"{path} has no feature columns besides {label_name!r}")

    X = parse_feature_matrix(feature_df)
    y, class_names = encode_labels(df[label_name])
    if len(class_names) < 2:
        raise TooFewClassesError(label_name, len(class_names))

    logger.info(
        "Loaded %s: %d rows, %d features, %d classes (label column %r)",
        path, X.shape[0], X.shape[1], len(class_names), label_name,
    )
    return Dataset(
        features=X,
        labels=y,
        n_classes=len(class_names),
        class_names=tuple(class_names),
        feature_names=tuple(str(c) for c in feature_df.columns),
    )
