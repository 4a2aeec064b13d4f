from __future__ import annotations

from typing import Any, Optional


class CascadeStackerError(Exception):
    """Root of every error raised on purpose by this package."""


class ConfigError(CascadeStackerError, ValueError):
    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


class DatasetError(CascadeStackerError, ValueError):
    pass


class DatasetFileNotFoundError(DatasetError, FileNotFoundError):
    def __init__(self, path: str):
        super().__init__(f"dataset file not found: {path}")
        self.path = path


class CellParseError(DatasetError):
    def __init__(self, row: int, column: str, value: Any):
        # row is the 1-based line number in the file (header is line 1)
        super().__init__(f"cannot parse cell at line {row}, column {column!r}: {value!r} is not a finite real")
        self.row = row
        self.column = column
        self.value = value


class MissingLabelColumnError(DatasetError):
    def __init__(self, label_column: Any, columns: list):
        super().__init__(f"label column {label_column!r} not found; columns are {columns}")
        self.label_column = label_column
        self.columns = columns


class TooFewClassesError(DatasetError):
    def __init__(self, column: Any, n_classes: int):
        super().__init__(f"label column {column!r} has {n_classes} distinct class(es); need at least 2")
        self.column = column
        self.n_classes = n_classes


class ClassMissingFromTrainError(DatasetError):
    def __init__(self, missing: list):
        super().__init__(
            f"class(es) {missing} absent from the training partition; "
            "re-run with a different --seed or pass --stratify"
        )
        self.missing = missing


class TooFewRowsForFoldsError(DatasetError):
    def __init__(self, n_rows: int, folds: int):
        super().__init__(
            f"cannot split {n_rows} training rows into {folds} cross-validation folds; "
            "use more data, a larger --train-frac or fewer --cv-folds"
        )
        self.n_rows = n_rows
        self.folds = folds


class PrimitiveError(CascadeStackerError, ValueError):
    pass


class WidthMismatchError(PrimitiveError):
    def __init__(self, expected: int, actual: int):
        super().__init__(f"feature width mismatch: expected {expected} columns, got {actual}")
        self.expected = expected
        self.actual = actual


class GenomeError(CascadeStackerError, ValueError):
    pass


class PipelineFitError(CascadeStackerError, RuntimeError):
    def __init__(self, layer: int, node: int, cause: BaseException):
        super().__init__(f"fit failed at layer {layer}, node {node}: {cause}")
        self.layer = layer
        self.node = node
        self.cause = cause


class PipelineFormatError(CascadeStackerError, ValueError):
    pass
