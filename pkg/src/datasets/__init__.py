from .dataset import RAW, ColumnTag, Dataset
from .loader import encode_labels, load_csv, parse_feature_matrix, read_table, resolve_label_column
from .split import SplitSpec, shuffle_split, train_size
from .synthetic import make_blobs, make_parity, to_frame, write_csv

__all__ = [
    "RAW",
    "ColumnTag",
    "Dataset",
    "encode_labels",
    "load_csv",
    "parse_feature_matrix",
    "read_table",
    "resolve_label_column",
    "SplitSpec",
    "shuffle_split",
    "train_size",
    "make_blobs",
    "make_parity",
    "to_frame",
    "write_csv",
]
