from .scoring import balanced_accuracy
from .validation import FitnessRecord, cross_validate, stratified_folds

__all__ = [
    "balanced_accuracy",
    "FitnessRecord",
    "cross_validate",
    "stratified_folds",
]
