from .base import Classifier, ConstantClassifier
from .catalog import (
    NodeSpec,
    PrimitiveSpec,
    TrainedPrimitive,
    build_classifier,
    catalog,
    catalog_names,
    fit,
    get_spec,
    predict,
    validate_node,
)
from .ensembles import AdaBoostClassifier, BaggingClassifier, ExtraTreesClassifier, RandomForestClassifier

__all__ = [
    "Classifier",
    "ConstantClassifier",
    "NodeSpec",
    "PrimitiveSpec",
    "TrainedPrimitive",
    "build_classifier",
    "catalog",
    "catalog_names",
    "fit",
    "get_spec",
    "predict",
    "validate_node",
    "AdaBoostClassifier",
    "BaggingClassifier",
    "ExtraTreesClassifier",
    "RandomForestClassifier",
]
