from __future__ import annotations

import logging
from dataclasses import dataclass
from types import MappingProxyType
from typing import Any, Dict, List, Mapping, Optional, Tuple, Type

import numpy as np

from src.datasets import Dataset
from src.errors import PipelineFormatError, PrimitiveError, WidthMismatchError
from src.seeding import make_rng

from .base import Classifier, ConstantClassifier
from .ensembles import AdaBoostClassifier, BaggingClassifier, ExtraTreesClassifier, RandomForestClassifier
from .linear import LogisticRegressionClassifier, PerceptronClassifier
from .naive_bayes import BernoulliNBClassifier, GaussianNBClassifier
from .neighbors import KNeighborsClassifier
from .trees import DecisionTreeClassifier

logger = logging.getLogger(__name__)

# catalog order is part of the contract: random genomes index into it
_REGISTRY: Dict[str, Type[Classifier]] = {
    cls.name: cls
    for cls in (
        PerceptronClassifier,
        LogisticRegressionClassifier,
        DecisionTreeClassifier,
        KNeighborsClassifier,
        GaussianNBClassifier,
        BernoulliNBClassifier,
        RandomForestClassifier,
        ExtraTreesClassifier,
        AdaBoostClassifier,
        BaggingClassifier,
    )
}


@dataclass(frozen=True)
class PrimitiveSpec:
    name: str
    hyper_grid: Mapping[str, Tuple[Any, ...]]

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "hyper_grid": {k: list(v) for k, v in self.hyper_grid.items()}}


@dataclass(frozen=True)
class NodeSpec:
    """One cascade node: a primitive name plus one chosen value per grid key."""

    primitive: str
    hyper_values: Mapping[str, Any]

    def __post_init__(self):
        object.__setattr__(self, "hyper_values", MappingProxyType(dict(self.hyper_values)))

    def __hash__(self):
        return hash((self.primitive, tuple(sorted((k, repr(v)) for k, v in self.hyper_values.items()))))

    def __eq__(self, other):
        return (
            isinstance(other, NodeSpec)
            and self.primitive == other.primitive
            and dict(self.hyper_values) == dict(other.hyper_values)
        )

    def __reduce__(self):
        # mappingproxy does not pickle; rebuild from a plain dict in worker processes
        return (NodeSpec, (self.primitive, dict(self.hyper_values)))

    def with_value(self, key: str, value: Any) -> "NodeSpec":
        hv = dict(self.hyper_values)
        hv[key] = value
        return NodeSpec(self.primitive, hv)

    def to_dict(self) -> Dict[str, Any]:
        return {"primitive": self.primitive, "hypers": dict(self.hyper_values)}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "NodeSpec":
        return cls(primitive=d["primitive"], hyper_values=d.get("hypers", {}))


def catalog() -> List[PrimitiveSpec]:
    return [PrimitiveSpec(name, MappingProxyType(dict(cls.hyper_grid))) for name, cls in _REGISTRY.items()]


def catalog_names() -> List[str]:
    return list(_REGISTRY)


def get_spec(name: str) -> PrimitiveSpec:
    if name not in _REGISTRY:
        raise PrimitiveError(f"unknown primitive {name!r}; known: {catalog_names()}")
    return PrimitiveSpec(name, MappingProxyType(dict(_REGISTRY[name].hyper_grid)))


def validate_node(spec: NodeSpec) -> None:
    grid = get_spec(spec.primitive).hyper_grid
    if set(spec.hyper_values) != set(grid):
        raise PrimitiveError(
            f"{spec.primitive}: hyperparameters {sorted(spec.hyper_values)} do not match grid keys {sorted(grid)}"
        )
    for key, value in spec.hyper_values.items():
        if value not in grid[key]:
            raise PrimitiveError(f"{spec.primitive}: {key}={value!r} is not in grid {list(grid[key])}")


def build_classifier(spec: NodeSpec) -> Classifier:
    return _REGISTRY[spec.primitive](**dict(spec.hyper_values))


@dataclass(frozen=True, eq=False)
class TrainedPrimitive:
    spec: NodeSpec
    model: Classifier
    n_classes_seen: int
    n_features: int

    @property
    def is_constant(self) -> bool:
        return isinstance(self.model, ConstantClassifier)

    def to_dict(self) -> Dict[str, Any]:
        model_name = self.model.name
        return {
            **self.spec.to_dict(),
            "model": model_name,
            "state_version": self.model.state_version,
            "n_classes": self.n_classes_seen,
            "n_features": self.n_features,
            "state": self.model.get_state(),
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "TrainedPrimitive":
        spec = NodeSpec.from_dict(d)
        model_name = d.get("model", spec.primitive)
        if model_name == ConstantClassifier.name:
            model: Classifier = ConstantClassifier()
        elif model_name in _REGISTRY:
            model = build_classifier(spec)
        else:
            raise PipelineFormatError(f"unknown primitive {model_name!r} in pipeline file")
        if d.get("state_version") != model.state_version:
            raise PipelineFormatError(
                f"{model_name}: state version {d.get('state_version')!r} is not supported (expected {model.state_version})"
            )
        try:
            model.set_state(d["state"])
        except (KeyError, TypeError, ValueError) as e:
            raise PipelineFormatError(f"{model_name}: corrupt fitted state: {e}") from e
        return cls(spec=spec, model=model, n_classes_seen=int(d["n_classes"]), n_features=int(d["n_features"]))


def fit(spec: NodeSpec, train: Dataset, seed: int) -> TrainedPrimitive:
    """Fit one primitive; a single-class training set yields a constant predictor."""
    validate_node(spec)
    X, y = train.features, train.labels
    present = np.unique(y)
    if len(present) == 1:
        logger.debug("%s: single-class training data, using a constant predictor", spec.primitive)
        model: Classifier = ConstantClassifier(int(present[0]))
    else:
        model = build_classifier(spec).fit(X, y, train.n_classes, make_rng(seed))
    return TrainedPrimitive(spec=spec, model=model, n_classes_seen=train.n_classes, n_features=train.n_cols)


def predict(p: TrainedPrimitive, features: np.ndarray) -> np.ndarray:
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != p.n_features:
        raise WidthMismatchError(p.n_features, X.shape[1] if X.ndim == 2 else -1)
    out = p.model.predict(X)
    return np.asarray(out, dtype=np.int64)
