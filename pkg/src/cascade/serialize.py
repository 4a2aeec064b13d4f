from __future__ import annotations

import json
import logging
from typing import Any, Dict, Mapping

from src.errors import GenomeError, PipelineFormatError
from src.genome import PipelineGenome
from src.primitives import TrainedPrimitive

from .pipeline import TrainedPipeline

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


def pipeline_to_dict(p: TrainedPipeline) -> Dict[str, Any]:
    return {
        "format_version": FORMAT_VERSION,
        "genome": p.genome.to_dict(),
        "raw_width": p.raw_width,
        "class_names": list(p.class_names),
        "feature_names": list(p.feature_names),
        "label_column": p.label_column,
        "nodes": [[node.to_dict() for node in layer] for layer in p.fitted_nodes],
    }


def pipeline_from_dict(d: Mapping[str, Any]) -> TrainedPipeline:
    if not isinstance(d, Mapping):
        raise PipelineFormatError("pipeline document must be a JSON object")
    version = d.get("format_version")
    if version != FORMAT_VERSION:
        raise PipelineFormatError(f"pipeline format version {version!r} is not supported (expected {FORMAT_VERSION})")
    try:
        genome = PipelineGenome.from_dict(d["genome"])
        nodes = tuple(tuple(TrainedPrimitive.from_dict(n) for n in layer) for layer in d["nodes"])
        raw_width = int(d["raw_width"])
        class_names = tuple(str(c) for c in d["class_names"])
        feature_names = tuple(str(c) for c in d.get("feature_names", []))
    except (KeyError, TypeError, ValueError, GenomeError) as e:
        if isinstance(e, PipelineFormatError):
            raise
        raise PipelineFormatError(f"malformed pipeline document: {e}") from e
    if tuple(len(layer) for layer in nodes) != genome.shape:
        raise PipelineFormatError(f"fitted node shape does not match genome shape {genome.shape}")
    return TrainedPipeline(
        genome=genome,
        fitted_nodes=nodes,
        raw_width=raw_width,
        class_names=class_names,
        feature_names=feature_names,
        label_column=d.get("label_column"),
    )


def dumps_pipeline(p: TrainedPipeline) -> str:
    return json.dumps(pipeline_to_dict(p), indent=1, sort_keys=False) + "\n"


def save_pipeline(p: TrainedPipeline, path: str) -> str:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps_pipeline(p))
    return path


def load_pipeline(path: str) -> TrainedPipeline:
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except FileNotFoundError as e:
        raise PipelineFormatError(f"pipeline file not found: {path}") from e
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise PipelineFormatError(f"{path} is not valid JSON: {e}") from e
    return pipeline_from_dict(doc)
