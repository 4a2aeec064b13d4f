from .pipeline import TrainedPipeline, augment, fit_pipeline, predict_pipeline
from .serialize import (
    FORMAT_VERSION,
    dumps_pipeline,
    load_pipeline,
    pipeline_from_dict,
    pipeline_to_dict,
    save_pipeline,
)

__all__ = [
    "TrainedPipeline",
    "augment",
    "fit_pipeline",
    "predict_pipeline",
    "FORMAT_VERSION",
    "dumps_pipeline",
    "load_pipeline",
    "pipeline_from_dict",
    "pipeline_to_dict",
    "save_pipeline",
]
