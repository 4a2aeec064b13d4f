import yaml
from dataclasses import dataclass, field, fields
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

from src.errors import ConfigError
from src.primitives import catalog_names


CONFIG_SCHEMA: Dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "cascade-stacker search configuration",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "data": {"type": "string", "description": "CSV dataset path"},
        "label_col": {"type": ["string", "integer"], "description": "label column name or index"},
        "train_fraction": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1, "default": 0.8},
        "stratify": {"type": "boolean", "default": False},
        "max_layers": {"type": "integer", "minimum": 1, "default": 5},
        "max_nodes": {"type": "integer", "minimum": 1, "default": 3},
        "primitives": {
            "type": ["array", "null"],
            "items": {"enum": catalog_names()},
            "description": "primitive allow-list; null means the whole catalog",
        },
        "fixed_shape": {
            "type": ["array", "null"],
            "items": {"type": "integer", "minimum": 1},
            "description": "explicit node count per layer, last entry 1",
        },
        "population_n": {"type": "integer", "minimum": 4, "multipleOf": 2, "default": 200},
        "iterations_m": {"type": "integer", "minimum": 0, "default": 10},
        "cv_folds": {"type": "integer", "minimum": 2, "default": 5},
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1, "default": 0},
        "workers": {"type": "integer", "minimum": 1, "default": 1},
        "output_dir": {"type": "string", "default": "reports/search"},
        "trials": {"type": "integer", "minimum": 1, "default": 1},
        "baseline": {"type": "boolean", "default": False},
        "plot": {"type": "boolean", "default": False},
    },
}

_TYPES = {
    "string": lambda v: isinstance(v, str),
    "integer": lambda v: isinstance(v, int) and not isinstance(v, bool),
    "number": lambda v: isinstance(v, (int, float)) and not isinstance(v, bool),
    "boolean": lambda v: isinstance(v, bool),
    "array": lambda v: isinstance(v, list),
    "null": lambda v: v is None,
}


@dataclass
class RunConfig:
    data: Optional[str] = None
    label_col: Union[str, int] = -1
    train_fraction: float = 0.8
    stratify: bool = False
    max_layers: int = 5
    max_nodes: int = 3
    primitives: Optional[List[str]] = None
    fixed_shape: Optional[List[int]] = None
    population_n: int = 200
    iterations_m: int = 10
    cv_folds: int = 5
    seed: int = 0
    workers: int = 1
    output_dir: str = "reports/search"
    trials: int = 1
    baseline: bool = False
    plot: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _check_value(key: str, value: Any, rule: Mapping[str, Any]) -> None:
    allowed = rule.get("type")
    if allowed is not None:
        kinds = [allowed] if isinstance(allowed, str) else allowed
        if not any(_TYPES[k](value) for k in kinds):
            raise ConfigError(f"{key}: expected {' or '.join(kinds)}, got {value!r}", key)
    if value is None:
        return
    if "minimum" in rule and value < rule["minimum"]:
        raise ConfigError(f"{key}: must be >= {rule['minimum']}, got {value}", key)
    if "maximum" in rule and value > rule["maximum"]:
        raise ConfigError(f"{key}: must be <= {rule['maximum']}, got {value}", key)
    if "exclusiveMinimum" in rule and value <= rule["exclusiveMinimum"]:
        raise ConfigError(f"{key}: must be > {rule['exclusiveMinimum']}, got {value}", key)
    if "exclusiveMaximum" in rule and value >= rule["exclusiveMaximum"]:
        raise ConfigError(f"{key}: must be < {rule['exclusiveMaximum']}, got {value}", key)
    if "multipleOf" in rule and value % rule["multipleOf"]:
        raise ConfigError(f"{key}: must be a multiple of {rule['multipleOf']}, got {value}", key)
    if "enum" in rule and value not in rule["enum"]:
        raise ConfigError(f"{key}: {value!r} is not one of {rule['enum']}", key)
    if "items" in rule and isinstance(value, list):
        for i, item in enumerate(value):
            _check_value(f"{key}[{i}]", item, rule["items"])


def validate_config(cfg: Mapping[str, Any]) -> None:
    if not isinstance(cfg, Mapping):
        raise ConfigError("config must be a mapping of keys to values")
    props = CONFIG_SCHEMA["properties"]
    for key, value in cfg.items():
        if key not in props:
            raise ConfigError(f"unknown config key: {key}", key)
        _check_value(key, value, props[key])


def load_config_file(path: str) -> Dict[str, Any]:
    """Read a YAML (or JSON) config file and validate it against CONFIG_SCHEMA."""
    try:
        with open(path, "r") as f:
            cfg = yaml.safe_load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {path}", "config") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"config file {path} is not valid YAML/JSON: {e}", "config") from e
    if cfg is None:
        return {}
    validate_config(cfg)
    return cfg


def build_run_config(file_cfg: Optional[Mapping[str, Any]] = None, overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """Defaults, then config-file values, then flag overrides (``None`` means unset)."""
    merged: Dict[str, Any] = {}
    merged.update(file_cfg or {})
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    validate_config(merged)
    return RunConfig(**merged)


def parse_int_list(text: str) -> List[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as e:
        raise ConfigError(f"expected comma-separated integers, got {text!r}", "fixed_shape") from e


def parse_name_list(text: str) -> List[str]:
    return [tok.strip() for tok in text.split(",") if tok.strip()]
