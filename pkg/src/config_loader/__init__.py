from .loader import (
    CONFIG_SCHEMA,
    RunConfig,
    build_run_config,
    load_config_file,
    parse_int_list,
    parse_name_list,
    validate_config,
)

__all__ = [
    "CONFIG_SCHEMA",
    "RunConfig",
    "build_run_config",
    "load_config_file",
    "parse_int_list",
    "parse_name_list",
    "validate_config",
]
