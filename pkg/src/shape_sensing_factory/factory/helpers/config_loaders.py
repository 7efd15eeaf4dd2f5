import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import BaseModel, ValidationError

from shape_sensing_factory.configs.known_params import KnownParams
from shape_sensing_factory.configs.scenario import ScenarioConfig
from shape_sensing_factory.factory.helpers.persistence import read_json
from shape_sensing_factory.utils.exceptions import ShapeFactoryError

# key of the vars files whose mapping is merged under every scenario
DEFAULTS_KEY = "defaults"


def _deep_merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """Recursively merges two dictionaries."""
    for key, value in overrides.items():
        if isinstance(value, dict) and key in base and isinstance(base[key], dict):
            _deep_merge(base[key], value)
        else:
            base[key] = value
    return base


def load_yaml(path: Path) -> Dict[str, Any]:
    """Parse one YAML mapping; syntax errors name the line."""
    try:
        with open(path) as f:
            data = yaml.safe_load(f)
    except FileNotFoundError:
        raise ShapeFactoryError("file not found", file_name=str(path), error_type="CONFIG_ERROR")
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}: " if mark is not None else ""
        problem = getattr(e, "problem", None) or str(e)
        raise ShapeFactoryError(f"{where}{problem}", file_name=str(path), error_type="CONFIG_ERROR")
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ShapeFactoryError("top level must be a mapping", file_name=str(path), error_type="CONFIG_ERROR")
    return data


def load_env_config(directory: Path) -> Dict[str, Any]:
    """
    Loads common and environment-specific configurations from the specified directory.
    Follows the pattern: common.yaml -> <ENV>.yaml (deep merged).
    """
    env = os.getenv("ENV", "dev")
    all_config: Dict[str, Any] = {}
    for path in (directory / "common.yaml", directory / f"{env}.yaml"):
        if path.exists():
            _deep_merge(all_config, load_yaml(path))
    return all_config


def vars_dir_for(scenario_path: Path) -> Path:
    """The ``vars/`` directory next to the directory holding the scenario file."""
    return scenario_path.resolve().parent.parent / "vars"


def validation_message(error: ValidationError) -> str:
    parts = []
    for err in error.errors():
        loc = ".".join(str(p) for p in err.get("loc", ())) or "<root>"
        parts.append(f"{loc}: {err.get('msg')}")
    return "; ".join(parts)


def _build(model: type, data: Dict[str, Any], file_name: Optional[str]) -> BaseModel:
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise ShapeFactoryError(validation_message(e), file_name=file_name, error_type="CONFIG_ERROR")


def scenario_from_dict(
    data: Dict[str, Any],
    defaults: Optional[Dict[str, Any]] = None,
    overrides: Optional[Dict[str, Any]] = None,
    file_name: Optional[str] = None,
) -> ScenarioConfig:
    """Merge defaults, the scenario mapping and overrides (in that order) and validate."""
    merged: Dict[str, Any] = {}
    _deep_merge(merged, dict(defaults or {}))
    _deep_merge(merged, data)
    _deep_merge(merged, {k: v for k, v in (overrides or {}).items() if v is not None})
    return _build(ScenarioConfig, merged, file_name)


def load_scenario(path: Path, overrides: Optional[Dict[str, Any]] = None) -> ScenarioConfig:
    path = Path(path)
    vars_dir = vars_dir_for(path)
    defaults = load_env_config(vars_dir).get(DEFAULTS_KEY, {}) if vars_dir.is_dir() else {}
    return scenario_from_dict(load_yaml(path), defaults, overrides, file_name=str(path))


def load_known_params(path: Path) -> KnownParams:
    """Known parameters from a JSON file, or YAML for hand-written ones."""
    path = Path(path)
    data = read_json(path) if path.suffix == ".json" else load_yaml(path)
    return _build(KnownParams, data, str(path))
