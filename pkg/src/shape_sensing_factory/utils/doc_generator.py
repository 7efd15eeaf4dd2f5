from typing import List, Type

from pydantic import BaseModel

import shape_sensing_factory.operators  # noqa: F401  (registers the stages)
from shape_sensing_factory.configs.known_params import KnownParams
from shape_sensing_factory.configs.scenario import ScenarioConfig
from shape_sensing_factory.configs.tolerances import AssemblyConfig, EstimatorConfig, SegmentationConfig
from shape_sensing_factory.factory.registry import StageRegistry
from shape_sensing_factory.factory.utils.logging import log_action


def _field_type(definition: dict) -> str:
    if "type" in definition:
        return definition["type"]
    if "anyOf" in definition:
        return " | ".join(d.get("type", "any") for d in definition["anyOf"])
    if "$ref" in definition:
        return definition["$ref"].rsplit("/", 1)[-1]
    return "any"


def schema_table(model: Type[BaseModel]) -> List[str]:
    """Markdown table of a model's fields with type, default and description."""
    lines = ["| Field | Type | Default | Description |", "| :--- | :--- | :--- | :--- |"]
    for name, d in model.model_json_schema().get("properties", {}).items():
        default = d.get("default", "")
        lines.append(f"| `{name}` | `{_field_type(d)}` | {default} | {d.get('description', '')} |")
    return lines


def generate_docs(output_path: str) -> str:
    """
    Generates a Markdown reference for the scenario format, the thresholds and every
    registered stage.
    """
    lines = ["# Shape Sensing Factory Reference\n"]

    lines.append("## Scenario files\n")
    if ScenarioConfig.__doc__:
        lines.append(f"{ScenarioConfig.__doc__.strip()}\n")
    lines.extend(schema_table(ScenarioConfig))
    lines.append("")

    lines.append("## Tolerances\n")
    for section, model in (
        ("segmentation", SegmentationConfig),
        ("estimator", EstimatorConfig),
        ("assembly", AssemblyConfig),
    ):
        lines.append(f"### `tolerances.{section}`")
        lines.extend(schema_table(model))
        lines.append("")

    lines.append("## Known parameters\n")
    lines.append("The only input of the estimate stage besides the observations.\n")
    lines.extend(schema_table(KnownParams))
    lines.append("")

    lines.append("## Stages\n")
    for stage in StageRegistry.stages():
        op_class = StageRegistry.get_operator(stage)
        lines.append(f"### `{op_class.command}` (`{stage}`, `{op_class.__name__}`)")
        if op_class.__doc__:
            lines.append(f"{op_class.__doc__.strip()}\n")
        lines.extend(schema_table(op_class.options_schema))
        lines.append("")

    text = "\n".join(lines)
    with open(output_path, "w") as f:
        f.write(text)

    log_action("DOCS", path=output_path, stages=len(StageRegistry.stages()))
    return text
