import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Type

from dagster import AssetExecutionContext, AssetsDefinition, Config, MetadataValue, asset
from pydantic import create_model

# Import operators package to start registration
import shape_sensing_factory.operators as _operators  # noqa: F401
from shape_sensing_factory.configs.enums import STAGE_TO_KINDS, StageType
from shape_sensing_factory.configs.scenario import ScenarioConfig
from shape_sensing_factory.configs.stages import AnalyzeOptions, EstimateOptions, SimulateOptions, StageOptions
from shape_sensing_factory.factory.helpers.config_loaders import (
    DEFAULTS_KEY,
    load_env_config,
    load_yaml,
    scenario_from_dict,
)
from shape_sensing_factory.factory.registry import StageRegistry
from shape_sensing_factory.utils.exceptions import ShapeFactoryError

# asset suffix, stage and options type, in pipeline order
ASSET_STAGES = (
    ("traces", StageType.SIMULATE, SimulateOptions),
    ("observations", StageType.ANALYZE, AnalyzeOptions),
    ("estimate", StageType.ESTIMATE, EstimateOptions),
)

_VALID_NAME = re.compile(r"^[A-Za-z0-9_]+$")


def _metadata_value(value: Any):
    if isinstance(value, bool):
        return MetadataValue.bool(value)
    if isinstance(value, int):
        return MetadataValue.int(value)
    if isinstance(value, float):
        return MetadataValue.float(value)
    return MetadataValue.text(str(value))


class AssetFactory:
    """
    Turns scenario files into Dagster assets: for a scenario named ``foo``,
    ``foo_traces -> foo_observations -> foo_estimate`` in group ``foo``. Stages hand
    their products over through files in ``<output_root>/foo``.
    """

    def __init__(self, base_dir: Path, output_root: Optional[Path] = None):
        self.base_dir = Path(base_dir)
        self.output_root = Path(output_root) if output_root is not None else self.base_dir / "out"
        vars_dir = self.base_dir / "vars"
        self.defaults = load_env_config(vars_dir).get(DEFAULTS_KEY, {}) if vars_dir.is_dir() else {}

    def load_scenario(self, yaml_file: Path) -> ScenarioConfig:
        scenario = scenario_from_dict(load_yaml(yaml_file), self.defaults, file_name=yaml_file.name)
        if not _VALID_NAME.match(scenario.name):
            raise ShapeFactoryError(
                f"scenario name '{scenario.name}' must only contain letters, digits and underscores",
                file_name=yaml_file.name,
                error_type="CONFIG_ERROR",
            )
        return scenario

    def _runtime_config(self, asset_name: str) -> Type[Config]:
        # Launchpad overrides for a single materialization
        return create_model(
            f"{asset_name}_config",
            seed=(Optional[int], None),
            n_s=(Optional[int], None),
            workers=(Optional[int], None),
            __base__=Config,
            __module__=__name__,
        )

    @staticmethod
    def resolve(scenario: ScenarioConfig, runtime_config: Config) -> ScenarioConfig:
        """The scenario with the run's seed / n_s overrides applied and re-validated."""
        overrides = {k: v for k, v in (("seed", runtime_config.seed), ("n_s", runtime_config.n_s)) if v is not None}
        if not overrides:
            return scenario
        return ScenarioConfig.model_validate({**scenario.model_dump(), **overrides})

    def _create_asset(
        self,
        scenario: ScenarioConfig,
        suffix: str,
        stage: StageType,
        options_type: Type[StageOptions],
        upstream: Optional[str],
    ) -> AssetsDefinition:
        name = f"{scenario.name}_{suffix}"
        operator_class = StageRegistry.get_operator(stage.value)
        if operator_class is None:
            raise ShapeFactoryError(f"no operator registered for stage {stage.value}", error_type="CONFIG_ERROR")
        operator = operator_class()
        out_dir = str(self.output_root / scenario.name)
        RuntimeConfig = self._runtime_config(name)

        metadata = {
            "Scenario": MetadataValue.json(scenario.model_dump(mode="json")),
            "scenario_hash": MetadataValue.text(scenario.config_hash()),
            "out_dir": MetadataValue.path(out_dir),
        }

        @asset(
            name=name,
            group_name=scenario.name,
            description=f"{operator_class.__doc__.strip().splitlines()[0]} ({scenario.description or scenario.name})",
            deps=[upstream] if upstream else [],
            kinds={k.value for k in STAGE_TO_KINDS[stage]},
            metadata=metadata,
        )
        def _generated_asset(context: AssetExecutionContext, config: RuntimeConfig):
            resolved = self.resolve(scenario, config)
            option_values: Dict[str, Any] = {"out_dir": out_dir}
            if config.workers:
                option_values["workers"] = config.workers
            results = operator.execute(context, resolved, options_type(**option_values))
            context.add_output_metadata({k: _metadata_value(v) for k, v in results.get("stats", {}).items()})
            return None

        return _generated_asset

    def create_assets(self, scenario: ScenarioConfig) -> List[AssetsDefinition]:
        assets = []
        upstream = None
        for suffix, stage, options_type in ASSET_STAGES:
            assets.append(self._create_asset(scenario, suffix, stage, options_type, upstream))
            upstream = f"{scenario.name}_{suffix}"
        return assets
