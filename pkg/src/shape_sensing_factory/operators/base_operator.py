"""
Base operator for pipeline stages.

- execute() orchestrates the flow and writes the run manifest
- pre_execute() for setup and validation
- _execute() for stage-specific logic (abstract)
- post_execute() for the stats line

The same operator runs from the CLI (no context) and inside Dagster assets, where
its log lines go to ``context.log``.
"""
import os
import time
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Type

from shape_sensing_factory.configs.scenario import ScenarioConfig
from shape_sensing_factory.configs.stages import StageOptions
from shape_sensing_factory.factory.utils.logging import get_logger, log_action, log_header, log_marker
from shape_sensing_factory.models.manifest import RunManifest
from shape_sensing_factory.utils.exceptions import ShapeFactoryError


class StageOperator(ABC):
    """
    Base class for all stage operators.

    Subclasses implement _execute() and return a dict with ``stats`` (counts for
    logs and asset metadata), ``outputs`` (written paths) and optionally ``inputs``
    and ``result`` (the in-memory product of the stage).
    """

    stage: str = "STAGE"
    command: str = "stage"
    options_schema: Type[StageOptions] = StageOptions

    def _logger(self, context):
        return context.log if context is not None and hasattr(context, "log") else get_logger()

    def execute(self, context, scenario: Optional[ScenarioConfig], options: StageOptions, **kwargs) -> Dict[str, Any]:
        """
        Main execution method called by the CLI and the asset factory.

        1. Pre-execution (output directory, validation)
        2. Main execution (stage-specific)
        3. Post-execution (stats line, manifest)
        """
        logger = self._logger(context)
        name = scenario.name if scenario is not None else "-"

        if context is None:
            log_header(f"STAGE | {self.__class__.__name__} ({name})", logger=logger)
            self.log_stage_configs(scenario, options, logger=logger)
            log_marker("mini", logger=logger)
        else:
            # one block in the Dagster UI
            log_block = [
                log_header(f"STAGE | {self.__class__.__name__} ({name})", logger=False),
                self.log_stage_configs(scenario, options, logger=False),
                log_marker("mini", logger=False),
            ]
            logger.info("\n" + "\n".join(log_block))

        manifest = RunManifest(
            command=self.command,
            scenario_hash=scenario.config_hash() if scenario is not None else None,
            seed=scenario.seed if scenario is not None else None,
            scenario=scenario.model_dump(mode="json") if scenario is not None else None,
            options=options.model_dump(mode="json"),
        )
        start_time = time.time()

        try:
            self.pre_execute(context, scenario, options, **kwargs)
            result = self._execute(context, scenario, options, logger=logger, **kwargs)
        except ShapeFactoryError as e:
            raise e.with_context(stage=self.stage)

        duration = time.time() - start_time
        manifest.inputs = list(result.get("inputs", []))
        manifest.outputs = list(result.get("outputs", []))
        result["manifest"] = manifest.finish().write(options.out_dir)
        self.post_execute(context, result, duration=duration, logger=logger)
        log_marker("strong", logger=logger)
        return result

    def pre_execute(self, context, scenario: Optional[ScenarioConfig], options: StageOptions, **kwargs) -> None:
        os.makedirs(options.out_dir, exist_ok=True)

    @abstractmethod
    def _execute(
        self, context, scenario: Optional[ScenarioConfig], options: StageOptions, logger=None, **kwargs
    ) -> Dict[str, Any]:
        raise NotImplementedError("Subclass must implement _execute()")

    def post_execute(self, context, result: Dict[str, Any], duration: float = 0.0, logger=None) -> None:
        stats = dict(result.get("stats", {}) if result else {})
        stats["duration"] = f"{round(duration, 2)}s"
        log_action("STAGE_STATS", logger=logger, **stats)

    def log_stage_configs(self, scenario, options: StageOptions, logger=None) -> str:
        def _summary(config) -> str:
            if config is None:
                return "-"
            data = config.to_summary_dict()
            return " | ".join(f"{k}: {v}" for k, v in data.items() if v is not None)

        lines: List[str] = [
            log_action("SCENARIO", summary=_summary(scenario), logger=logger),
            log_action("OPTIONS", summary=_summary(options), logger=logger),
        ]
        return "\n".join(lines)

    def out_path(self, options: StageOptions, file_name: str) -> str:
        return os.path.join(options.out_dir, file_name)
