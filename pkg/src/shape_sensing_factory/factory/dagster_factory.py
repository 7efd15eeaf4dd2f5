import os
import time
from pathlib import Path
from typing import Optional

from dagster import Definitions

from shape_sensing_factory.factory.asset_factory import AssetFactory
from shape_sensing_factory.factory.job_factory import JobFactory
from shape_sensing_factory.factory.utils.logging import log_action, log_action_stats, log_header, log_marker
from shape_sensing_factory.utils.exceptions import ShapeFactoryError


class DagsterFactory:
    """Builds Dagster definitions from the scenario files under ``<base_dir>/defs``."""

    def __init__(self, base_dir: Path, verbose_build: Optional[bool] = None, output_root: Optional[Path] = None):
        self.base_dir = Path(base_dir)
        self.asset_factory = AssetFactory(self.base_dir, output_root=output_root)
        self.job_factory = JobFactory()
        self.verbose_build = verbose_build

    def build_definitions(self) -> Definitions:
        # True: always, False: never, None: skip if in a Dagster worker process
        show_logs = self.verbose_build
        if show_logs is None:
            is_worker = "DAGSTER_RUN_ID" in os.environ or "DAGSTER_STEP_KEY" in os.environ
            show_logs = not is_worker

        start_time = time.time()
        if show_logs:
            log_header("Shape Factory | Starting Definition Build")

        defs_dir = self.base_dir / "defs"
        if not defs_dir.is_dir():
            raise ShapeFactoryError(f"no defs directory under {self.base_dir}", error_type="CONFIG_ERROR")

        assets = []
        jobs_config = []
        seen = {}
        for yaml_file in sorted(defs_dir.rglob("*.yaml")):
            try:
                scenario = self.asset_factory.load_scenario(yaml_file)
                if scenario.name in seen:
                    raise ShapeFactoryError(
                        f"scenario name '{scenario.name}' is also used by {seen[scenario.name]}",
                        file_name=yaml_file.name,
                        error_type="CONFIG_ERROR",
                    )
                seen[scenario.name] = yaml_file.name
                file_assets = self.asset_factory.create_assets(scenario)
            except ShapeFactoryError as e:
                if show_logs:
                    log_action("LOAD_FAILED", file=yaml_file.name, error=str(e))
                raise e.with_context(file_name=yaml_file.name)

            assets.extend(file_assets)
            jobs_config.append(
                {
                    "name": f"{scenario.name}_pipeline",
                    "group": scenario.name,
                    "description": f"simulate -> analyze -> estimate for {scenario.name}",
                }
            )
            if show_logs:
                log_action("LOAD_YAML", file=yaml_file.name, scenario=scenario.name, assets=len(file_assets))

        jobs = self.job_factory.create_jobs(jobs_config)

        if show_logs:
            log_marker("mini")
            log_action_stats("BUILD_STATS", start_time, scenarios=len(seen), assets=len(assets), jobs=len(jobs))
            log_marker("strong")

        return Definitions(assets=assets, jobs=jobs)
