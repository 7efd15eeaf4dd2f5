import time
from typing import Any, Dict, List, Optional

from shape_sensing_factory.configs.enums import StageType
from shape_sensing_factory.configs.known_params import KnownParams
from shape_sensing_factory.configs.scenario import ScenarioConfig
from shape_sensing_factory.configs.stages import SimulateOptions
from shape_sensing_factory.factory.helpers.persistence import KNOWN_PARAMS_FILE, TRACES_FILE, write_json, write_traces
from shape_sensing_factory.factory.helpers.stats import generate_stage_stats
from shape_sensing_factory.factory.registry import StageRegistry
from shape_sensing_factory.factory.utils.logging import log_action, log_action_stats
from shape_sensing_factory.models.trace import TraceSample
from shape_sensing_factory.operators.base_operator import StageOperator
from shape_sensing_factory.sensing.simulation import simulate_sensor
from shape_sensing_factory.utils.exceptions import ShapeFactoryError
from shape_sensing_factory.utils.streaming import execute_streaming


def write_known_params(scenario: ScenarioConfig, path: str) -> str:
    """The estimator's view of the scenario: θ and v per sensor, r_max and L_Ω."""
    return write_json(path, KnownParams.from_scenario(scenario).model_dump(mode="json"))


@StageRegistry.register(StageType.SIMULATE.value)
class SimulateOperator(StageOperator):
    """Sample every sensor of the scenario and write the traces and the known parameters."""

    command = "simulate"
    options_schema = SimulateOptions

    def _execute(
        self, context, scenario: Optional[ScenarioConfig], options: SimulateOptions, logger=None, **kwargs
    ) -> Dict[str, Any]:
        if scenario is None:
            raise ShapeFactoryError("simulation needs a scenario", error_type="INVALID_ARGUMENT")
        polygon = scenario.target()
        log_action(
            "LOAD_SCENARIO",
            name=scenario.name,
            sensors=scenario.n_s,
            edges=polygon.n_e,
            seed=scenario.seed,
            mode=scenario.line_mode.value,
            logger=logger,
        )
        if scenario.n_s == 0:
            logger.warning("scenario has no sensors, the trace file will be empty")

        start = time.time()
        traces: List[List[TraceSample]] = execute_streaming(
            range(scenario.n_s),
            lambda i: simulate_sensor(scenario, polygon, i)[1],
            key=lambda i: i,
            num_workers=options.workers,
            name="simulate",
            logger=logger,
        )
        detecting = sum(1 for samples in traces if any(s.r is not None for s in samples))
        log_action_stats("SIMULATE", start, sensors=len(traces), detecting=detecting, logger=logger)

        traces_path = self.out_path(options, TRACES_FILE)
        n_samples = write_traces(traces_path, traces)
        known_path = write_known_params(scenario, self.out_path(options, KNOWN_PARAMS_FILE))
        log_action("WRITE", traces=traces_path, samples=n_samples, known=known_path, logger=logger)

        return {
            "stats": generate_stage_stats(len(traces), time.time() - start, samples=n_samples, detecting=detecting),
            "outputs": [traces_path, known_path],
            "result": traces,
        }
