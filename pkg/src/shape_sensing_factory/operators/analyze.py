import time
from typing import Any, Dict, List, Optional, Tuple

from shape_sensing_factory.configs.enums import StageType
from shape_sensing_factory.configs.scenario import ScenarioConfig
from shape_sensing_factory.configs.stages import AnalyzeOptions
from shape_sensing_factory.factory.helpers.persistence import (
    KNOWN_PARAMS_FILE,
    OBSERVATIONS_FILE,
    TRACES_FILE,
    read_traces,
    write_observations,
)
from shape_sensing_factory.factory.helpers.stats import generate_stage_stats
from shape_sensing_factory.factory.registry import StageRegistry
from shape_sensing_factory.factory.utils.logging import log_action, log_action_stats
from shape_sensing_factory.models.observations import ObservationSet
from shape_sensing_factory.models.trace import TraceSample
from shape_sensing_factory.operators.base_operator import StageOperator
from shape_sensing_factory.operators.simulate import write_known_params
from shape_sensing_factory.sensing.analysis import analyze_analytic, analyze_samples
from shape_sensing_factory.sensing.simulation import STREAM_SLOPE_NOISE, analytic_trace, draw_sensor, sensor_rng
from shape_sensing_factory.utils.exceptions import ShapeFactoryError
from shape_sensing_factory.utils.streaming import execute_streaming


@StageRegistry.register(StageType.ANALYZE.value)
class AnalyzeOperator(StageOperator):
    """
    Cut traces into segments and extract observations. Slope noise is drawn from
    each sensor's own stream so results do not depend on worker scheduling.
    """

    command = "analyze"
    options_schema = AnalyzeOptions

    def _sampled(self, scenario: ScenarioConfig, item: Tuple[int, List[TraceSample]]) -> ObservationSet:
        sensor_id, samples = item
        _, obs = analyze_samples(
            samples,
            scenario.report_period,
            scenario.speed_for(sensor_id),
            scenario.r_max,
            scenario.tolerances.segmentation,
            scenario.epsilon_s,
            sensor_rng(scenario.seed, STREAM_SLOPE_NOISE, sensor_id),
        )
        return obs

    def _analytic(self, scenario: ScenarioConfig, polygon, sensor_id: int) -> ObservationSet:
        sensor = draw_sensor(scenario, sensor_id)
        trace = analytic_trace(sensor, polygon, scenario.r_max, scenario.tolerances.segmentation.continuity_tolerance)
        _, obs = analyze_analytic(trace, scenario.epsilon_s, sensor_rng(scenario.seed, STREAM_SLOPE_NOISE, sensor_id))
        return obs

    def _execute(
        self, context, scenario: Optional[ScenarioConfig], options: AnalyzeOptions, logger=None, **kwargs
    ) -> Dict[str, Any]:
        if scenario is None:
            raise ShapeFactoryError("analysis needs the scenario's report period and sensor speeds", error_type="INVALID_ARGUMENT")
        start = time.time()
        inputs: List[str] = []

        if options.analytic:
            polygon = scenario.target()
            items = list(range(scenario.n_s))
            results = execute_streaming(
                items,
                lambda i: self._analytic(scenario, polygon, i),
                key=lambda i: i,
                num_workers=options.workers,
                name="analyze",
                logger=logger,
            )
        else:
            traces = kwargs.get("traces")
            if traces is None:
                traces_path = options.traces or self.out_path(options, TRACES_FILE)
                inputs.append(traces_path)
                by_sensor = read_traces(traces_path)
            else:
                by_sensor = {samples[0].sensor_id: samples for samples in traces if samples}
            items = sorted(by_sensor.items())
            results = execute_streaming(
                items,
                lambda item: self._sampled(scenario, item),
                key=lambda item: item[0],
                num_workers=options.workers,
                name="analyze",
                logger=logger,
            )

        observations = ObservationSet()
        for obs in results:
            observations.extend(obs)
        log_action_stats(
            "ANALYZE",
            start,
            sensors=len(items),
            edges=len(observations.edges),
            vertices=len(observations.vertices),
            adjacencies=len(observations.adjacencies),
            analytic=options.analytic,
            logger=logger,
        )

        obs_path = self.out_path(options, OBSERVATIONS_FILE)
        n_records = write_observations(obs_path, observations)
        known_path = write_known_params(scenario, self.out_path(options, KNOWN_PARAMS_FILE))
        log_action("WRITE", observations=obs_path, records=n_records, logger=logger)

        return {
            "stats": generate_stage_stats(
                len(items),
                time.time() - start,
                edges=len(observations.edges),
                vertices=len(observations.vertices),
                adjacencies=len(observations.adjacencies),
            ),
            "inputs": inputs,
            "outputs": [obs_path, known_path],
            "result": observations,
        }
