import time
from typing import Any, Dict, List, Optional

from shape_sensing_factory.configs.enums import StageType
from shape_sensing_factory.configs.scenario import ScenarioConfig
from shape_sensing_factory.configs.stages import EstimateOptions
from shape_sensing_factory.configs.tolerances import ToleranceConfig
from shape_sensing_factory.estimation.estimator import estimate
from shape_sensing_factory.estimation.evaluation import evaluate
from shape_sensing_factory.estimation.rendering import render_svg
from shape_sensing_factory.factory.helpers.config_loaders import load_known_params
from shape_sensing_factory.factory.helpers.persistence import (
    KNOWN_PARAMS_FILE,
    OBSERVATIONS_FILE,
    REPORT_FILE,
    REPORT_TEXT_FILE,
    SHAPE_FILE,
    read_observations,
    write_json,
)
from shape_sensing_factory.factory.helpers.stats import generate_stage_stats
from shape_sensing_factory.factory.registry import StageRegistry
from shape_sensing_factory.factory.utils.logging import log_action
from shape_sensing_factory.operators.base_operator import StageOperator


@StageRegistry.register(StageType.ESTIMATE.value)
class EstimateOperator(StageOperator):
    """
    Estimate the shape from observations and known parameters only. The scenario,
    when given, supplies thresholds and, after estimation, the ground truth for the
    error tables.
    """

    command = "estimate"
    options_schema = EstimateOptions

    def _execute(
        self, context, scenario: Optional[ScenarioConfig], options: EstimateOptions, logger=None, **kwargs
    ) -> Dict[str, Any]:
        start = time.time()
        inputs: List[str] = []
        observations = kwargs.get("observations")
        if observations is None:
            obs_path = options.observations or self.out_path(options, OBSERVATIONS_FILE)
            inputs.append(obs_path)
            observations = read_observations(obs_path)
        known_path = options.known_params or self.out_path(options, KNOWN_PARAMS_FILE)
        inputs.append(known_path)
        knowns = load_known_params(known_path)

        tolerances = scenario.tolerances if scenario is not None else ToleranceConfig()
        report = estimate(observations, knowns, tolerances.estimator, tolerances.assembly, logger=logger)
        truth = scenario.target() if scenario is not None and options.evaluate else None
        if truth is not None and not report.is_empty:
            report.evaluation = evaluate(report, truth)

        shape = report.best_shape
        if shape is not None:
            log_action(
                "ASSEMBLE",
                edges=shape.n_e,
                closure=shape.closure_residual,
                support=shape.support,
                mirror_ambiguous=shape.mirror_ambiguous,
                logger=logger,
            )
        elif "assembly_error" in report.diagnostics:
            logger.warning(report.diagnostics["assembly_error"])

        report_path = write_json(self.out_path(options, REPORT_FILE), report.to_dict())
        text_path = self.out_path(options, REPORT_TEXT_FILE)
        with open(text_path, "w") as f:
            f.write(report.to_text())
        svg_path = self.out_path(options, SHAPE_FILE)
        with open(svg_path, "w") as f:
            f.write(render_svg(shape, truth if shape is not None else None))
        log_action("WRITE", report=report_path, shape=svg_path, empty=report.is_empty, logger=logger)

        return {
            "stats": generate_stage_stats(
                len(observations),
                time.time() - start,
                unit="observations",
                length_classes=len(report.accepted_length_classes),
                angle_classes=len(report.accepted_angle_classes),
                edges=report.diagnostics.get("edge_total", 0),
                shapes=len(report.shapes),
            ),
            "inputs": inputs,
            "outputs": [report_path, text_path, svg_path],
            "result": report,
            "empty": report.is_empty,
        }
