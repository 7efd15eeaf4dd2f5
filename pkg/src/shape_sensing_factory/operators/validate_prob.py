import math
import time
from typing import Any, Dict, List, Optional

import pandas as pd

from shape_sensing_factory.configs.enums import StageType
from shape_sensing_factory.configs.scenario import ScenarioConfig
from shape_sensing_factory.configs.stages import ValidateProbOptions
from shape_sensing_factory.estimation.rendering import render_probability_svg
from shape_sensing_factory.factory.helpers.persistence import VALIDATION_CSV, VALIDATION_SVG
from shape_sensing_factory.factory.helpers.stats import generate_stage_stats
from shape_sensing_factory.factory.registry import StageRegistry
from shape_sensing_factory.factory.utils.logging import log_action, log_action_stats
from shape_sensing_factory.operators.base_operator import StageOperator
from shape_sensing_factory.sensing.monte_carlo import validation_table
from shape_sensing_factory.utils.exceptions import ShapeFactoryError
from shape_sensing_factory.utils.streaming import execute_streaming

# disk and range when no scenario is given
DEFAULT_OMEGA_RADIUS = 200.0
DEFAULT_R_MAX = 100.0


def midpoint_grid(n: int) -> List[float]:
    """n beam angles at the centres of n equal cells of (0, π)."""
    return [(i + 0.5) * math.pi / n for i in range(n)]


@StageRegistry.register(StageType.VALIDATE_PROB.value)
class ValidateProbOperator(StageOperator):
    """Closed-form detection probabilities against Monte Carlo frequencies over a θ grid."""

    command = "validate-prob"
    options_schema = ValidateProbOptions

    def _execute(
        self, context, scenario: Optional[ScenarioConfig], options: ValidateProbOptions, logger=None, **kwargs
    ) -> Dict[str, Any]:
        if options.samples <= 0:
            raise ShapeFactoryError("validate-prob needs a positive sample count", error_type="INVALID_ARGUMENT")
        radius = scenario.omega_radius if scenario is not None else DEFAULT_OMEGA_RADIUS
        r_max = scenario.r_max if scenario is not None else DEFAULT_R_MAX
        seed = scenario.seed if scenario is not None else 0
        thetas = midpoint_grid(options.theta_points)

        start = time.time()
        indexed = list(enumerate(thetas))
        chunks = execute_streaming(
            indexed,
            lambda item: validation_table([item[1]], options.lam, radius, r_max, options.samples, seed + item[0], options.sigma),
            key=lambda item: item[0],
            num_workers=options.workers,
            name="validate-prob",
            logger=logger,
        )
        rows = [row for chunk in chunks for row in chunk]
        flagged = sum(1 for r in rows if r["flag"])
        log_action_stats("VALIDATE_PROB", start, thetas=len(rows), samples=options.samples, flagged=flagged, logger=logger)

        csv_path = self.out_path(options, VALIDATION_CSV)
        pd.DataFrame(rows).to_csv(csv_path, index=False)
        svg_path = self.out_path(options, VALIDATION_SVG)
        with open(svg_path, "w") as f:
            f.write(render_probability_svg(rows, title=f"Detection probability, λ = {options.lam:g}"))
        log_action("WRITE", table=csv_path, plot=svg_path, logger=logger)

        return {
            "stats": generate_stage_stats(len(rows), time.time() - start, unit="thetas", flagged=flagged),
            "outputs": [csv_path, svg_path],
            "result": rows,
        }
