from typing import Optional

from pydantic import Field

from shape_sensing_factory.configs.base import BaseConfigModel
from shape_sensing_factory.utils.streaming import default_workers


class StageOptions(BaseConfigModel):
    """Where a stage writes and how wide it fans out."""

    out_dir: str = Field(default="out", description="Directory receiving the stage outputs and its manifest")
    workers: int = Field(default_factory=default_workers, ge=1, description="Worker threads for per-sensor work")


class SimulateOptions(StageOptions):
    pass


class AnalyzeOptions(StageOptions):
    traces: Optional[str] = Field(default=None, description="Trace JSONL; defaults to traces.jsonl in out_dir")
    analytic: bool = Field(
        default=False, description="Cut exact continuous traces regenerated from the scenario instead of samples"
    )


class EstimateOptions(StageOptions):
    observations: Optional[str] = Field(default=None, description="Observation JSONL; defaults to out_dir")
    known_params: Optional[str] = Field(default=None, description="Known-parameter JSON; defaults to out_dir")
    evaluate: bool = Field(default=True, description="Compare against the scenario polygon when one is available")


class ValidateProbOptions(StageOptions):
    lam: float = Field(default=50.0, gt=0, description="Edge length of the square / L-shape arm used as target")
    samples: int = Field(default=20000, description="Monte Carlo sensors per θ value")
    theta_points: int = Field(default=16, ge=1, description="Points of the θ grid over (0, π)")
    sigma: float = Field(default=3.0, gt=0, description="Flag points further than this many binomial σ")
