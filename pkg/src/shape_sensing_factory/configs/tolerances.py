from typing import Optional

from pydantic import Field

from shape_sensing_factory.configs.base import BaseConfigModel


class SegmentationConfig(BaseConfigModel):
    """Thresholds used to cut a sampled trace into linear pieces."""

    jump_factor: float = Field(
        default=3.0,
        gt=0,
        description="A step is a jump when |Δr| > jump_factor * (v*Δt + largest neighbouring step)",
    )
    slope_threshold: float = Field(
        default=1e-6,
        gt=0,
        description="Largest |r[i+1] - 2 r[i] + r[i-1]| (length units) inside one linear piece",
    )
    min_support: int = Field(default=3, ge=2, description="Pieces with fewer samples are discarded")
    continuity_tolerance: float = Field(
        default=1e-7, gt=0, description="Largest reading gap at a joint of exact pieces still counted as continuous"
    )
    range_tolerance: float = Field(
        default=1e-9, ge=0, description="Extra slack when deciding that a piece ended at the range limit"
    )
    merge_lost_splits: bool = Field(
        default=False, description="Re-join runs split by exactly one lost report when they stay collinear"
    )


class EstimatorConfig(BaseConfigModel):
    """Clustering and judgement settings for the estimation parts."""

    k_max: int = Field(default=12, ge=1, description="Largest number of mixture components tried")
    degenerate_angle_tolerance: float = Field(
        default=0.02, ge=0, description="Temporary angles within this distance of π are discarded"
    )
    min_support: Optional[int] = Field(
        default=None,
        ge=1,
        description="Support needed to judge a vertex or an adjacency; unset means max(3, 10% of the median class size)",
    )
    min_class_ratio: float = Field(
        default=0.25,
        ge=0,
        description="Classes smaller than this fraction of their expected detector count are rejected as outliers",
    )
    merge_tolerance: float = Field(
        default=0.03,
        ge=0,
        description="Neighbouring edge-length components closer than this relative distance are merged",
    )
    angle_merge_tolerance: float = Field(
        default=0.15,
        ge=0,
        description="Inner-angle classes whose circular means lie within this many radians are merged",
    )
    reg_covar: float = Field(default=1e-6, gt=0, description="Variance floor of the mixture components")
    random_state: int = Field(default=0, description="Seed handed to the mixture fit")


class AssemblyConfig(BaseConfigModel):
    angle_tolerance: float = Field(default=0.05, ge=0, description="Largest |Σ(π - γ) - 2π| of an emitted shape")
    closure_tolerance: float = Field(
        default=0.02, ge=0, description="Largest closure residual of an emitted shape, as a fraction of its perimeter"
    )
    max_edges: int = Field(default=12, ge=3, description="Search-space guard on the number of edges")
    count_slack: int = Field(default=1, ge=0, description="Allowed mismatch between angle and edge totals")
    max_results: int = Field(default=10, ge=1, description="Number of arrangements kept")


class ToleranceConfig(BaseConfigModel):
    """Every threshold of the pipeline in one place."""

    segmentation: SegmentationConfig = Field(default_factory=SegmentationConfig)
    estimator: EstimatorConfig = Field(default_factory=EstimatorConfig)
    assembly: AssemblyConfig = Field(default_factory=AssemblyConfig)
