import math
from typing import List, Optional

from pydantic import Field, field_validator, model_validator

from shape_sensing_factory.configs.base import BaseConfigModel
from shape_sensing_factory.configs.enums import LineMode
from shape_sensing_factory.configs.tolerances import ToleranceConfig


class ScenarioConfig(BaseConfigModel):
    """
    A simulated sensing campaign: the monitored disk, the hidden target polygon and
    the sensor population.
    """

    name: str = Field(default="scenario", description="Scenario name, used for output and asset names")
    description: Optional[str] = Field(default=None, description="Free text shown by the CLI and in Dagster")

    omega_radius: float = Field(default=200.0, gt=0, description="Radius R of the monitored disk centred at the origin")
    r_max: float = Field(default=100.0, gt=0, description="Maximum sensing range")
    n_s: int = Field(default=2000, ge=0, description="Number of mobile sensors")
    polygon: List[List[float]] = Field(description="Target vertices [[x, y], ...] counterclockwise")

    report_period: float = Field(default=1.0, gt=0, description="Time between two sensing reports")
    duration: Optional[float] = Field(
        default=None,
        gt=0,
        description="Trace length in time units; when unset each sensor traverses its whole sampling window",
    )

    epsilon_s: float = Field(default=0.0, ge=0, description="Standard deviation of slope noise, radians in arctan space")
    epsilon_l: float = Field(default=0.0, ge=0, le=1, description="Probability that a single report is lost")

    seed: int = Field(default=0, description="Master seed; per-sensor streams derive from it")
    line_mode: LineMode = Field(default=LineMode.MONITOR_OMEGA, description="Random line placement (THROUGH_OMEGA, MONITOR_OMEGA)")

    thetas: List[float] = Field(
        default_factory=lambda: [math.pi / 2],
        description="Beam angle θ from the motion direction; a list is cycled over sensor ids",
    )
    speeds: List[float] = Field(default_factory=lambda: [1.0], description="Sensor speeds v; a list is cycled over sensor ids")

    tolerances: ToleranceConfig = Field(default_factory=ToleranceConfig, description="Segmentation, estimation and assembly thresholds")

    @field_validator("thetas", "speeds", mode="before")
    @classmethod
    def _scalar_to_list(cls, v):
        if isinstance(v, (int, float)):
            return [float(v)]
        return v

    @field_validator("speeds")
    @classmethod
    def _positive_speeds(cls, v: List[float]) -> List[float]:
        if not v or any(s <= 0 for s in v):
            raise ValueError("speeds must be a non-empty list of positive values")
        return v

    @field_validator("thetas")
    @classmethod
    def _nonempty_thetas(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("thetas must not be empty")
        return v

    @model_validator(mode="after")
    def _polygon_inside_omega(self):
        for x, y, *_ in self.polygon:
            if math.hypot(x, y) > self.omega_radius:
                raise ValueError(
                    f"vertex ({x}, {y}) lies outside the monitored disk of radius {self.omega_radius}"
                )
        return self

    def theta_for(self, sensor_id: int) -> float:
        return self.thetas[sensor_id % len(self.thetas)]

    def speed_for(self, sensor_id: int) -> float:
        return self.speeds[sensor_id % len(self.speeds)]

    def sensor_thetas(self) -> List[float]:
        return [self.theta_for(i) for i in range(self.n_s)]

    @property
    def omega_perimeter(self) -> float:
        return 2.0 * math.pi * self.omega_radius

    def target(self):
        """Validated PolygonTarget for this scenario."""
        from shape_sensing_factory.sensing.geometry import polygon_from_vertices

        return polygon_from_vertices(self.polygon, name=self.name)

    def arena(self):
        from shape_sensing_factory.sensing.geom_prob import ArenaParams

        return ArenaParams(L_omega=self.omega_perimeter, r_max=self.r_max)
