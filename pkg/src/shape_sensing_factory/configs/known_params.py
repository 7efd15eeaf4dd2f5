from typing import Dict, List

from pydantic import Field

from shape_sensing_factory.configs.base import BaseConfigModel


class SensorKnowns(BaseConfigModel):
    """What the estimator may know about one sensor."""

    id: int = Field(description="Sensor id as used in trace and observation files")
    theta: float = Field(description="Beam angle from the direction of motion")
    v: float = Field(gt=0, description="Speed")


class KnownParams(BaseConfigModel):
    """
    Estimator input besides observations. Unknown keys are rejected, so headings,
    offsets and positions cannot reach the estimator.
    """

    r_max: float = Field(gt=0, description="Maximum sensing range")
    L_omega: float = Field(gt=0, description="Perimeter of the monitored convex region")
    sensors: List[SensorKnowns] = Field(default_factory=list, description="Per-sensor θ and v")

    @classmethod
    def from_scenario(cls, scenario) -> "KnownParams":
        return cls(
            r_max=scenario.r_max,
            L_omega=scenario.omega_perimeter,
            sensors=[
                SensorKnowns(id=i, theta=scenario.theta_for(i), v=scenario.speed_for(i)) for i in range(scenario.n_s)
            ],
        )

    def by_id(self) -> Dict[int, SensorKnowns]:
        return {s.id: s for s in self.sensors}

    @property
    def thetas(self) -> List[float]:
        return [s.theta for s in self.sensors]

    def arena(self):
        from shape_sensing_factory.sensing.geom_prob import ArenaParams

        return ArenaParams(L_omega=self.L_omega, r_max=self.r_max)
