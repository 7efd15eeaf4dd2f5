import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

from shape_sensing_factory.models.geometry import Point


@dataclass
class ShapeEstimate:
    """
    An assembled polygon: a cyclic sequence of (edge length, inner angle at its head)
    with the class each value was taken from. Position and orientation are arbitrary.
    """

    lengths: List[float]
    angles: List[float]
    length_classes: List[int] = field(default_factory=list)
    angle_classes: List[int] = field(default_factory=list)
    closure_residual: float = 0.0
    angle_residual: float = 0.0
    support: int = 0
    mirror_ambiguous: bool = False

    @property
    def n_e(self) -> int:
        return len(self.lengths)

    @property
    def perimeter(self) -> float:
        return sum(self.lengths)

    @property
    def sequence(self) -> List[Tuple[float, float]]:
        return list(zip(self.lengths, self.angles))

    def vertices(self) -> List[Point]:
        """Walk the edges from the origin with the first edge along +x."""
        pts: List[Point] = [(0.0, 0.0)]
        xi = 0.0
        x, y = 0.0, 0.0
        for length, gamma in zip(self.lengths[:-1], self.angles[:-1]):
            x += length * math.cos(xi)
            y += length * math.sin(xi)
            pts.append((x, y))
            xi += math.pi - gamma
        return pts

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lengths": self.lengths,
            "angles": self.angles,
            "length_classes": self.length_classes,
            "angle_classes": self.angle_classes,
            "closure_residual": self.closure_residual,
            "angle_residual": self.angle_residual,
            "support": self.support,
            "mirror_ambiguous": self.mirror_ambiguous,
        }
