import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from shape_sensing_factory.sensing.angles import inner_angle, modone

Point = Tuple[float, float]


@dataclass(frozen=True)
class DirectedEdge:
    """One directed boundary edge of the target, tail -> head."""

    tail: Point
    head: Point
    length: float
    xi: float

    @classmethod
    def from_points(cls, tail: Sequence[float], head: Sequence[float]) -> "DirectedEdge":
        tx, ty = float(tail[0]), float(tail[1])
        hx, hy = float(head[0]), float(head[1])
        dx, dy = hx - tx, hy - ty
        return cls(
            tail=(tx, ty),
            head=(hx, hy),
            length=math.hypot(dx, dy),
            xi=modone(math.atan2(dy, dx)),
        )

    @property
    def vector(self) -> Point:
        return (self.head[0] - self.tail[0], self.head[1] - self.tail[1])

    def point_at(self, w: float) -> Point:
        ex, ey = self.vector
        return (self.tail[0] + w * ex, self.tail[1] + w * ey)

    def to_dict(self):
        return {
            "tail": list(self.tail),
            "head": list(self.head),
            "length": self.length,
            "xi": self.xi,
        }


@dataclass(frozen=True)
class PolygonTarget:
    """
    Ground-truth simple polygon, edges counted counterclockwise.

    Built and validated by ``sensing.geometry.polygon_from_vertices``; the estimator
    never receives one.
    """

    edges: Tuple[DirectedEdge, ...]
    name: str = ""

    @property
    def n_e(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> List[Point]:
        return [e.tail for e in self.edges]

    @property
    def inner_angles(self) -> Tuple[float, ...]:
        """γ_j at the head of edge j."""
        n = self.n_e
        return tuple(inner_angle(self.edges[j].xi, self.edges[(j + 1) % n].xi) for j in range(n))

    @property
    def perimeter(self) -> float:
        return sum(e.length for e in self.edges)

    @property
    def lengths(self) -> List[float]:
        return [e.length for e in self.edges]

    def bounding_radius(self, center: Point = (0.0, 0.0)) -> float:
        return max(math.hypot(v[0] - center[0], v[1] - center[1]) for v in self.vertices)

    def __repr__(self):
        return f"PolygonTarget(name='{self.name}', n_e={self.n_e}, perimeter={self.perimeter:.4g})"
