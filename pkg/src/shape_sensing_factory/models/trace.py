import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from shape_sensing_factory.configs.enums import PieceKind, SegmentEvent
from shape_sensing_factory.models.geometry import Point


@dataclass(frozen=True)
class SensorConfig:
    """
    One mobile sensor. θ and v are known to the estimator; φ, the line offset and the
    start position stay on the simulation side.
    """

    id: int
    theta: float
    v: float
    phi: float
    offset: float
    start_position: Point
    duration: float

    @property
    def heading(self) -> Point:
        return (math.cos(self.phi), math.sin(self.phi))

    @property
    def beam_direction(self) -> float:
        return self.phi + self.theta

    def position(self, t: float) -> Point:
        ux, uy = self.heading
        return (self.start_position[0] + self.v * t * ux, self.start_position[1] + self.v * t * uy)


@dataclass(frozen=True)
class TraceSample:
    """One sensing report; ``r`` is None for NO DETECTION."""

    sensor_id: int
    t: float
    r: Optional[float]

    @property
    def detected(self) -> bool:
        return self.r is not None

    def to_dict(self) -> Dict[str, Any]:
        return {"sensor": self.sensor_id, "t": self.t, "r": self.r}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TraceSample":
        r = data["r"]
        return cls(sensor_id=int(data["sensor"]), t=float(data["t"]), r=None if r is None else float(r))


@dataclass(frozen=True)
class AnalyticPiece:
    """
    A maximal time interval on which the exact reading is one affine function of t
    (or empty / inside). ``r0`` is the reading at ``t_start``.
    """

    t_start: float
    t_end: float
    kind: PieceKind
    edge_index: Optional[int] = None
    r0: float = 0.0
    slope: float = 0.0

    def value(self, t: float) -> Optional[float]:
        if self.kind == PieceKind.EMPTY:
            return None
        if self.kind == PieceKind.INSIDE:
            return 0.0
        return self.r0 + self.slope * (t - self.t_start)

    @property
    def r_end(self) -> Optional[float]:
        return self.value(self.t_end)

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start


@dataclass
class AnalyticTrace:
    """Exact continuous-time reading of one sensor: pieces plus labelled breakpoints."""

    sensor_id: int
    pieces: List[AnalyticPiece] = field(default_factory=list)
    # (time, label) for each interior breakpoint, label is the event seen from the left piece
    events: List[Tuple[float, SegmentEvent]] = field(default_factory=list)

    @property
    def breakpoints(self) -> List[float]:
        return [p.t_start for p in self.pieces[1:]]

    def evaluate(self, t: float) -> Optional[float]:
        """Reading at time t; a breakpoint belongs to the piece that starts there."""
        for piece in reversed(self.pieces):
            if piece.t_start <= t:
                if t > piece.t_end:
                    return None
                return piece.value(t)
        return None

    def edge_pieces(self) -> List[AnalyticPiece]:
        return [p for p in self.pieces if p.kind == PieceKind.EDGE]
