from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from shape_sensing_factory.configs.enums import (
    WHOLE_EDGE_END_EVENTS,
    WHOLE_EDGE_START_EVENTS,
    ObservationKind,
    SegmentEvent,
)
from shape_sensing_factory.utils.exceptions import ShapeFactoryError


@dataclass(frozen=True)
class Segment:
    """
    One maximal linear piece of a trace with r > 0.

    ``s_d`` is the fitted dr/dt. ``joined_prev`` is True when the piece meets the
    previous one continuously at a slope change. ``edge_index`` is only known for
    pieces cut from exact traces and never leaves the simulation side.
    """

    sensor_id: int
    k: int
    t_s: float
    t_e: float
    s_d: float
    r_s: float
    r_e: float
    start_event: SegmentEvent
    end_event: SegmentEvent
    n_samples: int = 0
    joined_prev: bool = False
    edge_index: Optional[int] = None

    @property
    def l_d(self) -> float:
        return self.t_e - self.t_s

    @property
    def is_whole_edge(self) -> bool:
        return self.start_event in WHOLE_EDGE_START_EVENTS and self.end_event in WHOLE_EDGE_END_EVENTS


@dataclass(frozen=True)
class WholeEdgeObservation:
    sensor_id: int
    k: int
    l_d: float
    s_d: float

    kind = ObservationKind.EDGE

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "sensor": self.sensor_id, "k": self.k, "l_d": self.l_d, "s_d": self.s_d}


@dataclass(frozen=True)
class VertexObservation:
    """Slopes of segments k and k+1 meeting continuously at a slope change."""

    sensor_id: int
    k: int
    s_k: float
    s_k1: float

    kind = ObservationKind.VERTEX

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "sensor": self.sensor_id, "k": self.k, "s_k": self.s_k, "s_k1": self.s_k1}


@dataclass(frozen=True)
class AdjacencyObservation:
    """Whole-edge observations k and k+1 of one sensor joined without a jump."""

    sensor_id: int
    k: int
    k1: int

    kind = ObservationKind.ADJACENCY

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "sensor": self.sensor_id, "k": self.k, "k1": self.k1}


@dataclass
class ObservationSet:
    """Everything the estimator gets from the traces, in sensor-id order."""

    edges: List[WholeEdgeObservation] = field(default_factory=list)
    vertices: List[VertexObservation] = field(default_factory=list)
    adjacencies: List[AdjacencyObservation] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.edges) + len(self.vertices) + len(self.adjacencies)

    def extend(self, other: "ObservationSet") -> None:
        self.edges.extend(other.edges)
        self.vertices.extend(other.vertices)
        self.adjacencies.extend(other.adjacencies)

    def records(self) -> List[Dict[str, Any]]:
        """JSONL records: per sensor, edges then vertices then adjacencies."""
        rows = [o.to_dict() for o in self.edges + self.vertices + self.adjacencies]
        order = {ObservationKind.EDGE.value: 0, ObservationKind.VERTEX.value: 1, ObservationKind.ADJACENCY.value: 2}
        rows.sort(key=lambda r: (r["sensor"], order[r["kind"]], r["k"]))
        return rows

    def edge_lookup(self) -> Dict[tuple, WholeEdgeObservation]:
        return {(o.sensor_id, o.k): o for o in self.edges}

    @classmethod
    def from_records(cls, records: List[Dict[str, Any]]) -> "ObservationSet":
        obs = cls()
        for i, rec in enumerate(records, start=1):
            try:
                kind = rec["kind"]
                if kind == ObservationKind.EDGE.value:
                    obs.edges.append(
                        WholeEdgeObservation(int(rec["sensor"]), int(rec["k"]), float(rec["l_d"]), float(rec["s_d"]))
                    )
                elif kind == ObservationKind.VERTEX.value:
                    obs.vertices.append(
                        VertexObservation(int(rec["sensor"]), int(rec["k"]), float(rec["s_k"]), float(rec["s_k1"]))
                    )
                elif kind == ObservationKind.ADJACENCY.value:
                    obs.adjacencies.append(AdjacencyObservation(int(rec["sensor"]), int(rec["k"]), int(rec["k1"])))
                else:
                    raise ShapeFactoryError(f"record {i}: unknown observation kind '{kind}'", error_type="PARSE_ERROR")
            except (KeyError, TypeError, ValueError) as e:
                raise ShapeFactoryError(f"record {i}: malformed observation ({e})", error_type="PARSE_ERROR")
        return obs
