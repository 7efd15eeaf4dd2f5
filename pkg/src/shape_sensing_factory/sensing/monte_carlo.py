"""
Monte Carlo detection frequencies from exact traces, compared against the
closed-form probabilities in ``geom_prob``.
"""
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from shape_sensing_factory.configs.enums import LineMode
from shape_sensing_factory.models.geometry import PolygonTarget
from shape_sensing_factory.sensing.analysis import segments_from_analytic
from shape_sensing_factory.sensing.geom_prob import (
    ArenaParams,
    q_d_edge,
    q_d_edge_concave,
    q_d_vertex,
)
from shape_sensing_factory.sensing.geometry import polygon_from_vertices
from shape_sensing_factory.sensing.simulation import STREAM_LINE, analytic_trace, place_sensor, sample_line, sensor_rng
from shape_sensing_factory.utils.exceptions import ShapeFactoryError


@dataclass
class DetectionTally:
    """Counts over ``n`` random sensors; ``edge_hits`` / ``vertex_hits`` are None when not tracked."""

    n: int
    edge_hits: Optional[int] = None
    vertex_hits: Optional[int] = None

    @staticmethod
    def _freq(hits: Optional[int], n: int) -> Optional[float]:
        return None if hits is None or n == 0 else hits / n

    @property
    def edge_frequency(self) -> Optional[float]:
        return self._freq(self.edge_hits, self.n)

    @property
    def vertex_frequency(self) -> Optional[float]:
        return self._freq(self.vertex_hits, self.n)


def binomial_sigma(p: float, n: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / n) if n > 0 else float("inf")


def within_sigma(observed: float, p: float, n: int, k: float = 3.0) -> bool:
    return abs(observed - p) <= k * binomial_sigma(p, n)


def square(side: float) -> PolygonTarget:
    h = side / 2.0
    return polygon_from_vertices([(-h, -h), (h, -h), (h, h), (-h, h)], name=f"square_{side:g}")


def l_shape(arm: float) -> PolygonTarget:
    """
    L-shaped hexagon with arm width ``arm``, centred at its bounding-box centre. The
    vertex at the head of edge 2 is concave (3π/2) and edge 3 follows it.
    """
    a = arm
    pts = [(0, 0), (2 * a, 0), (2 * a, a), (a, a), (a, 2 * a), (0, 2 * a)]
    return polygon_from_vertices([(x - a, y - a) for x, y in pts], name=f"l_shape_{arm:g}")


def tally_detections(
    polygon: PolygonTarget,
    r_max: float,
    omega_radius: float,
    theta: float,
    n: int,
    seed: int = 0,
    edge_index: Optional[int] = None,
    vertex_index: Optional[int] = None,
    mode: LineMode = LineMode.MONITOR_OMEGA,
    v: float = 1.0,
) -> DetectionTally:
    """
    Place ``n`` sensors on random lines and count those whose exact trace covers edge
    ``edge_index`` as one whole-edge segment, and those whose reading bends
    continuously at the vertex at the head of edge ``vertex_index``.
    """
    if n <= 0:
        raise ShapeFactoryError("Monte Carlo needs at least one sample", error_type="INVALID_ARGUMENT")
    n_e = polygon.n_e
    vertex_pair = None if vertex_index is None else {vertex_index % n_e, (vertex_index + 1) % n_e}

    edge_hits = 0 if edge_index is not None else None
    vertex_hits = 0 if vertex_index is not None else None
    for i in range(n):
        rng = sensor_rng(seed, STREAM_LINE, i)
        phi, offset = sample_line(rng, mode, omega_radius, r_max, theta)
        sensor = place_sensor(i, theta, v, phi, offset, omega_radius, r_max)
        segments = segments_from_analytic(analytic_trace(sensor, polygon, r_max))
        if not segments:
            continue
        if edge_index is not None and any(s.is_whole_edge and s.edge_index == edge_index for s in segments):
            edge_hits += 1
        if vertex_pair is not None:
            for left, right in zip(segments[:-1], segments[1:]):
                if right.joined_prev and {left.edge_index, right.edge_index} == vertex_pair:
                    vertex_hits += 1
                    break
    return DetectionTally(n=n, edge_hits=edge_hits, vertex_hits=vertex_hits)


def probability_curve(
    thetas: Sequence[float],
    lam: float,
    gamma: float,
    delta_xi: float,
    arena: ArenaParams,
) -> List[Dict[str, float]]:
    """Closed-form q_d values over a θ grid."""
    rows = []
    for th in thetas:
        rows.append(
            {
                "theta": th,
                "q_edge": q_d_edge(lam, th, arena),
                "q_vertex": q_d_vertex(gamma, th, arena),
                "q_edge_concave": q_d_edge_concave(lam, th, delta_xi, arena) if math.sin(th) != 0.0 else 0.0,
            }
        )
    return rows


def validation_table(
    thetas: Sequence[float],
    lam: float,
    omega_radius: float,
    r_max: float,
    samples: int,
    seed: int = 0,
    sigma: float = 3.0,
) -> List[Dict[str, float]]:
    """
    Closed form against Monte Carlo for three targets per θ: an edge of a square of
    side λ, a right-angle corner of that square, and the edge after the concave
    corner of an L-shape with arm λ (δξ = π/2).
    """
    if samples <= 0:
        raise ShapeFactoryError("validate-prob needs a positive sample count", error_type="INVALID_ARGUMENT")
    arena = ArenaParams.disk(omega_radius, r_max)
    sq, ls = square(lam), l_shape(lam)
    for poly in (sq, ls):
        if poly.bounding_radius() > omega_radius:
            raise ShapeFactoryError(
                f"{poly.name} does not fit in the monitored disk of radius {omega_radius}",
                error_type="INVALID_ARGUMENT",
            )

    rows = []
    for j, th in enumerate(thetas):
        closed = probability_curve([th], lam, math.pi / 2, math.pi / 2, arena)[0]
        convex = tally_detections(sq, r_max, omega_radius, th, samples, seed + j, edge_index=0, vertex_index=0)
        concave = tally_detections(ls, r_max, omega_radius, th, samples, seed + j, edge_index=3)
        row = dict(closed)
        row["mc_edge"] = convex.edge_frequency
        row["mc_vertex"] = convex.vertex_frequency
        row["mc_edge_concave"] = concave.edge_frequency
        row["samples"] = samples
        row["flag"] = not (
            within_sigma(row["mc_edge"], row["q_edge"], samples, sigma)
            and within_sigma(row["mc_vertex"], row["q_vertex"], samples, sigma)
            and within_sigma(row["mc_edge_concave"], row["q_edge_concave"], samples, sigma)
        )
        rows.append(row)
    return rows


def theta_grid(n: int, lo: float = 0.0, hi: float = math.pi) -> List[float]:
    return [float(x) for x in np.linspace(lo, hi, n)]
