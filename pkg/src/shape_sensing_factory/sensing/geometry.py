"""
Exact planar primitives: polygon construction and validation, ray casting and the
parallelogram detection region of an edge.

Scalar functions use plain ``math``; ``ray_cast_many`` and ``points_inside`` are the
numpy versions used by the trace simulator.
"""
import math
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from shape_sensing_factory.models.geometry import DirectedEdge, Point, PolygonTarget
from shape_sensing_factory.sensing.angles import (
    TWO_PI,
    exterior_turn,
    inner_angle,
    mod_interval_contains,
    modone,
)
from shape_sensing_factory.utils.exceptions import ShapeFactoryError

# Re-exported so callers can treat this module as the geometry API
__all__ = [
    "modone",
    "mod_interval_contains",
    "inner_angle",
    "polygon_from_vertices",
    "ray_cast",
    "ray_cast_edge",
    "ray_cast_many",
    "point_in_polygon",
    "points_inside",
    "detection_region_contains",
    "transform_polygon",
]

CLOSURE_TOL = 1e-9
BOUNDARY_TOL = 1e-9
PARALLEL_EPS = 1e-14


def _cross(ax: float, ay: float, bx: float, by: float) -> float:
    return ax * by - ay * bx


def _segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool:
    """Closed-segment intersection test (touching counts)."""

    def orient(a, b, c):
        v = _cross(b[0] - a[0], b[1] - a[1], c[0] - a[0], c[1] - a[1])
        if abs(v) < 1e-12:
            return 0
        return 1 if v > 0 else -1

    def on_segment(a, b, c):
        return min(a[0], b[0]) - 1e-12 <= c[0] <= max(a[0], b[0]) + 1e-12 and min(a[1], b[1]) - 1e-12 <= c[
            1
        ] <= max(a[1], b[1]) + 1e-12

    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and on_segment(p1, p2, q1):
        return True
    if o2 == 0 and on_segment(p1, p2, q2):
        return True
    if o3 == 0 and on_segment(q1, q2, p1):
        return True
    if o4 == 0 and on_segment(q1, q2, p2):
        return True
    return False


def polygon_from_vertices(vertices: Iterable[Sequence[float]], name: str = "") -> PolygonTarget:
    """
    Build a PolygonTarget from a counterclockwise vertex list.

    Raises ShapeFactoryError(INVALID_POLYGON) for clockwise, self-intersecting or
    too-short boundaries and DEGENERATE_VERTEX for straight or folded corners.
    """
    pts = [(float(v[0]), float(v[1])) for v in vertices]
    if len(pts) >= 2 and math.hypot(pts[0][0] - pts[-1][0], pts[0][1] - pts[-1][1]) < CLOSURE_TOL:
        # tolerate an explicitly closed ring
        pts = pts[:-1]
    n = len(pts)
    if n < 3:
        raise ShapeFactoryError(f"polygon needs at least 3 vertices, got {n}", error_type="INVALID_POLYGON")

    edges = tuple(DirectedEdge.from_points(pts[j], pts[(j + 1) % n]) for j in range(n))
    for j, e in enumerate(edges):
        if e.length <= CLOSURE_TOL:
            raise ShapeFactoryError(f"edge {j} has zero length", error_type="INVALID_POLYGON")

    area2 = sum(_cross(e.tail[0], e.tail[1], e.head[0], e.head[1]) for e in edges)
    if area2 <= 0:
        raise ShapeFactoryError("vertices must be listed counterclockwise", error_type="INVALID_POLYGON")

    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            if _segments_intersect(edges[i].tail, edges[i].head, edges[j].tail, edges[j].head):
                raise ShapeFactoryError(
                    f"edges {i} and {j} intersect; boundary is not simple", error_type="INVALID_POLYGON"
                )

    polygon = PolygonTarget(edges=edges, name=name)
    turns = sum(exterior_turn(g) for g in polygon.inner_angles)
    if abs(turns - TWO_PI) > 1e-9:
        raise ShapeFactoryError(
            f"exterior turns sum to {turns:.12g}, expected 2π", error_type="INVALID_POLYGON"
        )
    return polygon


def transform_polygon(
    polygon: PolygonTarget,
    scale: float = 1.0,
    rotation: float = 0.0,
    translation: Point = (0.0, 0.0),
) -> PolygonTarget:
    """Similarity transform about the origin (scale, then rotate, then translate)."""
    c, s = math.cos(rotation), math.sin(rotation)
    pts = []
    for x, y in polygon.vertices:
        x, y = x * scale, y * scale
        pts.append((c * x - s * y + translation[0], s * x + c * y + translation[1]))
    return polygon_from_vertices(pts, name=polygon.name)


def _distance_to_segment(p: Point, edge: DirectedEdge) -> float:
    ex, ey = edge.vector
    px, py = p[0] - edge.tail[0], p[1] - edge.tail[1]
    w = (px * ex + py * ey) / (edge.length * edge.length)
    w = min(1.0, max(0.0, w))
    return math.hypot(px - w * ex, py - w * ey)


def point_in_polygon(p: Point, polygon: PolygonTarget) -> bool:
    """Closed-set membership: points on the boundary count as inside."""
    scale = max(1.0, polygon.perimeter)
    for e in polygon.edges:
        if _distance_to_segment(p, e) <= BOUNDARY_TOL * scale:
            return True
    inside = False
    x, y = p
    for e in polygon.edges:
        (x1, y1), (x2, y2) = e.tail, e.head
        if (y1 > y) != (y2 > y):
            x_cross = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x < x_cross:
                inside = not inside
    return inside


def ray_cast_edge(origin: Point, direction: float, polygon: PolygonTarget) -> Tuple[Optional[float], Optional[int]]:
    """
    Distance and index of the first edge hit by the ray, (0.0, None) when the origin
    is inside or on the target and (None, None) when the ray misses.

    A ray through a vertex reports the smaller edge index among equally near hits; a
    ray collinear with an edge reports the nearer end of that edge.
    """
    if point_in_polygon(origin, polygon):
        return 0.0, None

    dx, dy = math.cos(direction), math.sin(direction)
    ox, oy = origin
    best_s: Optional[float] = None
    best_j: Optional[int] = None
    for j, e in enumerate(polygon.edges):
        ex, ey = e.vector
        px, py = e.tail[0] - ox, e.tail[1] - oy
        denom = _cross(dx, dy, ex, ey)
        if abs(denom) < PARALLEL_EPS * e.length:
            # parallel; only a collinear edge can be hit
            if abs(_cross(px, py, dx, dy)) > BOUNDARY_TOL * max(1.0, e.length):
                continue
            s_tail = px * dx + py * dy
            s_head = (e.head[0] - ox) * dx + (e.head[1] - oy) * dy
            candidates = [s for s in (s_tail, s_head) if s >= 0.0]
            if not candidates:
                continue
            s = min(candidates)
        else:
            s = _cross(px, py, ex, ey) / denom
            w = _cross(px, py, dx, dy) / denom
            if s < 0.0 or w < -1e-12 or w > 1.0 + 1e-12:
                continue
        if best_s is None or s < best_s - 1e-12:
            best_s, best_j = s, j
    return best_s, best_j


def ray_cast(origin: Point, direction: float, polygon: PolygonTarget) -> Optional[float]:
    """Distance from origin along direction to the target; 0 inside, None on a miss."""
    s, _ = ray_cast_edge(origin, direction, polygon)
    return s


def points_inside(points: np.ndarray, polygon: PolygonTarget) -> np.ndarray:
    """Vectorised closed-set membership for an (N, 2) array of points."""
    x = points[:, 0]
    y = points[:, 1]
    inside = np.zeros(len(points), dtype=bool)
    on_boundary = np.zeros(len(points), dtype=bool)
    scale = max(1.0, polygon.perimeter)
    for e in polygon.edges:
        (x1, y1), (x2, y2) = e.tail, e.head
        ex, ey = x2 - x1, y2 - y1
        w = np.clip(((x - x1) * ex + (y - y1) * ey) / (e.length * e.length), 0.0, 1.0)
        dist = np.hypot(x - x1 - w * ex, y - y1 - w * ey)
        on_boundary |= dist <= BOUNDARY_TOL * scale
        straddles = (y1 > y) != (y2 > y)
        if ey != 0.0:
            x_cross = x1 + (y - y1) * ex / ey
            inside ^= straddles & (x < x_cross)
    return inside | on_boundary


def ray_cast_many(points: np.ndarray, direction: float, polygon: PolygonTarget) -> Tuple[np.ndarray, np.ndarray]:
    """
    Cast one beam direction from many origins.

    Returns (distance, edge_index): distance is 0 inside the target and inf on a miss;
    edge_index is -1 unless an edge is hit. Edges parallel to the beam are skipped:
    a collinear beam also meets the neighbouring edge at the same vertex.
    """
    n = len(points)
    dx, dy = math.cos(direction), math.sin(direction)
    best = np.full(n, np.inf)
    best_edge = np.full(n, -1, dtype=int)
    ox = points[:, 0]
    oy = points[:, 1]
    for j, e in enumerate(polygon.edges):
        ex, ey = e.vector
        denom = _cross(dx, dy, ex, ey)
        if abs(denom) < PARALLEL_EPS * e.length:
            continue
        px = e.tail[0] - ox
        py = e.tail[1] - oy
        s = (px * ey - py * ex) / denom
        w = (px * dy - py * dx) / denom
        hit = (s >= 0.0) & (w >= -1e-12) & (w <= 1.0 + 1e-12) & (s < best - 1e-12)
        best = np.where(hit, s, best)
        best_edge = np.where(hit, j, best_edge)
    inside = points_inside(points, polygon)
    best = np.where(inside, 0.0, best)
    best_edge = np.where(inside, -1, best_edge)
    return best, best_edge


def edge_faces_beam(edge: DirectedEdge, beam_direction: float) -> bool:
    """True when a beam with this direction meets the edge from the outside."""
    return mod_interval_contains(beam_direction, edge.xi, edge.xi + math.pi) and modone(
        beam_direction - edge.xi
    ) > 0.0


def detection_region_contains(
    sensor: Point,
    beam_direction: float,
    r_max: float,
    edge: DirectedEdge,
    polygon: PolygonTarget,
) -> bool:
    """
    Membership of the sensor in the edge's detection parallelogram: one side is the
    edge, the other has length r_max opposite to the beam. The point also has to see
    this edge first, which is checked with ray_cast.
    """
    if not edge_faces_beam(edge, beam_direction):
        return False
    bx, by = math.cos(beam_direction), math.sin(beam_direction)
    ex, ey = edge.vector
    # sensor = tail + w * e - s * b
    qx, qy = sensor[0] - edge.tail[0], sensor[1] - edge.tail[1]
    det = _cross(ex, ey, -bx, -by)
    if abs(det) < PARALLEL_EPS * edge.length:
        return False
    w = _cross(qx, qy, -bx, -by) / det
    s = _cross(ex, ey, qx, qy) / det
    if not (0.0 <= w <= 1.0 and 0.0 <= s <= r_max):
        return False
    hit = ray_cast(sensor, beam_direction, polygon)
    if hit is None:
        return False
    return abs(hit - s) <= 1e-9 * max(1.0, r_max)
