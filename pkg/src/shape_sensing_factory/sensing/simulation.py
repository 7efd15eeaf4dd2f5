"""
Ground-truth traces of mobile directional distance sensors.

A sensor moves at constant speed on a random directed line. Its beam leaves at a
fixed angle θ from the direction of motion and reports the distance to the target,
0 inside the target and nothing beyond ``r_max``. Every sensor draws from its own
random stream derived from (seed, stream, sensor id), so a trace does not depend on
how many other sensors exist or on the order they are generated in.
"""
import math
from typing import List, Optional, Tuple

import numpy as np

from shape_sensing_factory.configs.enums import LineMode, PieceKind, SegmentEvent
from shape_sensing_factory.models.geometry import PolygonTarget
from shape_sensing_factory.models.trace import AnalyticPiece, AnalyticTrace, SensorConfig, TraceSample
from shape_sensing_factory.sensing.angles import TWO_PI
from shape_sensing_factory.sensing.geometry import PARALLEL_EPS, point_in_polygon, ray_cast_many
from shape_sensing_factory.utils.exceptions import ShapeFactoryError

# Independent random streams per sensor
STREAM_LINE = 0
STREAM_SLOPE_NOISE = 1

BREAKPOINT_MERGE = 1e-12


def sensor_rng(seed: int, stream: int, sensor_id: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(stream), int(sensor_id)]))


def offset_interval(mode: LineMode, R: float, r_max: float, theta: float) -> Tuple[float, float]:
    """
    Range of the signed line offset along the left normal of the motion direction.

    MONITOR_OMEGA extends THROUGH_OMEGA's [-R, R] by r_max|sinθ| on the side from
    which the beam points into the disk.
    """
    if mode == LineMode.THROUGH_OMEGA:
        return -R, R
    width = r_max * abs(math.sin(theta))
    if math.sin(theta) > 0:
        # beam points to the left of the motion, so the line lies to the right
        return -R - width, R
    if math.sin(theta) < 0:
        return -R, R + width
    return -R, R


def sample_line(rng: np.random.Generator, mode: LineMode, R: float, r_max: float, theta: float) -> Tuple[float, float]:
    """Uniform direction φ in [0, 2π) and a uniform offset from ``offset_interval``."""
    phi = float(rng.uniform(0.0, TWO_PI))
    lo, hi = offset_interval(mode, R, r_max, theta)
    offset = float(rng.uniform(lo, hi))
    return phi, offset


def place_sensor(
    sensor_id: int,
    theta: float,
    v: float,
    phi: float,
    offset: float,
    R: float,
    r_max: float,
    duration: Optional[float] = None,
) -> SensorConfig:
    """
    Start the sensor where its line enters the disk of radius R + r_max. Every point
    that can see the target lies inside that disk, so the default duration covers
    the whole useful part of the line.
    """
    ux, uy = math.cos(phi), math.sin(phi)
    nx, ny = -uy, ux
    reach = R + r_max
    half_chord = math.sqrt(max(0.0, reach * reach - offset * offset))
    start = (offset * nx - half_chord * ux, offset * ny - half_chord * uy)
    if duration is None:
        duration = 2.0 * half_chord / v
    return SensorConfig(
        id=sensor_id,
        theta=theta,
        v=v,
        phi=phi,
        offset=offset,
        start_position=start,
        duration=duration,
    )


def draw_sensor(scenario, sensor_id: int, rng: Optional[np.random.Generator] = None) -> SensorConfig:
    """Place sensor ``sensor_id`` of the scenario on its random line."""
    if rng is None:
        rng = sensor_rng(scenario.seed, STREAM_LINE, sensor_id)
    theta = scenario.theta_for(sensor_id)
    phi, offset = sample_line(rng, scenario.line_mode, scenario.omega_radius, scenario.r_max, theta)
    return place_sensor(
        sensor_id,
        theta,
        scenario.speed_for(sensor_id),
        phi,
        offset,
        scenario.omega_radius,
        scenario.r_max,
        scenario.duration,
    )


def epochs(duration: float, report_period: float) -> np.ndarray:
    n = int(math.floor(duration / report_period + 1e-9)) + 1
    return np.arange(n, dtype=float) * report_period


def readings(
    sensor: SensorConfig, polygon: PolygonTarget, r_max: float, times: np.ndarray
) -> np.ndarray:
    """Exact readings at the given times, NaN for NO DETECTION."""
    ux, uy = sensor.heading
    pts = np.column_stack(
        (sensor.start_position[0] + sensor.v * times * ux, sensor.start_position[1] + sensor.v * times * uy)
    )
    dist, _ = ray_cast_many(pts, sensor.beam_direction, polygon)
    return np.where(dist <= r_max, dist, np.nan)


def simulate_trace(
    sensor: SensorConfig,
    polygon: PolygonTarget,
    r_max: float,
    report_period: float,
    epsilon_l: float = 0.0,
    rng: Optional[np.random.Generator] = None,
) -> List[TraceSample]:
    """
    Sample the sensor every ``report_period`` from t = 0 to its duration. Each report
    is lost independently with probability ``epsilon_l``; lost epochs are absent.
    """
    times = epochs(sensor.duration, report_period)
    values = readings(sensor, polygon, r_max, times)
    if epsilon_l > 0.0:
        if rng is None:
            raise ShapeFactoryError("a random generator is needed when epsilon_l > 0", error_type="INVALID_ARGUMENT")
        kept = rng.random(len(times)) >= epsilon_l
    else:
        kept = np.ones(len(times), dtype=bool)

    samples = []
    for t, r, keep in zip(times, values, kept):
        if not keep:
            continue
        samples.append(TraceSample(sensor.id, float(t), None if np.isnan(r) else float(r)))
    return samples


def simulate_sensor(scenario, polygon: PolygonTarget, sensor_id: int) -> Tuple[SensorConfig, List[TraceSample]]:
    """Line placement and report loss for one sensor, both from its own stream."""
    rng = sensor_rng(scenario.seed, STREAM_LINE, sensor_id)
    sensor = draw_sensor(scenario, sensor_id, rng)
    samples = simulate_trace(sensor, polygon, scenario.r_max, scenario.report_period, scenario.epsilon_l, rng)
    return sensor, samples


def _edge_affine(sensor: SensorConfig, polygon: PolygonTarget):
    """
    Per edge, hit distance s(t) = s0 + s1 t and edge parameter w(t) = w0 + w1 t of
    the beam against the edge's supporting line. None for edges parallel to the beam.
    """
    ux, uy = sensor.heading
    b = sensor.beam_direction
    bx, by = math.cos(b), math.sin(b)
    sx, sy = sensor.start_position
    v = sensor.v
    out = []
    for e in polygon.edges:
        ex, ey = e.vector
        denom = bx * ey - by * ex
        if abs(denom) < PARALLEL_EPS * e.length:
            out.append(None)
            continue
        qx, qy = e.tail[0] - sx, e.tail[1] - sy
        s0 = (qx * ey - qy * ex) / denom
        s1 = -v * (ux * ey - uy * ex) / denom
        w0 = (qx * by - qy * bx) / denom
        w1 = -v * (ux * by - uy * bx) / denom
        out.append((s0, s1, w0, w1))
    return out


def _roots(c0: float, c1: float, target: float, t_end: float) -> List[float]:
    if c1 == 0.0:
        return []
    t = (target - c0) / c1
    return [t] if 0.0 < t < t_end else []


def _crossing_times(sensor: SensorConfig, polygon: PolygonTarget) -> List[float]:
    """Times at which the sensor position lies on an edge's supporting line."""
    ux, uy = sensor.heading
    sx, sy = sensor.start_position
    times = []
    for e in polygon.edges:
        ex, ey = e.vector
        c = sensor.v * (ux * ey - uy * ex)
        if abs(c) < PARALLEL_EPS:
            continue
        qx, qy = e.tail[0] - sx, e.tail[1] - sy
        t = (qx * ey - qy * ex) / c
        if 0.0 < t < sensor.duration:
            times.append(t)
    return times


def _band_reaches(sensor: SensorConfig, polygon: PolygonTarget, r_max: float) -> bool:
    """False when the target lies wholly outside the band the beam sweeps."""
    ux, uy = sensor.heading
    nx, ny = -uy, ux
    offsets = [x * nx + y * ny for x, y in polygon.vertices]
    rho = sensor.start_position[0] * nx + sensor.start_position[1] * ny
    reach = r_max * math.sin(sensor.theta)
    lo, hi = min(rho, rho + reach), max(rho, rho + reach)
    return max(offsets) >= lo and min(offsets) <= hi


def _classify(sensor, polygon, affine, r_max, t) -> Tuple[PieceKind, Optional[int]]:
    if point_in_polygon(sensor.position(t), polygon):
        return PieceKind.INSIDE, None
    best_s, best_j = None, None
    for j, coef in enumerate(affine):
        if coef is None:
            continue
        s0, s1, w0, w1 = coef
        s = s0 + s1 * t
        w = w0 + w1 * t
        if s <= 0.0 or w < 0.0 or w > 1.0:
            continue
        if best_s is None or s < best_s:
            best_s, best_j = s, j
    if best_s is None or best_s > r_max:
        return PieceKind.EMPTY, None
    return PieceKind.EDGE, best_j


def _joint_event(left: AnalyticPiece, right: AnalyticPiece, t: float, r_max: float, tol: float) -> SegmentEvent:
    if left.kind == PieceKind.INSIDE or right.kind == PieceKind.INSIDE:
        return SegmentEvent.ZERO_CONTACT
    if left.kind == PieceKind.EDGE and right.kind == PieceKind.EDGE:
        r_l, r_r = left.value(t), right.value(t)
        if abs(r_l - r_r) <= tol:
            return SegmentEvent.SLOPE_CHANGE
        return SegmentEvent.JUMP_UP if r_r > r_l else SegmentEvent.JUMP_DOWN
    if left.kind == PieceKind.EDGE:
        if abs(left.value(t) - r_max) <= tol:
            return SegmentEvent.RANGE_BOUNDARY
        return SegmentEvent.TO_EMPTY_BELOW_MAX
    if right.kind == PieceKind.EDGE:
        if abs(right.value(t) - r_max) <= tol:
            return SegmentEvent.RANGE_BOUNDARY
        return SegmentEvent.FROM_EMPTY_BELOW_MAX
    return SegmentEvent.TRACE_EDGE


def analytic_trace(
    sensor: SensorConfig, polygon: PolygonTarget, r_max: float, continuity_tolerance: float = 1e-7
) -> AnalyticTrace:
    """
    Exact piecewise-linear reading of one sensor over [0, duration].

    Candidate breakpoints are the times at which some edge's hit point passes one of
    its ends, the hit distance reaches 0 or r_max, or the sensor crosses an edge line.
    Each interval between candidates is classified at its midpoint; neighbouring
    intervals with the same classification are merged.
    """
    t_end = sensor.duration
    if not _band_reaches(sensor, polygon, r_max):
        return AnalyticTrace(sensor_id=sensor.id, pieces=[AnalyticPiece(0.0, t_end, PieceKind.EMPTY)])

    affine = _edge_affine(sensor, polygon)
    cands = [0.0, t_end]
    for coef in affine:
        if coef is None:
            continue
        s0, s1, w0, w1 = coef
        cands += _roots(w0, w1, 0.0, t_end) + _roots(w0, w1, 1.0, t_end)
        cands += _roots(s0, s1, 0.0, t_end) + _roots(s0, s1, r_max, t_end)
    cands += _crossing_times(sensor, polygon)
    cands.sort()

    knots = [cands[0]]
    for t in cands[1:]:
        if t - knots[-1] > BREAKPOINT_MERGE * max(1.0, t_end):
            knots.append(t)
    if knots[-1] < t_end:
        knots[-1] = t_end

    pieces: List[AnalyticPiece] = []
    for a, b in zip(knots[:-1], knots[1:]):
        kind, j = _classify(sensor, polygon, affine, r_max, 0.5 * (a + b))
        if pieces and pieces[-1].kind == kind and pieces[-1].edge_index == j:
            last = pieces[-1]
            pieces[-1] = AnalyticPiece(last.t_start, b, kind, j, last.r0, last.slope)
            continue
        if kind == PieceKind.EDGE:
            s0, s1, _, _ = affine[j]
            pieces.append(AnalyticPiece(a, b, kind, j, s0 + s1 * a, s1))
        else:
            pieces.append(AnalyticPiece(a, b, kind, None))

    tol = continuity_tolerance * max(1.0, r_max)
    events = [
        (right.t_start, _joint_event(left, right, right.t_start, r_max, tol))
        for left, right in zip(pieces[:-1], pieces[1:])
    ]
    return AnalyticTrace(sensor_id=sensor.id, pieces=pieces, events=events)


def sample_analytic(trace: AnalyticTrace, times: np.ndarray) -> List[Optional[float]]:
    return [trace.evaluate(float(t)) for t in times]
