"""
Shape-parameter estimation from location-free observations.

Only the observation records and the known sensor parameters (θ, v, r_max, L_Ω)
enter here. Each part follows the previous one:

1. temporary edge lengths, clustered into length classes, counted against the
   expected number of whole-edge detectors;
2. temporary inner angles, clustered on the circle and counted the same way;
3. vertex hypotheses: which length classes flank which angle class;
4. edge order: counts of consecutive whole edges per pair of length classes;
5. for concave angle classes, counts of the blocked neighbouring length classes are
   recomputed with the blocking-aware expectation.
"""
import math
import statistics
import time
from collections import Counter, defaultdict
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from shape_sensing_factory.configs.known_params import KnownParams
from shape_sensing_factory.configs.tolerances import AssemblyConfig, EstimatorConfig
from shape_sensing_factory.estimation.assembly import assemble
from shape_sensing_factory.estimation.clustering import cluster_1d, cluster_angles
from shape_sensing_factory.factory.utils.logging import log_action, log_action_stats
from shape_sensing_factory.models.classes import AdjacencyCount, AngleClass, LengthClass, Member, VertexHypothesis
from shape_sensing_factory.models.observations import (
    AdjacencyObservation,
    ObservationSet,
    VertexObservation,
    WholeEdgeObservation,
)
from shape_sensing_factory.models.report import EstimationReport
from shape_sensing_factory.sensing.angles import circular_mean, modone
from shape_sensing_factory.sensing.geom_prob import (
    ArenaParams,
    expected_detectors_edge,
    expected_detectors_edge_concave,
    expected_detectors_vertex,
)
from shape_sensing_factory.utils.exceptions import ShapeFactoryError

# (sensor_id, k) of the segment an estimate came from
SegmentKey = Tuple[int, int]


def temp_length(obs: WholeEdgeObservation, v: float, theta: float) -> float:
    """Edge length from one whole-edge observation: v·l_d·sqrt(s² + 2s cosθ + 1), s = s_d / v."""
    s = obs.s_d / v
    return v * obs.l_d * math.sqrt(max(0.0, s * s + 2.0 * s * math.cos(theta) + 1.0))


def relative_direction(s_d: float, theta: float, v: float = 1.0) -> float:
    """Direction of the observed edge relative to the heading, ξ - φ, in [0, 2π)."""
    s = s_d / v
    cand = math.atan2(s * math.sin(theta), s * math.cos(theta) + 1.0)
    # the arctangent leaves a π ambiguity; the edge must face the beam
    if modone(cand - theta) < math.pi:
        cand += math.pi
    return modone(cand)


def temp_angle(s_k: float, s_k1: float, theta: float, v: float = 1.0) -> float:
    """Inner angle at the vertex between two segments meeting continuously."""
    sin_t = math.sin(theta)
    if sin_t == 0.0:
        raise ShapeFactoryError(
            f"beam angle {theta!r} has no side, vertex orientation is undefined",
            error_type="UNDEFINED_ORIENTATION",
        )
    diff = relative_direction(s_k, theta, v) - relative_direction(s_k1, theta, v)
    return modone(math.pi + diff if sin_t > 0 else math.pi - diff)


def _round_count(x: float) -> int:
    return int(math.floor(x + 0.5))


def class_length_estimate(cls: LengthClass) -> float:
    if not cls.members:
        raise ShapeFactoryError(f"length class {cls.index} has no members", error_type="EMPTY_CLASS")
    return statistics.fmean(m[2] for m in cls.members)


def class_angle_estimate(cls: AngleClass) -> float:
    if not cls.members:
        raise ShapeFactoryError(f"angle class {cls.index} has no members", error_type="EMPTY_CLASS")
    return circular_mean(m[2] for m in cls.members)


def class_edge_count(class_size: int, expected: float) -> int:
    """round(♯ / E), at least 1 for a nonempty class."""
    if class_size == 0:
        return 0
    if not expected > 0:
        raise ShapeFactoryError(
            f"expected detector count must be positive, got {expected}", error_type="INVALID_EXPECTATION"
        )
    return max(1, _round_count(class_size / expected))


class_vertex_count = class_edge_count


def _theta_weights(thetas: Iterable[float]) -> List[Tuple[float, int]]:
    return sorted(Counter(thetas).items())


def _expected_edge(lam: float, weights, arena: ArenaParams) -> float:
    return sum(n * expected_detectors_edge(lam, [th], arena) for th, n in weights)


def _expected_vertex(gamma: float, weights, arena: ArenaParams) -> float:
    return sum(n * expected_detectors_vertex(gamma, [th], arena) for th, n in weights)


def _expected_edge_concave(lam: float, weights, delta_xi: float, arena: ArenaParams) -> float:
    return sum(n * expected_detectors_edge_concave(lam, [th], delta_xi, arena) for th, n in weights)


def _knowns_for(known: Dict[int, object], sensor_id: int):
    try:
        return known[sensor_id]
    except KeyError:
        raise ShapeFactoryError(f"no known parameters for sensor {sensor_id}", error_type="INVALID_ARGUMENT")


def temp_lengths(edges: Sequence[WholeEdgeObservation], knowns: KnownParams) -> List[Member]:
    known = knowns.by_id()
    out = []
    for obs in edges:
        s = _knowns_for(known, obs.sensor_id)
        out.append((obs.sensor_id, obs.k, temp_length(obs, s.v, s.theta)))
    return out


def temp_angles(
    vertices: Sequence[VertexObservation], knowns: KnownParams, degenerate_tolerance: float
) -> Tuple[List[Member], int]:
    """Temporary angles and the number of observations dropped as straight or unorientable."""
    known = knowns.by_id()
    out, dropped = [], 0
    for obs in vertices:
        s = _knowns_for(known, obs.sensor_id)
        if math.sin(s.theta) == 0.0:
            dropped += 1
            continue
        gamma = temp_angle(obs.s_k, obs.s_k1, s.theta, s.v)
        if abs(gamma - math.pi) < degenerate_tolerance:
            dropped += 1
            continue
        out.append((obs.sensor_id, obs.k, gamma))
    return out, dropped


def build_length_classes(
    members: Sequence[Member], thetas: Sequence[float], arena: ArenaParams, config: EstimatorConfig
) -> List[LengthClass]:
    part = cluster_1d(
        [m[2] for m in members], config.k_max, config.reg_covar, config.random_state, config.merge_tolerance
    )
    weights = _theta_weights(thetas)
    classes = []
    for c in range(part.k):
        cls = LengthClass(index=c, members=[members[i] for i in part.members(c)])
        cls.lambda_hat = class_length_estimate(cls)
        cls.expected = _expected_edge(cls.lambda_hat, weights, arena)
        if cls.expected <= 0 or cls.size < config.min_class_ratio * cls.expected:
            cls.rejected = True
        else:
            cls.count_hat = class_edge_count(cls.size, cls.expected)
        classes.append(cls)
    return classes


def build_angle_classes(
    members: Sequence[Member], thetas: Sequence[float], arena: ArenaParams, config: EstimatorConfig
) -> List[AngleClass]:
    part = cluster_angles(
        [m[2] for m in members], config.k_max, config.reg_covar, config.random_state, config.angle_merge_tolerance
    )
    weights = _theta_weights(thetas)
    # order classes by estimated angle so indices are stable across runs
    built = []
    for c in range(part.k):
        cls = AngleClass(index=c, members=[members[i] for i in part.members(c)])
        cls.gamma_hat = class_angle_estimate(cls)
        built.append(cls)
    built.sort(key=lambda a: a.gamma_hat)
    for i, cls in enumerate(built):
        cls.index = i
        if abs(cls.gamma_hat - math.pi) < config.degenerate_angle_tolerance:
            cls.rejected = True
            continue
        cls.expected = _expected_vertex(cls.gamma_hat, weights, arena)
        if cls.expected <= 0 or cls.size < config.min_class_ratio * cls.expected:
            cls.rejected = True
        else:
            cls.count_hat = class_vertex_count(cls.size, cls.expected)
    return built


def resolve_min_support(
    config: EstimatorConfig, length_classes: Sequence[LengthClass], angle_classes: Sequence[AngleClass]
) -> int:
    """Configured support, or max(3, 10% of the median accepted class size)."""
    if config.min_support is not None:
        return config.min_support
    sizes = [c.size for c in list(length_classes) + list(angle_classes) if not c.rejected]
    if not sizes:
        return 3
    return max(3, _round_count(0.1 * statistics.median(sizes)))


def _class_lookup(classes) -> Dict[SegmentKey, int]:
    return {(m[0], m[1]): c.index for c in classes if not c.rejected for m in c.members}


def _vertex_tally(
    length_classes: Sequence[LengthClass],
    angle_classes: Sequence[AngleClass],
    thetas_by_sensor: Dict[int, float],
) -> Counter:
    """
    For every temporary angle, look up the length classes of the two segments it
    joins. Segments k and k+1 are in counterclockwise order when sinθ > 0 and in
    clockwise order otherwise; the left class is the edge ending at the vertex.
    """
    length_of = _class_lookup(length_classes)
    tally: Counter = Counter()
    for cls in angle_classes:
        if cls.rejected:
            continue
        for sensor_id, k, _ in cls.members:
            left, right = length_of.get((sensor_id, k)), length_of.get((sensor_id, k + 1))
            if math.sin(thetas_by_sensor[sensor_id]) < 0:
                left, right = right, left
            if left is None and right is None:
                continue
            tally[(cls.index, left, right)] += 1
    return tally


def _sorted_hypotheses(items) -> List[VertexHypothesis]:
    hyps = [VertexHypothesis(a, l, r, n) for (a, l, r), n in items]
    hyps.sort(key=lambda h: (-h.support, h.angle_class, _none_last(h.left_length_class), _none_last(h.right_length_class)))
    return hyps


def combine_vertices(
    length_classes: Sequence[LengthClass],
    angle_classes: Sequence[AngleClass],
    thetas_by_sensor: Dict[int, float],
    min_support: int,
) -> List[VertexHypothesis]:
    """(angle class, left length class, right length class) tallies with at least ``min_support`` angles."""
    tally = _vertex_tally(length_classes, angle_classes, thetas_by_sensor)
    return _sorted_hypotheses((key, n) for key, n in tally.items() if n >= min_support)


def fallback_vertices(
    length_classes: Sequence[LengthClass],
    angle_classes: Sequence[AngleClass],
    thetas_by_sensor: Dict[int, float],
    hypotheses: Sequence[VertexHypothesis],
) -> List[VertexHypothesis]:
    """
    Below-threshold tallies of the accepted angle classes that no hypothesis covers.
    Sharp vertices are seen by few sensors, so their tallies rarely reach the support
    the wider angles set.
    """
    covered = {h.angle_class for h in hypotheses}
    open_classes = {c.index for c in angle_classes if not c.rejected and c.count_hat > 0} - covered
    if not open_classes:
        return []
    tally = _vertex_tally(length_classes, angle_classes, thetas_by_sensor)
    return _sorted_hypotheses((key, n) for key, n in tally.items() if key[0] in open_classes)


def _none_last(x: Optional[int]) -> int:
    return x if x is not None else 1 << 30


def order_adjacency(
    adjacencies: Sequence[AdjacencyObservation],
    length_classes: Sequence[LengthClass],
    thetas_by_sensor: Dict[int, float],
    min_support: int,
) -> AdjacencyCount:
    """Count consecutive whole-edge pairs per (class, class) in counterclockwise order."""
    length_of = _class_lookup(length_classes)
    adjacency = AdjacencyCount(size=len(length_classes), min_support=min_support)
    for obs in adjacencies:
        m, m1 = length_of.get((obs.sensor_id, obs.k)), length_of.get((obs.sensor_id, obs.k1))
        if m is None or m1 is None:
            continue
        if math.sin(thetas_by_sensor[obs.sensor_id]) < 0:
            m, m1 = m1, m
        adjacency.add(m, m1)
    adjacency.judged = [
        (i, j) for i in range(adjacency.size) for j in range(adjacency.size) if adjacency.counts[i][j] >= min_support
    ]
    return adjacency


def _dominant(weights: Dict[int, int]) -> Optional[int]:
    if not weights:
        return None
    return min(weights, key=lambda c: (-weights[c], c))


def concave_correction(
    length_classes: Sequence[LengthClass],
    angle_classes: Sequence[AngleClass],
    hypotheses: Sequence[VertexHypothesis],
    thetas: Sequence[float],
    arena: ArenaParams,
) -> List[int]:
    """
    Recount the length classes flanking concave vertices. Both neighbours of a
    reflex vertex hide part of their directions behind the other, so each side's
    dominant class gets the concave class's count of blocked edges, counted against
    the blocking-aware expectation; its remaining detections are counted as before.
    Returns the indices of the classes whose count was revised.
    """
    by_index = {c.index: c for c in length_classes}
    blocked: Dict[int, int] = defaultdict(int)
    delta: Dict[int, Tuple[int, float]] = {}
    for gamma_cls in angle_classes:
        if gamma_cls.rejected or not gamma_cls.concave:
            continue
        left_w: Dict[int, int] = defaultdict(int)
        right_w: Dict[int, int] = defaultdict(int)
        for h in hypotheses:
            if h.angle_class != gamma_cls.index:
                continue
            if h.left_length_class is not None:
                left_w[h.left_length_class] += h.support
            if h.right_length_class is not None:
                right_w[h.right_length_class] += h.support
        for side in (left_w, right_w):
            c = _dominant(side)
            if c is None or by_index[c].rejected:
                continue
            blocked[c] += gamma_cls.count_hat
            # the concave class blocking the most edges sets δξ
            if c not in delta or gamma_cls.count_hat > delta[c][0]:
                delta[c] = (gamma_cls.count_hat, gamma_cls.gamma_hat - math.pi)

    revised = []
    weights = _theta_weights(thetas)
    for c, m in sorted(blocked.items()):
        cls = by_index[c]
        e_c = _expected_edge_concave(cls.lambda_hat, weights, delta[c][1], arena)
        if e_c <= 0:
            continue
        m = min(m, _round_count(cls.size / e_c))
        rest = max(0.0, cls.size - m * e_c)
        cls.count_uncorrected = cls.count_hat
        cls.count_hat = max(1, m + _round_count(rest / cls.expected))
        revised.append(c)
    return revised


def estimate(
    observations: ObservationSet,
    knowns: KnownParams,
    config: Optional[EstimatorConfig] = None,
    assembly: Optional[AssemblyConfig] = None,
    logger=None,
) -> EstimationReport:
    """Run every estimation part, then assemble; an empty report when nothing was observed."""
    config = config or EstimatorConfig()
    assembly = assembly or AssemblyConfig()
    arena = knowns.arena()
    thetas = knowns.thetas
    thetas_by_sensor = {s.id: s.theta for s in knowns.sensors}
    start = time.time()

    lengths = temp_lengths(observations.edges, knowns)
    length_classes = build_length_classes(lengths, thetas, arena, config)
    log_action(
        "LENGTH_CLASSES",
        observations=len(lengths),
        classes=len(length_classes),
        rejected=sum(c.rejected for c in length_classes),
        logger=logger,
    )

    angles, dropped = temp_angles(observations.vertices, knowns, config.degenerate_angle_tolerance)
    angle_classes = build_angle_classes(angles, thetas, arena, config)
    log_action(
        "ANGLE_CLASSES",
        observations=len(angles),
        dropped=dropped,
        classes=len(angle_classes),
        rejected=sum(c.rejected for c in angle_classes),
        logger=logger,
    )

    min_support = resolve_min_support(config, length_classes, angle_classes)
    hypotheses = combine_vertices(length_classes, angle_classes, thetas_by_sensor, min_support)
    adjacency = order_adjacency(observations.adjacencies, length_classes, thetas_by_sensor, min_support)
    revised = concave_correction(length_classes, angle_classes, hypotheses, thetas, arena)
    fallback = fallback_vertices(length_classes, angle_classes, thetas_by_sensor, hypotheses)
    log_action(
        "COMBINE",
        min_support=min_support,
        hypotheses=len(hypotheses),
        fallback=len(fallback),
        judged_pairs=len(adjacency.judged),
        concave_revised=len(revised),
        logger=logger,
    )

    report = EstimationReport(
        length_classes=length_classes,
        angle_classes=angle_classes,
        hypotheses=hypotheses,
        adjacency=adjacency,
        min_support=min_support,
        diagnostics={
            "observations": {
                "edges": len(observations.edges),
                "vertices": len(observations.vertices),
                "adjacencies": len(observations.adjacencies),
            },
            "dropped_angles": dropped,
            "edge_total": sum(c.count_hat for c in length_classes if not c.rejected),
            "vertex_total": sum(c.count_hat for c in angle_classes if not c.rejected),
            "concave_revised": revised,
            "fallback_hypotheses": [h.to_dict() for h in fallback],
        },
    )
    if report.is_empty:
        log_action_stats("ESTIMATE", start, status="empty", logger=logger)
        return report

    try:
        report.shapes = assemble(length_classes, angle_classes, hypotheses + fallback, adjacency, assembly)
    except ShapeFactoryError as e:
        if e.error_type not in ("INFEASIBLE_ARRANGEMENT", "SEARCH_LIMIT"):
            raise
        report.diagnostics["assembly_error"] = str(e)
    log_action_stats(
        "ESTIMATE",
        start,
        edges=report.diagnostics["edge_total"],
        vertices=report.diagnostics["vertex_total"],
        shapes=len(report.shapes),
        logger=logger,
    )
    return report
