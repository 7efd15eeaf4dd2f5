"""
Trace analysis: cut a distance trace into linear pieces, label how each piece starts
and ends, and pull out the observations the estimator works from.

Sampled traces are cut into runs of positive readings first. Inside a run a new
piece starts at a jump, or at the first sample that leaves the line through the two
previous samples of the current piece. Pieces are fitted by least squares.
"""
import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from shape_sensing_factory.configs.enums import PieceKind, SegmentEvent
from shape_sensing_factory.configs.tolerances import SegmentationConfig
from shape_sensing_factory.models.observations import (
    AdjacencyObservation,
    ObservationSet,
    Segment,
    VertexObservation,
    WholeEdgeObservation,
)
from shape_sensing_factory.models.trace import AnalyticTrace, TraceSample

# why a detection run started or stopped
_TRACE = "trace"
_ZERO = "zero"
_EMPTY = "empty"

# inter-piece boundary kinds inside a run
_JUMP = "jump"
_BEND = "bend"

GAP_FACTOR = 1.5


@dataclass
class _Run:
    start_reason: str
    t: List[float] = field(default_factory=list)
    r: List[float] = field(default_factory=list)
    end_reason: str = _TRACE


@dataclass
class _Piece:
    t: np.ndarray
    r: np.ndarray
    slope: float = 0.0
    intercept: float = 0.0

    @property
    def n(self) -> int:
        return len(self.t)

    def fit(self) -> None:
        if self.n >= 2:
            # centred time keeps the normal equations well conditioned
            t0 = self.t[0]
            self.slope, c = np.polyfit(self.t - t0, self.r, 1)
            self.intercept = c - self.slope * t0
        else:
            self.slope, self.intercept = 0.0, float(self.r[0])

    def at(self, t: float) -> float:
        return float(self.intercept + self.slope * t)


def perturb_slope(s_d: float, delta: float) -> float:
    """Rotate a slope by ``delta`` radians in arctan space."""
    return math.tan(math.atan(s_d) + delta)


def apply_slope_noise(s_d: float, epsilon_s: float, rng: Optional[np.random.Generator]) -> float:
    """s_d' = tan(arctan(s_d) + N(0, ε_s)); unchanged for ε_s = 0."""
    if epsilon_s <= 0.0:
        return s_d
    return perturb_slope(s_d, float(rng.normal(0.0, epsilon_s)))


def noisy_segments(segments: Sequence[Segment], epsilon_s: float, rng: Optional[np.random.Generator]) -> List[Segment]:
    """Perturb every segment slope once, so edge and vertex observations agree."""
    if epsilon_s <= 0.0:
        return list(segments)
    return [replace(seg, s_d=apply_slope_noise(seg.s_d, epsilon_s, rng)) for seg in segments]


def _detection_runs(samples: Sequence[TraceSample], report_period: float, bridge_single_loss: bool) -> List[_Run]:
    runs: List[_Run] = []
    current: Optional[_Run] = None
    for i, s in enumerate(samples):
        dt_prev = s.t - samples[i - 1].t if i > 0 else 0.0
        gap = dt_prev > GAP_FACTOR * report_period
        detected = s.r is not None and s.r > 0.0
        bridged = gap and bridge_single_loss and detected and dt_prev <= (1.0 + GAP_FACTOR) * report_period

        if current is not None and gap and not bridged:
            current.end_reason = _EMPTY
            runs.append(current)
            current = None

        if detected:
            if current is None:
                if i == 0:
                    reason = _TRACE
                elif gap:
                    reason = _EMPTY
                elif samples[i - 1].r == 0.0:
                    reason = _ZERO
                else:
                    reason = _EMPTY
                current = _Run(start_reason=reason)
            current.t.append(s.t)
            current.r.append(s.r)
        elif current is not None:
            current.end_reason = _ZERO if s.r == 0.0 else _EMPTY
            runs.append(current)
            current = None

    if current is not None:
        current.end_reason = _TRACE
        runs.append(current)
    return runs


def _split_run(run: _Run, report_period: float, v: float, config: SegmentationConfig) -> Tuple[List[_Piece], List[str]]:
    """Pieces of one run and the kind of each boundary between consecutive pieces."""
    t = np.asarray(run.t, dtype=float)
    r = np.asarray(run.r, dtype=float)
    n = len(t)

    # steps scaled to one report period so a bridged loss does not look like a jump
    steps = np.zeros(n)
    if n > 1:
        steps[1:] = np.abs(np.diff(r)) * report_period / np.diff(t)
    base = v * report_period

    def is_jump(i: int) -> bool:
        neighbour = 0.0
        if i - 1 >= 1:
            neighbour = max(neighbour, steps[i - 1])
        if i + 1 < n:
            neighbour = max(neighbour, steps[i + 1])
        return steps[i] > config.jump_factor * (base + neighbour)

    bounds: List[str] = []
    groups: List[List[int]] = [[0]]
    for i in range(1, n):
        cur = groups[-1]
        if is_jump(i):
            bounds.append(_JUMP)
            groups.append([i])
            continue
        if len(cur) >= 2:
            a, b = cur[-2], cur[-1]
            predicted = r[b] + (r[b] - r[a]) / (t[b] - t[a]) * (t[i] - t[b])
            if abs(r[i] - predicted) > config.slope_threshold:
                bounds.append(_BEND)
                groups.append([i])
                continue
        cur.append(i)

    pieces = []
    for g in groups:
        piece = _Piece(t=t[g], r=r[g])
        piece.fit()
        pieces.append(piece)
    return pieces, bounds


def _joint(left: _Piece, right: _Piece, kind: str) -> Tuple[SegmentEvent, float, bool]:
    """Label, boundary time and continuity of the joint between two pieces of a run."""
    t_last, t_first = float(left.t[-1]), float(right.t[0])
    mid = 0.5 * (t_last + t_first)
    if kind == _BEND and left.n >= 2 and right.n >= 2 and left.slope != right.slope:
        tau = (right.intercept - left.intercept) / (left.slope - right.slope)
        slack = 1e-9 * max(1.0, abs(t_first))
        if t_last - slack <= tau <= t_first + slack:
            return SegmentEvent.SLOPE_CHANGE, min(max(tau, t_last), t_first), True
    if left.n >= 2 and right.n >= 2:
        rising = right.at(mid) > left.at(mid)
    else:
        rising = right.r[0] > left.r[-1]
    return (SegmentEvent.JUMP_UP if rising else SegmentEvent.JUMP_DOWN), mid, False


def _outer_event(reason: str, r_edge: float, toward_range: bool, r_max: float, slope_step: float, tol: float) -> SegmentEvent:
    if reason == _TRACE:
        return SegmentEvent.TRACE_EDGE
    if reason == _ZERO:
        return SegmentEvent.ZERO_CONTACT
    if toward_range and r_max - r_edge <= slope_step + tol:
        return SegmentEvent.RANGE_BOUNDARY
    return SegmentEvent.TO_EMPTY_BELOW_MAX


def segment_trace(
    samples: Sequence[TraceSample],
    report_period: float,
    v: float,
    r_max: float,
    config: Optional[SegmentationConfig] = None,
) -> List[Segment]:
    """Maximal linear pieces of a sampled trace, with labelled start and end events."""
    config = config or SegmentationConfig()
    if not samples:
        return []
    sensor_id = samples[0].sensor_id
    half = 0.5 * report_period

    # (piece, start_event, t_s, end_event, t_e, joined_prev)
    raw = []
    for run in _detection_runs(samples, report_period, config.merge_lost_splits):
        pieces, bounds = _split_run(run, report_period, v, config)
        starts = [None] * len(pieces)
        ends = [None] * len(pieces)
        joined = [False] * len(pieces)
        for j, kind in enumerate(bounds):
            event, tau, continuous = _joint(pieces[j], pieces[j + 1], kind)
            ends[j] = (event, tau)
            starts[j + 1] = (event, tau)
            joined[j + 1] = continuous

        first, last = pieces[0], pieces[-1]
        t0 = run.t[0] if run.start_reason == _TRACE else run.t[0] - half
        ev0 = _outer_event(
            run.start_reason, float(first.r[0]), first.slope < 0, r_max,
            abs(first.slope) * report_period, config.range_tolerance,
        )
        if ev0 == SegmentEvent.TO_EMPTY_BELOW_MAX:
            ev0 = SegmentEvent.FROM_EMPTY_BELOW_MAX
        starts[0] = (ev0, t0)

        t1 = run.t[-1] if run.end_reason == _TRACE else run.t[-1] + half
        ev1 = _outer_event(
            run.end_reason, float(last.r[-1]), last.slope > 0, r_max,
            abs(last.slope) * report_period, config.range_tolerance,
        )
        ends[-1] = (ev1, t1)

        for j, piece in enumerate(pieces):
            raw.append((piece, starts[j][0], starts[j][1], ends[j][0], ends[j][1], joined[j]))

    segments: List[Segment] = []
    kept_prev = False
    for piece, ev_s, t_s, ev_e, t_e, joined_prev in raw:
        if piece.n < config.min_support or t_e <= t_s:
            kept_prev = False
            continue
        segments.append(
            Segment(
                sensor_id=sensor_id,
                k=len(segments),
                t_s=t_s,
                t_e=t_e,
                s_d=float(piece.slope),
                r_s=piece.at(t_s),
                r_e=piece.at(t_e),
                start_event=ev_s,
                end_event=ev_e,
                n_samples=piece.n,
                joined_prev=joined_prev and kept_prev,
            )
        )
        kept_prev = True
    return segments


def segments_from_analytic(trace: AnalyticTrace) -> List[Segment]:
    """Segments of an exact trace; events come straight from the trace's breakpoints."""
    events = dict(trace.events)
    segments: List[Segment] = []
    pieces = trace.pieces
    for i, piece in enumerate(pieces):
        if piece.kind != PieceKind.EDGE or piece.duration <= 0.0:
            continue
        ev_s = events.get(piece.t_start, SegmentEvent.TRACE_EDGE) if i > 0 else SegmentEvent.TRACE_EDGE
        ev_e = events.get(pieces[i + 1].t_start, SegmentEvent.TRACE_EDGE) if i + 1 < len(pieces) else SegmentEvent.TRACE_EDGE
        joined = (
            ev_s == SegmentEvent.SLOPE_CHANGE
            and i > 0
            and pieces[i - 1].kind == PieceKind.EDGE
            and bool(segments)
            and segments[-1].t_e == piece.t_start
        )
        segments.append(
            Segment(
                sensor_id=trace.sensor_id,
                k=len(segments),
                t_s=piece.t_start,
                t_e=piece.t_end,
                s_d=piece.slope,
                r_s=piece.r0,
                r_e=piece.r_end,
                start_event=ev_s,
                end_event=ev_e,
                joined_prev=joined,
                edge_index=piece.edge_index,
            )
        )
    return segments


def extract_whole_edge_observations(segments: Sequence[Segment]) -> List[WholeEdgeObservation]:
    return [WholeEdgeObservation(s.sensor_id, s.k, s.l_d, s.s_d) for s in segments if s.is_whole_edge]


def extract_vertex_observations(segments: Sequence[Segment]) -> List[VertexObservation]:
    """Consecutive segments meeting continuously at a slope change; partial edges allowed."""
    out = []
    for a, b in zip(segments[:-1], segments[1:]):
        if b.k == a.k + 1 and b.joined_prev and b.start_event == SegmentEvent.SLOPE_CHANGE and a.s_d != b.s_d:
            out.append(VertexObservation(a.sensor_id, a.k, a.s_d, b.s_d))
    return out


def extract_adjacency_observations(segments: Sequence[Segment]) -> List[AdjacencyObservation]:
    """Two whole-edge segments in a row, joined without a jump."""
    out = []
    for a, b in zip(segments[:-1], segments[1:]):
        if b.k == a.k + 1 and b.joined_prev and a.is_whole_edge and b.is_whole_edge:
            out.append(AdjacencyObservation(a.sensor_id, a.k, b.k))
    return out


def extract_observations(segments: Sequence[Segment]) -> ObservationSet:
    return ObservationSet(
        edges=extract_whole_edge_observations(segments),
        vertices=extract_vertex_observations(segments),
        adjacencies=extract_adjacency_observations(segments),
    )


def analyze_samples(
    samples: Sequence[TraceSample],
    report_period: float,
    v: float,
    r_max: float,
    config: Optional[SegmentationConfig] = None,
    epsilon_s: float = 0.0,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[List[Segment], ObservationSet]:
    """Segment one sensor's samples, add slope noise and extract observations."""
    segments = noisy_segments(segment_trace(samples, report_period, v, r_max, config), epsilon_s, rng)
    return segments, extract_observations(segments)


def analyze_analytic(
    trace: AnalyticTrace, epsilon_s: float = 0.0, rng: Optional[np.random.Generator] = None
) -> Tuple[List[Segment], ObservationSet]:
    segments = noisy_segments(segments_from_analytic(trace), epsilon_s, rng)
    return segments, extract_observations(segments)
