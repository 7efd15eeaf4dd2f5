"""
Polygon assembly: arrange the estimated edge multiset into a closed cycle.

The search places edges one at a time starting from the lowest length class and
picks the inner angle at the head of each edge. A joint (edge, angle, next edge) is
allowed when the vertex hypotheses back it; a first pass only accepts joints backed
by a two-sided hypothesis or by a judged adjacency plus a one-sided hypothesis.
When the first finds nothing, a second pass places any angle at any joint and sums
whatever tallies back it, so closure alone decides feasibility. Cycles that close
within tolerance are kept, scored by summed support and closure.
"""
import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from shape_sensing_factory.configs.tolerances import AssemblyConfig
from shape_sensing_factory.models.classes import AdjacencyCount, AngleClass, LengthClass, VertexHypothesis
from shape_sensing_factory.models.shape import ShapeEstimate
from shape_sensing_factory.sensing.angles import TWO_PI
from shape_sensing_factory.utils.exceptions import ShapeFactoryError

MAX_SEARCH_NODES = 2_000_000

# (length class, angle class at its head) per edge of a cycle
Cycle = Tuple[Tuple[int, int], ...]


def closure_check(sequence: Sequence[Tuple[float, float]]) -> Tuple[float, float]:
    """
    Closure and angle residuals of a chain of (edge length, inner angle at its head),
    with the first edge along +x and each turn π - γ.
    """
    x = y = xi = turn = 0.0
    for length, gamma in sequence:
        x += length * math.cos(xi)
        y += length * math.sin(xi)
        xi += math.pi - gamma
        turn += math.pi - gamma
    return math.hypot(x, y), abs(turn - TWO_PI)


def angle_count_variants(counts: Dict[int, int], total: int, slack: int) -> List[Dict[int, int]]:
    """Angle-class counts adjusted by at most ``slack`` in all so they sum to ``total``."""
    diff = total - sum(counts.values())
    if diff == 0:
        return [dict(counts)]
    if abs(diff) > slack:
        return []
    step = 1 if diff > 0 else -1
    out = []
    for combo in itertools.combinations_with_replacement(sorted(counts), abs(diff)):
        adjusted = dict(counts)
        for c in combo:
            adjusted[c] += step
        if all(v >= 0 for v in adjusted.values()):
            out.append(adjusted)
    return out


def _rotations(cycle: Cycle) -> List[Cycle]:
    return [cycle[i:] + cycle[:i] for i in range(len(cycle))]


def canonical(cycle: Cycle) -> Cycle:
    return min(_rotations(cycle))


def mirror(cycle: Cycle) -> Cycle:
    """The same polygon walked the other way round."""
    n = len(cycle)
    edges = [e for e, _ in cycle]
    angles = [g for _, g in cycle]
    return tuple((edges[n - 1 - i], angles[(n - 2 - i) % n]) for i in range(n))


class _JointIndex:
    """Support lookups for a joint (edge e, angle g at its head, next edge f)."""

    def __init__(self, hypotheses: Sequence[VertexHypothesis], adjacency: Optional[AdjacencyCount]):
        self.adjacency = adjacency
        self.two_sided: Dict[Tuple[int, int, int], int] = {}
        self.left: Dict[Tuple[int, int], int] = defaultdict(int)
        self.right: Dict[Tuple[int, int], int] = defaultdict(int)
        self.left_any: Dict[Tuple[int, int], int] = defaultdict(int)
        self.right_any: Dict[Tuple[int, int], int] = defaultdict(int)
        for h in hypotheses:
            a, lft, rgt = h.angle_class, h.left_length_class, h.right_length_class
            if h.two_sided:
                self.two_sided[(a, lft, rgt)] = self.two_sided.get((a, lft, rgt), 0) + h.support
                self.left_any[(a, lft)] += h.support
                self.right_any[(a, rgt)] += h.support
            elif lft is not None:
                self.left[(a, lft)] += h.support
            else:
                self.right[(a, rgt)] += h.support

    def _adjacent(self, e: int, f: int) -> Tuple[bool, int]:
        if self.adjacency is None or max(e, f) >= self.adjacency.size:
            return False, 0
        return self.adjacency.connected(e, f), self.adjacency.counts[e][f]

    def support(self, e: int, g: int, f: int, strict: bool) -> Optional[int]:
        connected, adj = self._adjacent(e, f)
        two = self.two_sided.get((g, e, f), 0)
        if two:
            return two + adj
        one = self.left.get((g, e), 0) + self.right.get((g, f), 0)
        if strict:
            return one + adj if connected and one > 0 else None
        # unbacked joints stay allowed here; closure decides and support only ranks
        return one + self.left_any.get((g, e), 0) + self.right_any.get((g, f), 0) + adj


@dataclass
class _Found:
    cycle: Cycle
    support: int
    closure: float
    angle_residual: float


@dataclass
class _Search:
    lam: Dict[int, float]
    gam: Dict[int, float]
    joints: _JointIndex
    strict: bool
    n: int
    closure_limit: float
    angle_limit: float
    found: List[_Found] = field(default_factory=list)
    nodes: int = 0

    def run(self, edge_counts: Dict[int, int], angle_counts: Dict[int, int]) -> None:
        first = min(c for c, k in edge_counts.items() if k > 0)
        edge_counts = dict(edge_counts)
        edge_counts[first] -= 1
        remaining = sum(self.lam[c] * k for c, k in edge_counts.items())
        x, y = self.lam[first], 0.0
        self._step([first], [], 0, edge_counts, dict(angle_counts), x, y, 0.0, remaining)

    def _step(self, edges, angles, support, edge_counts, angle_counts, x, y, xi, remaining) -> None:
        self.nodes += 1
        if self.nodes > MAX_SEARCH_NODES:
            raise ShapeFactoryError(
                f"assembly search exceeded {MAX_SEARCH_NODES} nodes for {self.n} edges", error_type="SEARCH_LIMIT"
            )
        # the rest of the chain cannot bring the walk back to the start
        if math.hypot(x, y) > remaining + self.closure_limit:
            return
        e = edges[-1]
        closing = len(edges) == self.n
        for g in sorted(angle_counts):
            if angle_counts[g] == 0:
                continue
            nexts = [edges[0]] if closing else [f for f in sorted(edge_counts) if edge_counts[f] > 0]
            for f in nexts:
                s = self.joints.support(e, g, f, self.strict)
                if s is None:
                    continue
                angle_counts[g] -= 1
                if closing:
                    self._close(edges, angles + [g], support + s)
                else:
                    edge_counts[f] -= 1
                    nxi = xi + math.pi - self.gam[g]
                    self._step(
                        edges + [f],
                        angles + [g],
                        support + s,
                        edge_counts,
                        angle_counts,
                        x + self.lam[f] * math.cos(nxi),
                        y + self.lam[f] * math.sin(nxi),
                        nxi,
                        remaining - self.lam[f],
                    )
                    edge_counts[f] += 1
                angle_counts[g] += 1

    def _close(self, edges, angles, support) -> None:
        closure, angle_residual = closure_check([(self.lam[e], self.gam[g]) for e, g in zip(edges, angles)])
        if closure <= self.closure_limit and angle_residual <= self.angle_limit:
            self.found.append(_Found(tuple(zip(edges, angles)), support, closure, angle_residual))


def _to_estimate(found: _Found, lam, gam, mirror_ambiguous: bool) -> ShapeEstimate:
    return ShapeEstimate(
        lengths=[lam[e] for e, _ in found.cycle],
        angles=[gam[g] for _, g in found.cycle],
        length_classes=[e for e, _ in found.cycle],
        angle_classes=[g for _, g in found.cycle],
        closure_residual=found.closure,
        angle_residual=found.angle_residual,
        support=found.support,
        mirror_ambiguous=mirror_ambiguous,
    )


def assemble(
    length_classes: Sequence[LengthClass],
    angle_classes: Sequence[AngleClass],
    hypotheses: Sequence[VertexHypothesis],
    adjacency: Optional[AdjacencyCount],
    config: Optional[AssemblyConfig] = None,
) -> List[ShapeEstimate]:
    """Closed arrangements of the estimated classes, best first, one per rotation/reflection family."""
    config = config or AssemblyConfig()
    lam = {c.index: c.lambda_hat for c in length_classes if not c.rejected and c.count_hat > 0}
    gam = {c.index: c.gamma_hat for c in angle_classes if not c.rejected and c.count_hat > 0}
    edge_counts = {c.index: c.count_hat for c in length_classes if c.index in lam}
    n = sum(edge_counts.values())

    if n > config.max_edges:
        raise ShapeFactoryError(
            f"{n} estimated edges exceed the search limit of {config.max_edges}", error_type="SEARCH_LIMIT"
        )
    if n < 3:
        raise ShapeFactoryError(f"a polygon needs at least 3 edges, estimated {n}", error_type="INFEASIBLE_ARRANGEMENT")
    if not gam:
        raise ShapeFactoryError("no accepted inner-angle class to place at the vertices", error_type="INFEASIBLE_ARRANGEMENT")

    angle_counts = {c.index: c.count_hat for c in angle_classes if c.index in gam}
    angle_total = sum(angle_counts.values())
    variants = angle_count_variants(angle_counts, n, config.count_slack)
    if not variants:
        raise ShapeFactoryError(
            f"{angle_total} estimated vertices cannot match {n} estimated edges within slack {config.count_slack}",
            error_type="INFEASIBLE_ARRANGEMENT",
        )

    perimeter = sum(lam[c] * k for c, k in edge_counts.items())
    joints = _JointIndex(hypotheses, adjacency)
    found: List[_Found] = []
    for strict in (True, False):
        search = _Search(
            lam=lam,
            gam=gam,
            joints=joints,
            strict=strict,
            n=n,
            closure_limit=config.closure_tolerance * perimeter,
            angle_limit=config.angle_tolerance,
        )
        for counts in variants:
            search.run(edge_counts, counts)
        found = search.found
        if found:
            break
    if not found:
        raise ShapeFactoryError(
            f"no cycle of {n} edges closes within {config.closure_tolerance:.0%} of the perimeter "
            f"and {config.angle_tolerance} rad of total turn under the vertex hypotheses",
            error_type="INFEASIBLE_ARRANGEMENT",
        )

    # best orientation per family, and the best support seen per exact orientation
    by_orientation: Dict[Cycle, _Found] = {}
    for f in found:
        key = canonical(f.cycle)
        best = by_orientation.get(key)
        if best is None or (f.support, -f.closure) > (best.support, -best.closure):
            by_orientation[key] = f

    families: Dict[Cycle, List[Cycle]] = defaultdict(list)
    for key in by_orientation:
        families[min(key, canonical(mirror(key)))].append(key)

    estimates = []
    for family, keys in families.items():
        keys.sort(key=lambda k: (-by_orientation[k].support, by_orientation[k].closure, k))
        head = by_orientation[keys[0]]
        ambiguous = len(keys) > 1 and by_orientation[keys[1]].support == head.support
        estimates.append((head, keys[0], ambiguous))

    estimates.sort(key=lambda t: (-t[0].support, t[0].closure, t[1]))
    return [_to_estimate(f, lam, gam, amb) for f, _, amb in estimates[: config.max_results]]
