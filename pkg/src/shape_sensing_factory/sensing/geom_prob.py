"""
Geometric probabilities of whole-edge and vertex detection.

Every formula divides by the measure of directed lines from which a beam of range
r_max at angle θ can reach the monitored region: 2 L_Ω + 2π W with W = r_max |sin θ|.
"""
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Tuple

from scipy import integrate

from shape_sensing_factory.sensing.angles import DEGENERATE_ANGLE_EPS, TWO_PI, modone
from shape_sensing_factory.utils.exceptions import ShapeFactoryError

PI = math.pi


@dataclass(frozen=True)
class ArenaParams:
    """Perimeter of the monitored convex region and the sensing range."""

    L_omega: float
    r_max: float

    def __post_init__(self):
        if self.L_omega <= 0 or self.r_max <= 0:
            raise ShapeFactoryError(
                f"arena needs positive L_omega and r_max, got {self.L_omega}, {self.r_max}",
                error_type="INVALID_ARGUMENT",
            )

    @classmethod
    def disk(cls, radius: float, r_max: float) -> "ArenaParams":
        return cls(L_omega=TWO_PI * radius, r_max=r_max)

    def strip_width(self, theta: float) -> float:
        return self.r_max * abs(math.sin(theta))

    def line_measure(self, theta: float) -> float:
        return 2.0 * self.L_omega + 2.0 * PI * self.strip_width(theta)


def eta(lam: float, theta: float, r_max: float) -> float:
    """Half-width of the direction lobe in which an edge of length λ fits in the strip."""
    if lam <= 0:
        raise ShapeFactoryError(f"edge length must be positive, got {lam}", error_type="INVALID_ARGUMENT")
    width = r_max * abs(math.sin(theta))
    if width >= lam:
        return PI / 2
    return math.asin(width / lam)


def _lobe(width: float, lam: float, x: float) -> float:
    """∫_0^x (W - λ sin u) du."""
    return width * x - lam * (1.0 - math.cos(x))


def whole_edge_measure(lam: float, theta: float, r_max: float) -> float:
    """Measure of lines detecting a fully visible edge, 2ηW - 2λ(1 - cos η)."""
    width = r_max * abs(math.sin(theta))
    if width == 0.0:
        return 0.0
    e = eta(lam, theta, r_max)
    return max(0.0, 2.0 * e * width - 2.0 * lam * (1.0 - math.cos(e)))


def q_d_edge(lam: float, theta: float, arena: ArenaParams) -> float:
    """Probability that a random sensor traces a whole unblocked edge of length λ."""
    return whole_edge_measure(lam, theta, arena.r_max) / arena.line_measure(theta)


def expected_detectors_edge(lam: float, thetas: Iterable[float], arena: ArenaParams) -> float:
    return sum(q_d_edge(lam, th, arena) for th in thetas)


def _check_gamma(gamma: float) -> None:
    if (
        gamma <= DEGENERATE_ANGLE_EPS
        or gamma >= TWO_PI - DEGENERATE_ANGLE_EPS
        or abs(gamma - PI) < DEGENERATE_ANGLE_EPS
    ):
        raise ShapeFactoryError(f"inner angle {gamma!r} is degenerate", error_type="DEGENERATE_VERTEX")


def q_d_vertex(gamma: float, theta: float, arena: ArenaParams) -> float:
    """Probability that a random sensor's reading bends continuously at a vertex of inner angle γ."""
    _check_gamma(gamma)
    opening = gamma if gamma < PI else TWO_PI - gamma
    return opening * arena.strip_width(theta) / arena.line_measure(theta)


def expected_detectors_vertex(gamma: float, thetas: Iterable[float], arena: ArenaParams) -> float:
    _check_gamma(gamma)
    return sum(q_d_vertex(gamma, th, arena) for th in thetas)


# Zone ends on [0, 2π) for a lobe half-width η: Z1..Z6
def _zone(x: float, e: float) -> int:
    """Zone index 1..6 of x; x may run up to 3π and is read modulo 2π."""
    if x >= TWO_PI:
        x -= TWO_PI
    ends = (e, PI - e, PI, PI + e, TWO_PI - e)
    for k, end in enumerate(ends, start=1):
        if x < end:
            return k
    return 6


def _half(x: float) -> int:
    if x >= TWO_PI:
        x -= TWO_PI
    return 1 if x < PI else 2


def _unsaturated(a: float, d: float, width: float, lam: float, e: float) -> Tuple[float, str]:
    h = lambda x: _lobe(width, lam, x)  # noqa: E731
    full = 2.0 * h(e)
    half = h(e)
    za, zb = _zone(a, e), _zone(a + d, e)
    label = f"Z{za}Z{zb}"

    cases = {
        # a in Z1: the interval ends inside the lobe around π
        (1, 1): lambda: full + h(a) - h(a + d),
        (1, 2): lambda: half + h(a),
        (1, 3): lambda: h(a) + h(PI - a - d),
        (1, 4): lambda: h(a) - h(a + d - PI),
        # a in Z2: the interval ends in the gap after the lobe around π
        (2, 2): lambda: full,
        (2, 3): lambda: half + h(PI - a - d),
        (2, 4): lambda: half - h(a + d - PI),
        (2, 5): lambda: 0.0,
        # a in Z3: the interval ends inside the lobe around 2π
        (3, 3): lambda: full + h(PI - a - d) - h(PI - a),
        (3, 4): lambda: full - h(a + d - PI) - h(PI - a),
        (3, 5): lambda: half - h(PI - a),
        (3, 6): lambda: h(TWO_PI - a - d) - h(PI - a),
        # a in Z4: mirror of Z1 shifted by π
        (4, 4): lambda: full + h(a - PI) - h(a + d - PI),
        (4, 5): lambda: half + h(a - PI),
        (4, 6): lambda: h(a - PI) + h(TWO_PI - a - d),
        (4, 1): lambda: h(a - PI) - h(a + d - TWO_PI),
        # a in Z5
        (5, 5): lambda: full,
        (5, 6): lambda: half + h(TWO_PI - a - d),
        (5, 1): lambda: half - h(a + d - TWO_PI),
        (5, 2): lambda: 0.0,
        # a in Z6: the interval ends inside the lobe around 3π
        (6, 6): lambda: full + h(TWO_PI - a - d) - h(TWO_PI - a),
        (6, 1): lambda: full - h(a + d - TWO_PI) - h(TWO_PI - a),
        (6, 2): lambda: half - h(TWO_PI - a),
        (6, 3): lambda: h(3.0 * PI - a - d) - h(TWO_PI - a),
    }
    return cases[(za, zb)](), label


def _saturated(a: float, d: float, width: float, lam: float) -> Tuple[float, str]:
    b = a + d
    ha, hb = _half(a), _half(b)
    label = f"H{ha}H{hb}"
    # ∫_b^{a+π} |sin x| dx
    abs_sin = {
        (1, 1): lambda: 2.0 + math.cos(b) - math.cos(a),
        (1, 2): lambda: -math.cos(b) - math.cos(a),
        (2, 2): lambda: 2.0 - math.cos(b) + math.cos(a),
        (2, 1): lambda: math.cos(b) + math.cos(a),
    }[(ha, hb)]()
    return width * (PI - d) - lam * abs_sin, label


BLOCKING_BRANCHES = tuple(
    [f"Z{a}Z{b}" for a in range(1, 7) for b in (a, a % 6 + 1, (a + 1) % 6 + 1, (a + 2) % 6 + 1)]
    + ["H1H1", "H1H2", "H2H2", "H2H1"]
)


def blocking_f_branch(lam: float, theta: float, delta_xi: float, r_max: float) -> Tuple[float, str]:
    """
    Line measure of whole-edge detections of an edge of length λ that follows a
    concave vertex whose previous edge turns by δξ = γ - π, together with the label
    of the closed-form branch used.

    The directions that see the edge face on form [-θ, π - θ); the previous edge hides
    the first δξ of them. The branch is chosen by the zones holding -θ and δξ - θ:
    lobes of half-width η around 0, π, 2π, or half-circles when r_max|sin θ| ≥ λ.
    """
    if not 0.0 < delta_xi < PI:
        raise ShapeFactoryError(f"delta_xi must lie in (0, π), got {delta_xi}", error_type="INVALID_ARGUMENT")
    width = r_max * abs(math.sin(theta))
    if width == 0.0:
        return 0.0, "EMPTY_STRIP"
    a = modone(-theta)
    if width >= lam:
        value, label = _saturated(a, delta_xi, width, lam)
    else:
        value, label = _unsaturated(a, delta_xi, width, lam, eta(lam, theta, r_max))
    return max(0.0, value), label


def blocking_f(lam: float, theta: float, delta_xi: float, r_max: float) -> float:
    return blocking_f_branch(lam, theta, delta_xi, r_max)[0]


def blocking_f_numeric(lam: float, theta: float, delta_xi: float, r_max: float) -> float:
    """Adaptive quadrature of the same integral, used as an oracle."""
    width = r_max * abs(math.sin(theta))
    if width == 0.0:
        return 0.0
    a = modone(-theta)
    lo, hi = a + delta_xi, a + PI
    integrand: Callable[[float], float] = lambda x: max(0.0, width - lam * abs(math.sin(x)))  # noqa: E731

    e = eta(lam, theta, r_max)
    kinks = []
    for k in range(0, 4):
        for p in (k * PI - e, k * PI, k * PI + e):
            if lo < p < hi:
                kinks.append(p)
    value, _ = integrate.quad(integrand, lo, hi, points=sorted(kinks) or None, epsabs=1e-12, epsrel=1e-12, limit=200)
    return value


def q_d_edge_concave(lam: float, theta: float, delta_xi: float, arena: ArenaParams) -> float:
    return blocking_f(lam, theta, delta_xi, arena.r_max) / arena.line_measure(theta)


def expected_detectors_edge_concave(
    lam: float, thetas: Iterable[float], delta_xi: float, arena: ArenaParams
) -> float:
    return sum(q_d_edge_concave(lam, th, delta_xi, arena) for th in thetas)
