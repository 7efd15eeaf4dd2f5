"""Angle arithmetic under mod 2π."""
import math

from shape_sensing_factory.utils.exceptions import ShapeFactoryError

TWO_PI = 2.0 * math.pi
DEGENERATE_ANGLE_EPS = 1e-12


def modone(t: float) -> float:
    """Reduce an angle to [0, 2π)."""
    r = math.fmod(t, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    # fmod of a tiny negative number lands exactly on 2π after the shift
    if r >= TWO_PI:
        r = 0.0
    return r


def mod_interval_contains(t: float, t1: float, t2: float) -> bool:
    """True iff t lies in the half-open interval [t1, t2) taken mod 2π."""
    return modone(t - t1) < t2 - t1


def inner_angle(xi_j: float, xi_j1: float) -> float:
    """Inner angle at the vertex where edge j (direction xi_j) meets edge j+1."""
    gamma = modone(math.pi - xi_j1 + xi_j)
    if (
        gamma < DEGENERATE_ANGLE_EPS
        or abs(gamma - math.pi) < DEGENERATE_ANGLE_EPS
        or TWO_PI - gamma < DEGENERATE_ANGLE_EPS
    ):
        raise ShapeFactoryError(
            f"vertex between directions {xi_j:.12g} and {xi_j1:.12g} is straight or folded",
            error_type="DEGENERATE_VERTEX",
        )
    return gamma


def is_concave(gamma: float) -> bool:
    return gamma > math.pi


def exterior_turn(gamma: float) -> float:
    """Signed turn π − γ taken at a vertex; negative at concave vertices."""
    return math.pi - gamma


def circular_mean(values) -> float:
    """Mean direction of angles, reduced to [0, 2π)."""
    values = list(values)
    if not values:
        raise ShapeFactoryError("circular mean of no angles", error_type="EMPTY_CLASS")
    s = sum(math.sin(v) for v in values)
    c = sum(math.cos(v) for v in values)
    return modone(math.atan2(s, c))
