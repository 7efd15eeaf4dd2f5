import math
import unittest

import numpy as np

from shape_sensing_factory.sensing.geom_prob import (
    BLOCKING_BRANCHES,
    ArenaParams,
    blocking_f,
    blocking_f_branch,
    blocking_f_numeric,
    eta,
    expected_detectors_edge,
    q_d_edge,
    q_d_edge_concave,
    q_d_vertex,
    whole_edge_measure,
)
from shape_sensing_factory.utils.exceptions import ShapeFactoryError

ARENA = ArenaParams.disk(200.0, 100.0)


class TestArena(unittest.TestCase):
    def test_line_measure(self):
        self.assertAlmostEqual(ARENA.line_measure(math.pi / 2), 1000.0 * math.pi, places=9)
        self.assertAlmostEqual(ARENA.strip_width(math.pi / 6), 50.0, places=9)

    def test_invalid(self):
        with self.assertRaises(ShapeFactoryError):
            ArenaParams(L_omega=0.0, r_max=100.0)


class TestEdgeProbability(unittest.TestCase):
    def test_eta(self):
        self.assertEqual(eta(50.0, math.pi / 2, 100.0), math.pi / 2)
        self.assertAlmostEqual(eta(200.0, math.pi / 2, 100.0), math.pi / 6, places=12)
        with self.assertRaises(ShapeFactoryError):
            eta(0.0, math.pi / 2, 100.0)

    def test_saturated_value(self):
        # W = 100 ≥ λ = 50: 2(π/2)100 - 2·50 over 1000π
        self.assertAlmostEqual(q_d_edge(50.0, math.pi / 2, ARENA), (100.0 * math.pi - 100.0) / (1000.0 * math.pi))

    def test_bounds_and_monotonicity(self):
        previous = None
        for lam in np.linspace(1.0, 400.0, 60):
            q = q_d_edge(float(lam), math.pi / 3, ARENA)
            self.assertGreaterEqual(q, 0.0)
            self.assertLessEqual(q, 1.0)
            if previous is not None:
                self.assertLessEqual(q, previous + 1e-15)
            previous = q

    def test_parallel_beam_sees_nothing(self):
        self.assertEqual(whole_edge_measure(10.0, 0.0, 100.0), 0.0)

    def test_expected_count_sums_over_sensors(self):
        thetas = [math.pi / 2] * 10
        self.assertAlmostEqual(expected_detectors_edge(50.0, thetas, ARENA), 10 * q_d_edge(50.0, math.pi / 2, ARENA))


class TestVertexProbability(unittest.TestCase):
    def test_right_angle(self):
        self.assertAlmostEqual(q_d_vertex(math.pi / 2, math.pi / 2, ARENA), 0.05, places=12)

    def test_reflex_uses_exterior_opening(self):
        self.assertAlmostEqual(
            q_d_vertex(3 * math.pi / 2, math.pi / 3, ARENA), q_d_vertex(math.pi / 2, math.pi / 3, ARENA), places=15
        )

    def test_degenerate(self):
        for gamma in (0.0, math.pi, 2 * math.pi):
            with self.assertRaises(ShapeFactoryError) as ctx:
                q_d_vertex(gamma, math.pi / 2, ARENA)
            self.assertEqual(ctx.exception.error_type, "DEGENERATE_VERTEX")


class TestBlocking(unittest.TestCase):
    def test_branch_labels(self):
        self.assertEqual(len(BLOCKING_BRANCHES), 28)
        self.assertEqual(len(set(BLOCKING_BRANCHES)), 28)

    def test_no_blocking_is_whole_edge_measure(self):
        for lam, theta in ((50.0, 1.0), (300.0, 2.0), (120.0, 4.0)):
            self.assertAlmostEqual(
                blocking_f_numeric(lam, theta, 0.0, 100.0), whole_edge_measure(lam, theta, 100.0), delta=1e-8
            )

    def test_blocking_never_adds_detections(self):
        rng = np.random.default_rng(2)
        for _ in range(500):
            lam, theta, d = rng.uniform(1, 300), rng.uniform(0, 2 * math.pi), rng.uniform(0.01, math.pi - 0.01)
            self.assertLessEqual(blocking_f(lam, theta, d, 100.0), whole_edge_measure(lam, theta, 100.0) + 1e-9)
        self.assertLessEqual(
            q_d_edge_concave(50.0, 1.2, 0.7, ARENA),
            q_d_edge(50.0, 1.2, ARENA),
        )

    def test_invalid_turn(self):
        for d in (0.0, math.pi, -0.2):
            with self.assertRaises(ShapeFactoryError):
                blocking_f(50.0, 1.0, d, 100.0)

    def test_closed_form_matches_quadrature(self):
        rng = np.random.default_rng(17)
        r_max = 100.0
        half_width = 0.5
        seen = set()
        checked = 0
        while checked < 10000:
            a = rng.uniform(0.0, 2 * math.pi)
            d = rng.uniform(1e-3, math.pi - 1e-3)
            theta = 2 * math.pi - a
            width = r_max * abs(math.sin(theta))
            if width < 1e-2:
                continue
            if checked % 2:
                # lobes of half-width 0.5
                lam = width / math.sin(half_width)
            else:
                lam = width * rng.uniform(0.05, 1.0)
            value, label = blocking_f_branch(lam, theta, d, r_max)
            expected = blocking_f_numeric(lam, theta, d, r_max)
            self.assertAlmostEqual(value, expected, delta=1e-9, msg=label)
            seen.add(label)
            checked += 1
        self.assertEqual(seen, set(BLOCKING_BRANCHES))


if __name__ == "__main__":
    unittest.main()
