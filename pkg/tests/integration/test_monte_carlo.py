import math
import unittest

import pytest

from shape_sensing_factory.sensing.geom_prob import ArenaParams, q_d_edge, q_d_edge_concave, q_d_vertex
from shape_sensing_factory.sensing.monte_carlo import l_shape, square, tally_detections, within_sigma

R, R_MAX = 200.0, 100.0
ARENA = ArenaParams.disk(R, R_MAX)


@pytest.mark.slow
class TestClosedFormAgainstMonteCarlo(unittest.TestCase):
    def test_square_edge_and_corner(self):
        n = 200000
        tally = tally_detections(square(100.0), R_MAX, R, math.pi / 2, n, seed=1, edge_index=0, vertex_index=0)
        q_edge = q_d_edge(100.0, math.pi / 2, ARENA)
        q_vertex = q_d_vertex(math.pi / 2, math.pi / 2, ARENA)
        self.assertAlmostEqual(q_edge, 0.036338, places=6)
        self.assertAlmostEqual(q_vertex, 0.05, places=12)
        self.assertTrue(within_sigma(tally.edge_frequency, q_edge, n, 3.0), tally.edge_frequency)
        self.assertTrue(within_sigma(tally.vertex_frequency, q_vertex, n, 3.0), tally.vertex_frequency)

    def test_short_edge(self):
        n = 100000
        tally = tally_detections(square(50.0), R_MAX, R, math.pi / 2, n, seed=2, edge_index=0)
        q_edge = q_d_edge(50.0, math.pi / 2, ARENA)
        self.assertAlmostEqual(q_edge, 0.068169, places=6)
        self.assertIsNone(tally.vertex_hits)
        self.assertTrue(within_sigma(tally.edge_frequency, q_edge, n, 3.0), tally.edge_frequency)

    def test_concave_corner(self):
        n = 200000
        tally = tally_detections(l_shape(50.0), R_MAX, R, math.pi / 2, n, seed=4, vertex_index=2)
        q_vertex = q_d_vertex(3 * math.pi / 2, math.pi / 2, ARENA)
        self.assertAlmostEqual(q_vertex, 0.05, places=12)
        self.assertTrue(within_sigma(tally.vertex_frequency, q_vertex, n, 3.0), tally.vertex_frequency)

    def test_edge_after_concave_corner(self):
        n = 100000
        for seed, theta in ((3, 1.2), (5, math.pi / 2)):
            tally = tally_detections(l_shape(50.0), R_MAX, R, theta, n, seed=seed, edge_index=3)
            q_blocked = q_d_edge_concave(50.0, theta, math.pi / 2, ARENA)
            self.assertLess(q_blocked, q_d_edge(50.0, theta, ARENA))
            self.assertTrue(within_sigma(tally.edge_frequency, q_blocked, n, 3.0), (theta, tally.edge_frequency, q_blocked))


if __name__ == "__main__":
    unittest.main()
