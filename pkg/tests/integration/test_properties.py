import math
import unittest

import numpy as np

from shape_sensing_factory.configs.enums import LineMode
from shape_sensing_factory.estimation.estimator import relative_direction, temp_length
from shape_sensing_factory.models.observations import WholeEdgeObservation
from shape_sensing_factory.sensing.analysis import segments_from_analytic
from shape_sensing_factory.sensing.geom_prob import ArenaParams, q_d_edge, q_d_edge_concave, q_d_vertex
from shape_sensing_factory.sensing.geometry import polygon_from_vertices, transform_polygon
from shape_sensing_factory.sensing.simulation import analytic_trace, place_sensor, sample_line

R, R_MAX = 200.0, 100.0
TRIANGLE = polygon_from_vertices([(0.0, 0.0), (86.60254037844386, 0.0), (0.0, 50.0)])
THETAS = (math.pi / 2, 1.0, 2.3)


def _lines(n, seed=11):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        theta = THETAS[i % len(THETAS)]
        phi, offset = sample_line(rng, LineMode.MONITOR_OMEGA, R, R_MAX, theta)
        out.append((i, theta, phi, offset))
    return out


def _segments(polygon, sensor_id, theta, phi, offset, scale=1.0):
    sensor = place_sensor(sensor_id, theta, 1.0, phi, offset * scale, R * scale, R_MAX * scale)
    return segments_from_analytic(analytic_trace(sensor, polygon, R_MAX * scale))


class TestInvariance(unittest.TestCase):
    def test_rotation_leaves_traces_unchanged(self):
        alpha = 0.7
        rotated = transform_polygon(TRIANGLE, rotation=alpha)
        seen = 0
        for i, theta, phi, offset in _lines(120):
            base = _segments(TRIANGLE, i, theta, phi, offset)
            turned = _segments(rotated, i, theta, phi + alpha, offset)
            self.assertEqual(len(base), len(turned))
            for a, b in zip(base, turned):
                self.assertAlmostEqual(a.t_s, b.t_s, places=6)
                self.assertAlmostEqual(a.t_e, b.t_e, places=6)
                self.assertAlmostEqual(a.s_d, b.s_d, places=6)
                self.assertEqual((a.start_event, a.end_event), (b.start_event, b.end_event))
            seen += len(base)
        self.assertGreater(seen, 0)

    def test_scaling_scales_lengths(self):
        c = 2.5
        scaled = transform_polygon(TRIANGLE, scale=c)
        whole = 0
        for i, theta, phi, offset in _lines(120, seed=12):
            base = _segments(TRIANGLE, i, theta, phi, offset)
            big = _segments(scaled, i, theta, phi, offset, scale=c)
            self.assertEqual(len(base), len(big))
            for a, b in zip(base, big):
                # time stretches by c, slopes stay
                self.assertAlmostEqual(b.l_d, c * a.l_d, places=5)
                self.assertAlmostEqual(a.s_d, b.s_d, places=6)
                if a.is_whole_edge:
                    whole += 1
                    small_len = temp_length(WholeEdgeObservation(i, a.k, a.l_d, a.s_d), 1.0, theta)
                    big_len = temp_length(WholeEdgeObservation(i, b.k, b.l_d, b.s_d), 1.0, theta)
                    self.assertAlmostEqual(big_len, c * small_len, places=5)
        self.assertGreater(whole, 0)


class TestNoiseFreeIdentities(unittest.TestCase):
    def test_edges_recovered_from_slope_and_duration(self):
        rng = np.random.default_rng(5)
        for _ in range(1000):
            theta = rng.uniform(0.1, math.pi - 0.1)
            v = rng.uniform(0.5, 2.0)
            lam = rng.uniform(5.0, 150.0)
            # the edge faces the beam: sin(θ - α) > 0
            alpha = theta - rng.uniform(0.05, math.pi - 0.05)
            s_d = v * math.sin(alpha) / math.sin(theta - alpha)
            l_d = lam * math.sin(theta - alpha) / (v * math.sin(theta))
            self.assertAlmostEqual(temp_length(WholeEdgeObservation(0, 0, l_d, s_d), v, theta), lam, delta=1e-9 * lam)
            diff = (relative_direction(s_d, theta, v) - alpha) % (2 * math.pi)
            self.assertLess(min(diff, 2 * math.pi - diff), 1e-9)


class TestBeamAngle(unittest.TestCase):
    def test_blocking_never_adds_detections(self):
        arena = ArenaParams.disk(R, R_MAX)
        for th in np.linspace(0.05, math.pi - 0.05, 40):
            for lam in (20.0, 50.0, 150.0):
                for d in (0.3, math.pi / 2, 2.8):
                    self.assertLessEqual(q_d_edge_concave(lam, th, d, arena), q_d_edge(lam, th, arena) + 1e-15)

    def test_detection_peaks_at_right_angle(self):
        arena = ArenaParams.disk(R, R_MAX)
        grid = np.linspace(0.0, math.pi, 65)
        edge = [q_d_edge(50.0, th, arena) for th in grid]
        vertex = [q_d_vertex(math.pi / 2, th, arena) for th in grid]
        self.assertEqual(int(np.argmax(edge)), 32)
        self.assertEqual(int(np.argmax(vertex)), 32)
        self.assertAlmostEqual(edge[0], 0.0)


if __name__ == "__main__":
    unittest.main()
