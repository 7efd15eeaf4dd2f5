import math
import unittest

import numpy as np

from shape_sensing_factory.sensing.angles import circular_mean, exterior_turn, inner_angle, mod_interval_contains, modone
from shape_sensing_factory.sensing.geometry import (
    detection_region_contains,
    point_in_polygon,
    polygon_from_vertices,
    ray_cast,
    ray_cast_edge,
    ray_cast_many,
    transform_polygon,
)
from shape_sensing_factory.sensing.monte_carlo import l_shape
from shape_sensing_factory.utils.exceptions import ShapeFactoryError

UNIT_SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]


class TestAngles(unittest.TestCase):
    def test_modone(self):
        self.assertEqual(modone(0.0), 0.0)
        self.assertAlmostEqual(modone(-math.pi / 2), 3 * math.pi / 2, places=12)
        self.assertAlmostEqual(modone(4.5 * math.pi), 0.5 * math.pi, places=12)
        self.assertLess(modone(-1e-300), 2 * math.pi)

    def test_mod_interval_contains(self):
        self.assertTrue(mod_interval_contains(0.1, 0.0, math.pi))
        self.assertTrue(mod_interval_contains(0.1, 3 * math.pi / 2, 5 * math.pi / 2))
        self.assertFalse(mod_interval_contains(math.pi, 0.0, math.pi))

    def test_inner_angle(self):
        self.assertAlmostEqual(inner_angle(0.0, math.pi / 2), math.pi / 2, places=12)
        self.assertAlmostEqual(inner_angle(0.0, math.pi / 4), 3 * math.pi / 4, places=12)
        self.assertAlmostEqual(inner_angle(0.0, 3 * math.pi / 2), 3 * math.pi / 2, places=12)

    def test_inner_angle_rejects_straight_vertex(self):
        with self.assertRaises(ShapeFactoryError) as ctx:
            inner_angle(0.0, 0.0)
        self.assertEqual(ctx.exception.error_type, "DEGENERATE_VERTEX")

    def test_circular_mean_wraps(self):
        self.assertAlmostEqual(circular_mean([0.2, 2 * math.pi - 0.4]), 2 * math.pi - 0.1, places=9)
        with self.assertRaises(ShapeFactoryError):
            circular_mean([])


class TestPolygon(unittest.TestCase):
    def test_edges_and_angles(self):
        poly = polygon_from_vertices(UNIT_SQUARE, name="unit")
        self.assertEqual(poly.n_e, 4)
        self.assertAlmostEqual(poly.perimeter, 4.0)
        for e in poly.edges:
            self.assertAlmostEqual(e.length, math.hypot(*e.vector), places=12)
            self.assertAlmostEqual(e.xi, modone(math.atan2(e.vector[1], e.vector[0])), places=12)
        for g in poly.inner_angles:
            self.assertAlmostEqual(g, math.pi / 2, places=12)

    def test_exterior_turns_close_for_concave(self):
        poly = l_shape(50.0)
        turns = sum(exterior_turn(g) for g in poly.inner_angles)
        self.assertAlmostEqual(turns, 2 * math.pi, places=9)
        self.assertEqual(sum(1 for g in poly.inner_angles if g > math.pi), 1)

    def test_closed_ring_is_accepted(self):
        poly = polygon_from_vertices(UNIT_SQUARE + [(0, 0)])
        self.assertEqual(poly.n_e, 4)

    def test_clockwise_rejected(self):
        with self.assertRaises(ShapeFactoryError) as ctx:
            polygon_from_vertices(list(reversed(UNIT_SQUARE)))
        self.assertEqual(ctx.exception.error_type, "INVALID_POLYGON")

    def test_self_intersecting_rejected(self):
        with self.assertRaises(ShapeFactoryError) as ctx:
            polygon_from_vertices([(0, 0), (2, 0), (2, 2), (1, -1), (0, 2)])
        self.assertEqual(ctx.exception.error_type, "INVALID_POLYGON")

    def test_straight_vertex_rejected(self):
        with self.assertRaises(ShapeFactoryError) as ctx:
            polygon_from_vertices([(0, 0), (1, 0), (2, 0), (2, 1), (0, 1)])
        self.assertEqual(ctx.exception.error_type, "DEGENERATE_VERTEX")

    def test_too_few_vertices(self):
        with self.assertRaises(ShapeFactoryError):
            polygon_from_vertices([(0, 0), (1, 0)])

    def test_transform_keeps_shape(self):
        poly = l_shape(10.0)
        moved = transform_polygon(poly, scale=3.0, rotation=0.7, translation=(5.0, -2.0))
        for a, b in zip(poly.lengths, moved.lengths):
            self.assertAlmostEqual(3.0 * a, b, places=9)
        for a, b in zip(poly.inner_angles, moved.inner_angles):
            self.assertAlmostEqual(a, b, places=9)


class TestRayCast(unittest.TestCase):
    def setUp(self):
        self.square = polygon_from_vertices(UNIT_SQUARE)

    def test_axis_aligned_hit(self):
        self.assertAlmostEqual(ray_cast((-1.0, 0.5), 0.0, self.square), 1.0, places=12)

    def test_inside_is_zero(self):
        for direction in (0.0, 1.0, 2.5, 4.0):
            self.assertEqual(ray_cast((0.5, 0.5), direction, self.square), 0.0)
        self.assertTrue(point_in_polygon((1.0, 0.5), self.square))

    def test_miss(self):
        self.assertIsNone(ray_cast((2.0, 2.0), 0.0, self.square))

    def test_edge_index(self):
        s, j = ray_cast_edge((0.5, -2.0), math.pi / 2, self.square)
        self.assertAlmostEqual(s, 2.0)
        self.assertEqual(j, 0)

    def test_vectorised_matches_scalar(self):
        rng = np.random.default_rng(7)
        poly = l_shape(1.0)
        points = rng.uniform(-3, 3, size=(500, 2))
        direction = 0.9
        dist, _ = ray_cast_many(points, direction, poly)
        for p, d in zip(points, dist):
            s = ray_cast((float(p[0]), float(p[1])), direction, poly)
            if s is None:
                self.assertTrue(math.isinf(d))
            else:
                self.assertAlmostEqual(s, float(d), places=9)


class TestDetectionRegion(unittest.TestCase):
    def setUp(self):
        self.square = polygon_from_vertices(UNIT_SQUARE)
        self.bottom = self.square.edges[0]

    def test_examples(self):
        self.assertTrue(detection_region_contains((0.5, -0.5), math.pi / 2, 1.0, self.bottom, self.square))
        self.assertFalse(detection_region_contains((0.5, -2.0), math.pi / 2, 1.0, self.bottom, self.square))
        self.assertFalse(detection_region_contains((2.0, -0.5), math.pi / 2, 1.0, self.bottom, self.square))

    def test_parallelogram_matches_ray_cast(self):
        rng = np.random.default_rng(11)
        poly = l_shape(1.0)
        r_max = 0.8
        for _ in range(10000):
            p = (float(rng.uniform(-2.5, 2.5)), float(rng.uniform(-2.5, 2.5)))
            beam = float(rng.uniform(0, 2 * math.pi))
            s, hit_edge = ray_cast_edge(p, beam, poly)
            for j, edge in enumerate(poly.edges):
                expected = s is not None and s > 0 and s <= r_max and hit_edge == j
                self.assertEqual(detection_region_contains(p, beam, r_max, edge, poly), expected)


if __name__ == "__main__":
    unittest.main()
