import math
import unittest

from shape_sensing_factory.configs.tolerances import AssemblyConfig
from shape_sensing_factory.estimation.assembly import (
    angle_count_variants,
    assemble,
    canonical,
    closure_check,
    mirror,
)
from shape_sensing_factory.models.classes import AngleClass, LengthClass, VertexHypothesis
from shape_sensing_factory.utils.exceptions import ShapeFactoryError

# right triangle (0,0), (86.6,0), (0,50): length classes by size, angle classes by size
LENGTHS = (50.0, 86.60254037844386, 100.0)
ANGLES = (math.pi / 6, math.pi / 3, math.pi / 2)
# (angle class, edge before, edge after) in counterclockwise order
TRIANGLE_JOINTS = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


def _classes(lengths=LENGTHS, angles=ANGLES, counts=None):
    counts = counts or [1] * len(lengths)
    lc = [LengthClass(index=i, lambda_hat=v, count_hat=n) for i, (v, n) in enumerate(zip(lengths, counts))]
    ac = [AngleClass(index=i, gamma_hat=g, count_hat=1) for i, g in enumerate(angles)]
    return lc, ac


def _hyps(joints, support=10):
    return [VertexHypothesis(a, left, right, support) for a, left, right in joints]


class TestClosure(unittest.TestCase):
    def test_square_closes(self):
        closure, turn = closure_check([(1.0, math.pi / 2)] * 4)
        self.assertAlmostEqual(closure, 0.0, places=12)
        self.assertAlmostEqual(turn, 0.0, places=12)

    def test_open_chain(self):
        closure, turn = closure_check([(1.0, math.pi / 2)] * 3)
        self.assertAlmostEqual(closure, 1.0, places=12)
        self.assertAlmostEqual(turn, math.pi / 2, places=12)


class TestCycles(unittest.TestCase):
    def test_canonical_rotation(self):
        self.assertEqual(canonical(((2, 0), (0, 1), (1, 2))), ((0, 1), (1, 2), (2, 0)))

    def test_mirror_is_an_involution(self):
        cycle = ((0, 2), (1, 0), (2, 1), (1, 1))
        self.assertEqual(mirror(mirror(cycle)), cycle)
        self.assertNotEqual(mirror(cycle), cycle)

    def test_angle_count_variants(self):
        self.assertEqual(angle_count_variants({0: 2, 1: 1}, 3, 0), [{0: 2, 1: 1}])
        self.assertEqual(angle_count_variants({0: 2, 1: 1}, 4, 1), [{0: 3, 1: 1}, {0: 2, 1: 2}])
        self.assertEqual(angle_count_variants({0: 2, 1: 1}, 2, 1), [{0: 1, 1: 1}, {0: 2, 1: 0}])
        self.assertEqual(angle_count_variants({0: 2, 1: 1}, 5, 1), [])


class TestAssemble(unittest.TestCase):
    def test_right_triangle(self):
        lc, ac = _classes()
        shapes = assemble(lc, ac, _hyps(TRIANGLE_JOINTS), None)
        self.assertEqual(len(shapes), 1)
        shape = shapes[0]
        self.assertEqual(shape.length_classes, [0, 1, 2])
        self.assertEqual(shape.angle_classes, [2, 0, 1])
        self.assertAlmostEqual(shape.closure_residual, 0.0, places=9)
        self.assertEqual(shape.support, 30)
        self.assertFalse(shape.mirror_ambiguous)
        self.assertAlmostEqual(shape.perimeter, sum(LENGTHS))
        # 50 along +x, then 86.6 straight up
        last = shape.vertices()[-1]
        self.assertAlmostEqual(last[0], 50.0, places=9)
        self.assertAlmostEqual(last[1], LENGTHS[1], places=9)

    def test_equal_support_for_mirror_image(self):
        mirrored = ((0, 2, 1), (1, 0, 2), (2, 1, 0))
        lc, ac = _classes()
        shapes = assemble(lc, ac, _hyps(TRIANGLE_JOINTS + mirrored), None)
        self.assertEqual(len(shapes), 1)
        self.assertTrue(shapes[0].mirror_ambiguous)

    def test_square_from_one_class(self):
        lc, ac = _classes(lengths=(40.0,), angles=(math.pi / 2,), counts=[4])
        ac[0].count_hat = 4
        shapes = assemble(lc, ac, _hyps([(0, 0, 0)]), None)
        self.assertEqual(len(shapes), 1)
        self.assertEqual(shapes[0].n_e, 4)
        self.assertAlmostEqual(shapes[0].closure_residual, 0.0, places=9)

    def test_one_sided_hypotheses_need_loose_pass(self):
        lc, ac = _classes()
        one_sided = [VertexHypothesis(a, left, None, 5) for a, left, _ in TRIANGLE_JOINTS]
        shapes = assemble(lc, ac, one_sided, None)
        self.assertTrue(shapes)
        self.assertAlmostEqual(shapes[0].closure_residual, 0.0, places=9)

    def test_sharp_vertex_without_hypothesis(self):
        lc, ac = _classes()
        # nothing places the π/6 class
        shapes = assemble(lc, ac, _hyps(TRIANGLE_JOINTS[1:]), None)
        self.assertTrue(shapes)
        self.assertAlmostEqual(shapes[0].closure_residual, 0.0, places=9)
        self.assertEqual(sorted(shapes[0].angle_classes), [0, 1, 2])

    def test_no_hypotheses_at_all(self):
        lc, ac = _classes()
        shapes = assemble(lc, ac, [], None)
        self.assertEqual(len(shapes), 1)
        self.assertAlmostEqual(shapes[0].closure_residual, 0.0, places=9)
        self.assertAlmostEqual(shapes[0].perimeter, sum(LENGTHS))

    def test_too_few_edges(self):
        lc, ac = _classes(lengths=(50.0, 80.0), angles=(1.0, 2.0))
        with self.assertRaises(ShapeFactoryError) as ctx:
            assemble(lc, ac, [], None)
        self.assertEqual(ctx.exception.error_type, "INFEASIBLE_ARRANGEMENT")

    def test_edge_limit(self):
        lc, ac = _classes(lengths=(10.0,), angles=(math.pi / 2,), counts=[20])
        with self.assertRaises(ShapeFactoryError) as ctx:
            assemble(lc, ac, [], None, AssemblyConfig(max_edges=12))
        self.assertEqual(ctx.exception.error_type, "SEARCH_LIMIT")

    def test_vertex_count_mismatch(self):
        lc, ac = _classes(lengths=(40.0,), angles=(math.pi / 2,), counts=[6])
        with self.assertRaises(ShapeFactoryError) as ctx:
            assemble(lc, ac, _hyps([(0, 0, 0)]), None)
        self.assertEqual(ctx.exception.error_type, "INFEASIBLE_ARRANGEMENT")

    def test_no_closed_cycle(self):
        # the angles cannot turn a full circle
        lc, ac = _classes(angles=(0.5, 1.0, 1.2))
        joints = TRIANGLE_JOINTS
        with self.assertRaises(ShapeFactoryError) as ctx:
            assemble(lc, ac, _hyps(joints), None)
        self.assertEqual(ctx.exception.error_type, "INFEASIBLE_ARRANGEMENT")

    def test_rejected_classes_ignored(self):
        lc, ac = _classes()
        lc.append(LengthClass(index=3, lambda_hat=7.0, count_hat=1, rejected=True))
        shapes = assemble(lc, ac, _hyps(TRIANGLE_JOINTS), None)
        self.assertNotIn(3, shapes[0].length_classes)


if __name__ == "__main__":
    unittest.main()
