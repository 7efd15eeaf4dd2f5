import filecmp
import math
import os
import tempfile
import unittest
from pathlib import Path

import pytest

from shape_sensing_factory.configs.scenario import ScenarioConfig
from shape_sensing_factory.estimation.assembly import canonical, mirror
from shape_sensing_factory.factory.helpers.config_loaders import load_scenario
from shape_sensing_factory.operators.pipeline import run_pipeline, run_sweep

WORKSPACE = Path(__file__).resolve().parents[2] / "workspace"


def _scenario(name: str, **updates) -> ScenarioConfig:
    scenario = load_scenario(WORKSPACE / "defs" / f"{name}.yaml")
    return scenario.model_copy(update=updates) if updates else scenario


def _cycle_key(lengths, angles):
    """Edges as (length to the nearest 10, concave head vertex), up to rotation and reflection."""
    cycle = tuple((round(l / 10.0), g > math.pi) for l, g in zip(lengths, angles))
    return min(canonical(cycle), canonical(mirror(cycle)))


class PipelineCase(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.out = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def _report(self, scenario, analytic=True, sub="run"):
        return run_pipeline(scenario, os.path.join(self.out, sub), workers=4, analytic=analytic)["estimate"]["result"]


class TestRightTriangle(PipelineCase):
    def test_noise_free_exact_traces(self):
        report = self._report(_scenario("right_triangle", n_s=2000, seed=0))
        evaluation = report.evaluation
        self.assertFalse(evaluation["type_one_error"], evaluation["classes"])
        self.assertLess(evaluation["max_abs_relative_error"], 1e-6)
        self.assertEqual(evaluation["edge_count"], {"estimated": 3, "truth": 3})

        shape = report.best_shape
        self.assertIsNotNone(shape)
        self.assertEqual(shape.n_e, 3)
        self.assertLessEqual(shape.closure_residual, 0.02 * shape.perimeter)
        self.assertAlmostEqual(shape.perimeter, 50.0 + 50.0 * math.sqrt(3.0) + 100.0, delta=1e-4)
        self.assertAlmostEqual(sorted(shape.angles)[0], math.pi / 6, places=6)

    def test_sampled_traces_assemble(self):
        truth = sorted((50.0, 50.0 * math.sqrt(3.0), 100.0))
        for seed in (0, 1):
            report = self._report(_scenario("right_triangle", n_s=2000, seed=seed), analytic=False, sub=f"s{seed}")
            shape = report.best_shape
            self.assertIsNotNone(shape, report.diagnostics.get("assembly_error"))
            self.assertEqual(shape.n_e, 3)
            for got, want in zip(sorted(shape.lengths), truth):
                self.assertAlmostEqual(got, want, delta=0.01 * want)
            for got, want in zip(sorted(shape.angles), (math.pi / 6, math.pi / 3, math.pi / 2)):
                self.assertAlmostEqual(got, want, delta=0.03 * want)
            self.assertLessEqual(shape.closure_residual, 0.02 * shape.perimeter)

    @pytest.mark.slow
    def test_ten_seeds_sampled(self):
        runs, summary = run_sweep(_scenario("right_triangle"), range(10), [2000], self.out, workers=4)
        self.assertGreaterEqual(int(runs["type_one_success"].sum()), 8)
        lengths = summary[summary["kind"] == "lengths"]
        angles = summary[summary["kind"] == "angles"]
        self.assertEqual(len(lengths), 3)
        self.assertTrue((lengths["normalized_std"] < 0.01).all(), lengths)
        self.assertTrue((angles["normalized_std"] < 0.05).all(), angles)

    @pytest.mark.slow
    def test_slope_noise_and_report_loss(self):
        noisy = _scenario("right_triangle", epsilon_s=0.03, epsilon_l=0.002)
        runs, summary = run_sweep(noisy, range(10), [2000], self.out, workers=4)
        self.assertTrue(runs["type_one_success"].any())
        lengths = summary[summary["kind"] == "lengths"]
        self.assertTrue((lengths["bias"].abs() < 0.02).all(), lengths)


class TestBuildings(PipelineCase):
    def test_pentagon_classes(self):
        report = self._report(_scenario("building_a", n_s=2000, seed=1))
        lengths = sorted(report.accepted_length_classes, key=lambda c: c.lambda_hat)
        angles = sorted(report.accepted_angle_classes, key=lambda c: c.gamma_hat)
        self.assertEqual([c.count_hat for c in lengths], [2, 2, 1])
        self.assertEqual([c.count_hat for c in angles], [3, 2])
        for cls, truth in zip(lengths, (25.0, 100.0, 75.0 * math.sqrt(2.0))):
            self.assertAlmostEqual(cls.lambda_hat, truth, delta=1e-6 * truth)
        self.assertAlmostEqual(angles[1].gamma_hat, 3 * math.pi / 4, places=6)
        self.assertFalse(report.evaluation["type_one_error"])

    def test_concave_octagon(self):
        report = self._report(_scenario("building_b", n_s=2000, seed=2))
        angles = sorted(report.accepted_angle_classes, key=lambda c: c.gamma_hat)
        concave = [c for c in angles if c.concave]
        convex = [c for c in angles if not c.concave]
        self.assertEqual(len(concave), 1)
        self.assertLessEqual(abs(concave[0].gamma_hat - 1.5 * math.pi) / (1.5 * math.pi), 0.15)
        self.assertLessEqual(abs(convex[0].gamma_hat - math.pi / 2) / (math.pi / 2), 0.04)

        revised = report.diagnostics["concave_revised"]
        self.assertTrue(revised)
        for cls in report.length_classes:
            if cls.index in revised:
                self.assertGreaterEqual(cls.count_hat, cls.count_uncorrected)

    @pytest.mark.slow
    def test_pentagon_sampled(self):
        report = self._report(_scenario("building_a", n_s=5000, seed=0), analytic=False)
        evaluation = report.evaluation
        lengths = sorted(report.accepted_length_classes, key=lambda c: c.lambda_hat)
        self.assertEqual([c.count_hat for c in lengths], [2, 2, 1])
        angles = sorted(report.accepted_angle_classes, key=lambda c: c.gamma_hat)
        self.assertEqual([c.count_hat for c in angles], [3, 2])
        for row in evaluation["lengths"]:
            bound = 0.10 if row["truth"] < 30 else 0.04 if row["truth"] < 100 else 0.02
            self.assertLessEqual(abs(row["relative_error"]), bound, row)
        for row in evaluation["angles"]:
            self.assertLessEqual(abs(row["relative_error"]), 0.04, row)

    @pytest.mark.slow
    def test_concave_octagon_sampled(self):
        scenario = _scenario("building_b", n_s=2000, seed=0)
        report = self._report(scenario, analytic=False)
        lengths = sorted(report.accepted_length_classes, key=lambda c: c.lambda_hat)
        self.assertEqual([c.count_hat for c in lengths], [2, 6])
        self.assertTrue(report.diagnostics["concave_revised"])

        shape = report.best_shape
        self.assertIsNotNone(shape, report.diagnostics.get("assembly_error"))
        truth = scenario.target()
        self.assertEqual(_cycle_key(shape.lengths, shape.angles), _cycle_key(truth.lengths, truth.inner_angles))


class TestDeterminism(PipelineCase):
    FILES = ("traces.jsonl", "known_params.json", "observations.jsonl", "report.json", "report.txt", "shape.svg")

    def test_same_seed_same_bytes(self):
        scenario = _scenario("square", n_s=300, seed=7, epsilon_s=0.02, epsilon_l=0.01)
        run_pipeline(scenario, os.path.join(self.out, "a"), workers=1)
        run_pipeline(scenario, os.path.join(self.out, "b"), workers=4)
        for name in self.FILES:
            self.assertTrue(
                filecmp.cmp(os.path.join(self.out, "a", name), os.path.join(self.out, "b", name), shallow=False), name
            )

    def test_other_seed_other_traces(self):
        run_pipeline(_scenario("square", n_s=50, seed=1), os.path.join(self.out, "a"), workers=2)
        run_pipeline(_scenario("square", n_s=50, seed=2), os.path.join(self.out, "b"), workers=2)
        self.assertFalse(
            filecmp.cmp(os.path.join(self.out, "a", "traces.jsonl"), os.path.join(self.out, "b", "traces.jsonl"), shallow=False)
        )


if __name__ == "__main__":
    unittest.main()
