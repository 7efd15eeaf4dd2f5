import json
import math
import os
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

from shape_sensing_factory.configs.enums import LineMode
from shape_sensing_factory.configs.scenario import ScenarioConfig
from shape_sensing_factory.factory.helpers.config_loaders import (
    _deep_merge,
    load_env_config,
    load_known_params,
    load_scenario,
    load_yaml,
    scenario_from_dict,
)
from shape_sensing_factory.utils.exceptions import ShapeFactoryError

SQUARE = [[-25, -25], [25, -25], [25, 25], [-25, 25]]


class TestDeepMerge(unittest.TestCase):
    def test_nested_override(self):
        base = {"a": 1, "tolerances": {"estimator": {"k_max": 12, "min_support": None}}}
        _deep_merge(base, {"tolerances": {"estimator": {"min_support": 5}}, "b": 2})
        self.assertEqual(base, {"a": 1, "b": 2, "tolerances": {"estimator": {"k_max": 12, "min_support": 5}}})

    def test_lists_are_replaced(self):
        self.assertEqual(_deep_merge({"thetas": [1.0, 2.0]}, {"thetas": [3.0]}), {"thetas": [3.0]})


class TestYamlFiles(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)
        (self.root / "defs").mkdir()
        (self.root / "vars").mkdir()

    def tearDown(self):
        self.tmp.cleanup()

    def _write(self, rel: str, text: str) -> Path:
        path = self.root / rel
        path.write_text(text)
        return path

    def test_syntax_error_names_line(self):
        path = self._write("defs/bad.yaml", "name: x\npolygon: [[0, 0], [1, 0]\n")
        with self.assertRaises(ShapeFactoryError) as ctx:
            load_yaml(path)
        self.assertEqual(ctx.exception.error_type, "CONFIG_ERROR")
        self.assertIn("line", str(ctx.exception))
        self.assertEqual(ctx.exception.file_name, str(path))

    def test_missing_and_non_mapping(self):
        with self.assertRaises(ShapeFactoryError):
            load_yaml(self.root / "nope.yaml")
        with self.assertRaises(ShapeFactoryError):
            load_yaml(self._write("defs/list.yaml", "- 1\n- 2\n"))
        self.assertEqual(load_yaml(self._write("defs/empty.yaml", "")), {})

    def test_env_layering(self):
        self._write("vars/common.yaml", "defaults:\n  n_s: 100\n  seed: 1\n")
        self._write("vars/prod.yaml", "defaults:\n  n_s: 900\n")
        with patch.dict(os.environ, {"ENV": "prod"}):
            merged = load_env_config(self.root / "vars")
        self.assertEqual(merged, {"defaults": {"n_s": 900, "seed": 1}})
        with patch.dict(os.environ, {"ENV": "qa"}):
            self.assertEqual(load_env_config(self.root / "vars"), {"defaults": {"n_s": 100, "seed": 1}})

    def test_scenario_defaults_then_file_then_overrides(self):
        self._write("vars/common.yaml", "defaults:\n  n_s: 100\n  seed: 1\n  r_max: 80\n")
        path = self._write("defs/square.yaml", f"name: square\nn_s: 50\npolygon: {json.dumps(SQUARE)}\n")
        with patch.dict(os.environ, {"ENV": "dev"}):
            scenario = load_scenario(path, overrides={"seed": 9, "line_mode": None})
        self.assertEqual(scenario.n_s, 50)
        self.assertEqual(scenario.seed, 9)
        self.assertEqual(scenario.r_max, 80.0)
        self.assertEqual(scenario.line_mode, LineMode.MONITOR_OMEGA)

    def test_unknown_key_is_config_error(self):
        path = self._write("defs/typo.yaml", f"name: t\nn_sensors: 5\npolygon: {json.dumps(SQUARE)}\n")
        with self.assertRaises(ShapeFactoryError) as ctx:
            load_scenario(path)
        self.assertEqual(ctx.exception.error_type, "CONFIG_ERROR")
        self.assertIn("n_sensors", ctx.exception.message)

    def test_known_params_json(self):
        path = self.root / "known.json"
        path.write_text(json.dumps({"r_max": 100, "L_omega": 1256.6, "sensors": [{"id": 0, "theta": 1.5, "v": 1}]}))
        knowns = load_known_params(path)
        self.assertEqual(knowns.by_id()[0].theta, 1.5)
        path.write_text(json.dumps({"r_max": 100, "L_omega": 1256.6, "sensors": [], "phi": [0.1]}))
        with self.assertRaises(ShapeFactoryError):
            load_known_params(path)


class TestScenarioModel(unittest.TestCase):
    def test_scalars_become_lists(self):
        scenario = scenario_from_dict({"polygon": SQUARE, "thetas": 1.2, "speeds": 2})
        self.assertEqual(scenario.thetas, [1.2])
        self.assertEqual(scenario.speed_for(7), 2.0)

    def test_cycled_sensor_parameters(self):
        scenario = ScenarioConfig(polygon=SQUARE, n_s=5, thetas=[1.0, 2.0])
        self.assertEqual(scenario.sensor_thetas(), [1.0, 2.0, 1.0, 2.0, 1.0])
        self.assertAlmostEqual(scenario.omega_perimeter, 400.0 * math.pi)

    def test_vertex_outside_disk(self):
        with self.assertRaises(ShapeFactoryError):
            scenario_from_dict({"polygon": [[0, 0], [300, 0], [0, 10]]})

    def test_hash_is_stable(self):
        a = ScenarioConfig(polygon=SQUARE, seed=3)
        b = ScenarioConfig(polygon=SQUARE, seed=3)
        self.assertEqual(a.config_hash(), b.config_hash())
        self.assertNotEqual(a.config_hash(), a.model_copy(update={"seed": 4}).config_hash())


if __name__ == "__main__":
    unittest.main()
