import tempfile
import threading
import time
import unittest
from pathlib import Path
from unittest.mock import patch

from shape_sensing_factory.factory.helpers.persistence import (
    read_json,
    read_observations,
    read_traces,
    write_json,
    write_observations,
    write_traces,
)
from shape_sensing_factory.factory.helpers.stats import count_by_kind, generate_stage_stats
from shape_sensing_factory.models.manifest import RunManifest
from shape_sensing_factory.models.observations import ObservationSet, VertexObservation, WholeEdgeObservation
from shape_sensing_factory.models.trace import TraceSample
from shape_sensing_factory.utils.exceptions import ShapeFactoryError
from shape_sensing_factory.utils.streaming import default_workers, execute_streaming


class TestFiles(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_traces_grouped_by_sensor(self):
        path = self.root / "traces.jsonl"
        n = write_traces(path, [[TraceSample(0, 0.0, None), TraceSample(0, 1.0, 2.5)], [TraceSample(1, 0.0, 7.0)]])
        self.assertEqual(n, 3)
        self.assertEqual(path.read_text().splitlines()[0], '{"r":null,"sensor":0,"t":0.0}')
        traces = read_traces(path)
        self.assertEqual(sorted(traces), [0, 1])
        self.assertIsNone(traces[0][0].r)
        self.assertEqual(traces[0][1].r, 2.5)

    def test_malformed_line_is_named(self):
        path = self.root / "traces.jsonl"
        path.write_text('{"sensor": 0, "t": 0.0, "r": 1.0}\n\n{"sensor": 0, "t": 1.0\n')
        with self.assertRaises(ShapeFactoryError) as ctx:
            read_traces(path)
        self.assertEqual(ctx.exception.error_type, "PARSE_ERROR")
        self.assertIn("line 3", ctx.exception.message)

        path.write_text('{"sensor": 0, "t": 0.0}\n')
        with self.assertRaises(ShapeFactoryError) as ctx:
            read_traces(path)
        self.assertIn("line 1", ctx.exception.message)

    def test_observations_file(self):
        path = self.root / "observations.jsonl"
        obs = ObservationSet(edges=[WholeEdgeObservation(0, 0, 3.0, 0.1)], vertices=[VertexObservation(0, 0, 0.1, 0.2)])
        write_observations(path, obs)
        again = read_observations(path)
        self.assertEqual(again.records(), obs.records())

        path.write_text('{"kind": "edge", "sensor": 0, "k": 0, "l_d": 1.0, "s_d": 0.0}\n{"kind": "bend", "sensor": 0, "k": 1}\n')
        with self.assertRaises(ShapeFactoryError) as ctx:
            read_observations(path)
        self.assertIn("line 2", ctx.exception.message)

    def test_json(self):
        path = self.root / "x.json"
        write_json(path, {"b": 1, "a": [1.5]})
        self.assertEqual(read_json(path), {"a": [1.5], "b": 1})
        with self.assertRaises(ShapeFactoryError):
            read_json(self.root / "missing.json")

    def test_manifest_round_trip(self):
        manifest = RunManifest(command="simulate", seed=4, options={"workers": 2}).finish()
        path = manifest.write(str(self.root))
        self.assertTrue(path.endswith("simulate.manifest.json"))
        again = RunManifest.read(path)
        self.assertEqual(again.seed, 4)
        self.assertGreaterEqual(again.duration_seconds, 0.0)


class TestStats(unittest.TestCase):
    def test_stage_stats(self):
        stats = generate_stage_stats(10, 2.0, samples=55)
        self.assertEqual(stats["sensors"], 10)
        self.assertEqual(stats["samples"], 55)
        self.assertEqual(stats["throughput"], "5.0 sensors/s")
        self.assertEqual(generate_stage_stats(3, 0.0)["throughput"], "-")

    def test_count_by_kind(self):
        self.assertEqual(count_by_kind([{"kind": "edge"}, {"kind": "edge"}, {"kind": "vertex"}]), {"edge": 2, "vertex": 1})


class TestStreaming(unittest.TestCase):
    def test_results_in_key_order(self):
        def slow_square(i):
            time.sleep(0.001 * (10 - i))
            return i * i

        self.assertEqual(execute_streaming(range(10), slow_square, key=lambda i: i, num_workers=4), [i * i for i in range(10)])

    def test_same_result_for_any_worker_count(self):
        items = list(range(25))
        single = execute_streaming(items, lambda i: (i, i % 7), key=lambda i: i, num_workers=1)
        many = execute_streaming(reversed(items), lambda i: (i, i % 7), key=lambda i: i, num_workers=6)
        self.assertEqual(single, many)

    def test_uses_threads(self):
        seen = set()

        def record(i):
            seen.add(threading.current_thread().name)
            time.sleep(0.01)
            return i

        execute_streaming(range(8), record, key=lambda i: i, num_workers=3, name="pool")
        self.assertTrue(all(name.startswith("pool-Worker-") for name in seen))

    def test_worker_error_is_raised(self):
        def boom(i):
            if i == 3:
                raise ShapeFactoryError("bad sensor", error_type="INVALID_ARGUMENT")
            return i

        with self.assertRaises(ShapeFactoryError):
            execute_streaming(range(6), boom, key=lambda i: i, num_workers=2)

    def test_default_workers_from_env(self):
        with patch.dict("os.environ", {"SHAPE_FACTORY_WORKERS": "7"}):
            self.assertEqual(default_workers(), 7)
        with patch.dict("os.environ", {"SHAPE_FACTORY_WORKERS": "many"}):
            self.assertEqual(default_workers(), 4)


if __name__ == "__main__":
    unittest.main()
