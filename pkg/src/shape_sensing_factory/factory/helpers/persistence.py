"""
JSON and JSONL files exchanged between stages.

Keys are sorted and floats keep their repr, so equal inputs give byte-identical
files.
"""
import json
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Tuple

from shape_sensing_factory.models.observations import ObservationSet
from shape_sensing_factory.models.trace import TraceSample
from shape_sensing_factory.utils.exceptions import ShapeFactoryError

TRACES_FILE = "traces.jsonl"
OBSERVATIONS_FILE = "observations.jsonl"
KNOWN_PARAMS_FILE = "known_params.json"
REPORT_FILE = "report.json"
REPORT_TEXT_FILE = "report.txt"
SHAPE_FILE = "shape.svg"
VALIDATION_CSV = "validate_prob.csv"
VALIDATION_SVG = "validate_prob.svg"


def _dumps(record: Any) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def write_json(path: Path, data: Any) -> str:
    with open(path, "w") as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")
    return str(path)


def read_json(path: Path) -> Any:
    try:
        with open(path) as f:
            return json.load(f)
    except FileNotFoundError:
        raise ShapeFactoryError("file not found", file_name=str(path), error_type="PARSE_ERROR")
    except json.JSONDecodeError as e:
        raise ShapeFactoryError(f"line {e.lineno}: {e.msg}", file_name=str(path), error_type="PARSE_ERROR")


def write_jsonl(path: Path, records: Iterable[Dict[str, Any]]) -> int:
    n = 0
    with open(path, "w") as f:
        for record in records:
            f.write(_dumps(record))
            f.write("\n")
            n += 1
    return n


def iter_jsonl(path: Path) -> Iterator[Tuple[int, Dict[str, Any]]]:
    """(line number, record) pairs; blank lines are skipped, malformed ones name their line."""
    try:
        f = open(path)
    except FileNotFoundError:
        raise ShapeFactoryError("file not found", file_name=str(path), error_type="PARSE_ERROR")
    with f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise ShapeFactoryError(f"line {lineno}: {e.msg}", file_name=str(path), error_type="PARSE_ERROR")
            if not isinstance(record, dict):
                raise ShapeFactoryError(f"line {lineno}: expected a JSON object", file_name=str(path), error_type="PARSE_ERROR")
            yield lineno, record


def write_traces(path: Path, traces: Iterable[List[TraceSample]]) -> int:
    return write_jsonl(path, (s.to_dict() for samples in traces for s in samples))


def read_traces(path: Path) -> Dict[int, List[TraceSample]]:
    """Samples grouped by sensor id, in file order within a sensor."""
    out: Dict[int, List[TraceSample]] = {}
    for lineno, record in iter_jsonl(path):
        try:
            sample = TraceSample.from_dict(record)
        except (KeyError, TypeError, ValueError) as e:
            raise ShapeFactoryError(f"line {lineno}: malformed trace sample ({e})", file_name=str(path), error_type="PARSE_ERROR")
        out.setdefault(sample.sensor_id, []).append(sample)
    return out


def write_observations(path: Path, observations: ObservationSet) -> int:
    return write_jsonl(path, observations.records())


def read_observations(path: Path) -> ObservationSet:
    obs = ObservationSet()
    for lineno, record in iter_jsonl(path):
        try:
            obs.extend(ObservationSet.from_records([record]))
        except ShapeFactoryError as e:
            detail = e.message.split(": ", 1)[-1]
            raise ShapeFactoryError(f"line {lineno}: {detail}", file_name=str(path), error_type="PARSE_ERROR")
    return obs
