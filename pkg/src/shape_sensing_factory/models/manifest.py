import json
import os
from dataclasses import dataclass, field
from importlib import metadata
from typing import Any, Dict, List, Optional

import pendulum

MANIFEST_SUFFIX = ".manifest.json"

_TRACKED_PACKAGES = ("shape-sensing-factory", "numpy", "scipy", "scikit-learn", "pandas", "pydantic", "dagster")


def _versions() -> Dict[str, str]:
    versions = {}
    for name in _TRACKED_PACKAGES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "unknown"
    return versions


@dataclass
class RunManifest:
    """
    Provenance of one command run. Written next to the outputs; the resolved
    scenario is stored so ``--from-manifest`` can replay the run.
    """

    command: str
    scenario_hash: Optional[str] = None
    seed: Optional[int] = None
    scenario: Optional[Dict[str, Any]] = None
    inputs: List[str] = field(default_factory=list)
    outputs: List[str] = field(default_factory=list)
    options: Dict[str, Any] = field(default_factory=dict)
    versions: Dict[str, str] = field(default_factory=_versions)
    started_at: str = field(default_factory=lambda: pendulum.now("UTC").to_iso8601_string())
    finished_at: Optional[str] = None

    def finish(self) -> "RunManifest":
        self.finished_at = pendulum.now("UTC").to_iso8601_string()
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "scenario_hash": self.scenario_hash,
            "seed": self.seed,
            "scenario": self.scenario,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "options": self.options,
            "versions": self.versions,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
        }

    def write(self, out_dir: str) -> str:
        path = os.path.join(out_dir, f"{self.command}{MANIFEST_SUFFIX}")
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
        return path

    @classmethod
    def read(cls, path: str) -> "RunManifest":
        with open(path) as f:
            data = json.load(f)
        return cls(**data)

    @property
    def duration_seconds(self) -> Optional[float]:
        if not self.finished_at:
            return None
        return (pendulum.parse(self.finished_at) - pendulum.parse(self.started_at)).total_seconds()
