from pathlib import Path

from shape_sensing_factory.factory.dagster_factory import DagsterFactory

# dagster dev -f workspace/definitions.py
defs = DagsterFactory(base_dir=Path(__file__).parent).build_definitions()
