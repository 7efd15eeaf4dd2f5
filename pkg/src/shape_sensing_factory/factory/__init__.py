"""Dagster definitions and stage orchestration built from scenario files."""

import pkgutil

__path__ = pkgutil.extend_path(__path__, __name__)
