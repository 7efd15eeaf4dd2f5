"""Pydantic configuration models for scenarios, thresholds and stages."""

import pkgutil

__path__ = pkgutil.extend_path(__path__, __name__)
