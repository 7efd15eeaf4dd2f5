"""Simulate mobile distance sensors around a hidden polygon and estimate its shape from their traces."""

import pkgutil

__path__ = pkgutil.extend_path(__path__, __name__)
