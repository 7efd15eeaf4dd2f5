"""Errors and the per-sensor worker pool."""

import pkgutil

__path__ = pkgutil.extend_path(__path__, __name__)
