"""Config loading, persistence and stats helpers shared by the CLI and the asset factory."""

import pkgutil

__path__ = pkgutil.extend_path(__path__, __name__)
