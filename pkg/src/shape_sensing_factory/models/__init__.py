"""Value types exchanged between the simulation, analysis and estimation parts."""

import pkgutil

__path__ = pkgutil.extend_path(__path__, __name__)
