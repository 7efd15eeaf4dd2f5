"""Stage operators; importing the package registers them."""

import pkgutil

__path__ = pkgutil.extend_path(__path__, __name__)

# Import operators here to ensure they register themselves
from shape_sensing_factory.operators.simulate import SimulateOperator
from shape_sensing_factory.operators.analyze import AnalyzeOperator
from shape_sensing_factory.operators.estimate import EstimateOperator
from shape_sensing_factory.operators.validate_prob import ValidateProbOperator

__all__ = [
    "SimulateOperator",
    "AnalyzeOperator",
    "EstimateOperator",
    "ValidateProbOperator",
]
