from typing import Dict, List, Optional, Type, TYPE_CHECKING

if TYPE_CHECKING:
    from shape_sensing_factory.operators.base_operator import StageOperator


class StageRegistry:
    """
    Central registry for pipeline stages.
    Maps a stage name (SIMULATE, ANALYZE, ...) -> StageOperator class.
    """

    _registry: Dict[str, Type["StageOperator"]] = {}

    @classmethod
    def register(cls, stage: str):
        """
        Decorator to register a stage operator.

        Usage:
            @StageRegistry.register("SIMULATE")
            class SimulateOperator(StageOperator): ...
        """

        def wrapper(operator_class: Type["StageOperator"]):
            cls._registry[stage.upper()] = operator_class
            operator_class.stage = stage.upper()
            return operator_class

        return wrapper

    @classmethod
    def get_operator(cls, stage: Optional[str]) -> Optional[Type["StageOperator"]]:
        if stage is None:
            return None
        return cls._registry.get(str(stage).upper())

    @classmethod
    def stages(cls) -> List[str]:
        return sorted(cls._registry)
