from enum import Enum


class LineMode(str, Enum):
    """
    How random sensor lines are placed relative to the monitored disk.

    THROUGH_OMEGA keeps every line inside the disk; MONITOR_OMEGA widens the offset
    range toward the sensing side so every line whose beam can reach the disk is
    drawn with the same density.
    """

    THROUGH_OMEGA = "THROUGH_OMEGA"
    MONITOR_OMEGA = "MONITOR_OMEGA"


class SegmentEvent(str, Enum):
    SLOPE_CHANGE = "SLOPE_CHANGE"
    JUMP_DOWN = "JUMP_DOWN"
    JUMP_UP = "JUMP_UP"
    FROM_EMPTY_BELOW_MAX = "FROM_EMPTY_BELOW_MAX"
    TO_EMPTY_BELOW_MAX = "TO_EMPTY_BELOW_MAX"
    RANGE_BOUNDARY = "RANGE_BOUNDARY"
    ZERO_CONTACT = "ZERO_CONTACT"
    TRACE_EDGE = "TRACE_EDGE"


# Events that can open / close a period in which a whole edge was traced
WHOLE_EDGE_START_EVENTS = frozenset(
    {SegmentEvent.SLOPE_CHANGE, SegmentEvent.JUMP_DOWN, SegmentEvent.FROM_EMPTY_BELOW_MAX}
)
WHOLE_EDGE_END_EVENTS = frozenset(
    {SegmentEvent.SLOPE_CHANGE, SegmentEvent.JUMP_UP, SegmentEvent.TO_EMPTY_BELOW_MAX}
)


class ObservationKind(str, Enum):
    EDGE = "edge"
    VERTEX = "vertex"
    ADJACENCY = "adjacency"


class PieceKind(str, Enum):
    """What the beam sees during one piece of an exact trace."""

    EDGE = "EDGE"
    INSIDE = "INSIDE"
    EMPTY = "EMPTY"


class StageType(str, Enum):
    """
    Pipeline stages known to the registry.
    These are the identifiers used in scenario files, the CLI and asset names.
    """

    SIMULATE = "SIMULATE"
    ANALYZE = "ANALYZE"
    ESTIMATE = "ESTIMATE"
    VALIDATE_PROB = "VALIDATE_PROB"


class DagsterKind(str, Enum):
    """Dagster kind tags attached to generated assets; Dagster shows at most three per asset."""

    PYTHON = "python"
    NUMPY = "numpy"
    SCIKIT_LEARN = "scikitlearn"
    PANDAS = "pandas"
    JSON = "json"
    SVG = "svg"


STAGE_TO_KINDS = {
    StageType.SIMULATE: [DagsterKind.PYTHON, DagsterKind.NUMPY, DagsterKind.JSON],
    StageType.ANALYZE: [DagsterKind.PYTHON, DagsterKind.NUMPY, DagsterKind.JSON],
    StageType.ESTIMATE: [DagsterKind.PYTHON, DagsterKind.SCIKIT_LEARN, DagsterKind.SVG],
    StageType.VALIDATE_PROB: [DagsterKind.PYTHON, DagsterKind.PANDAS, DagsterKind.SVG],
}
