"""
Structured console logging for stages and the definition build.

Every helper returns the line it produced. ``logger`` picks the destination: None
for the package logger, a logger-like object (``context.log`` inside Dagster), or
False to only format the line.
"""
import logging
import time
from typing import Any, Tuple

_log = logging.getLogger("shape_sensing_factory")
_log.setLevel(logging.INFO)

if not _log.handlers:
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter("%(message)s"))
    _log.addHandler(handler)
    # the root logger may be configured too
    _log.propagate = False

_MARKERS = {"strong": "=" * 80, "mini": "-" * 40, "normal": "-" * 80}


def get_logger() -> logging.Logger:
    return _log


def _emit(msg: str, logger=None) -> str:
    if logger is None:
        _log.info(msg)
    elif logger is not False:
        logger.info(msg)
    return msg


def _fmt(value: Any) -> str:
    # floats get a fixed number of significant digits so log lines stay aligned
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def log_header(header: str, logger=None) -> str:
    """Strong marker, the upper-cased title, normal marker."""
    return "\n".join(
        [
            log_marker("strong", logger=logger),
            log_action(header.upper(), logger=logger),
            log_marker("normal", logger=logger),
        ]
    )


def log_action(action: str, *args: Tuple[str, Any], logger=None, **kwargs) -> str:
    """``ACTION | key : value | ...``; ordered tuples first, then keyword arguments."""
    pairs = list(args) + list(kwargs.items())
    if not pairs:
        return _emit(action, logger)
    values = " | ".join(f"{str(k).ljust(12)} : {_fmt(v)}" for k, v in pairs)
    return _emit(f"{action.rjust(20)} | {values}", logger)


def log_action_stats(action: str, start_time: float, *args, logger=None, **kwargs) -> str:
    """log_action with the time elapsed since ``start_time`` appended."""
    kwargs["duration"] = f"{round(time.time() - start_time, 3)}s"
    return log_action(action, *args, logger=logger, **kwargs)


def log_marker(style: str = "normal", logger=None) -> str:
    return _emit(_MARKERS.get(style, _MARKERS["normal"]), logger)


def convert_rate(count: int, duration_seconds: float, unit: str = "items") -> str:
    """Throughput such as ``2.5 sensors/s``; ``-`` when no time was measured."""
    if duration_seconds <= 0:
        return "-"
    return f"{round(count / duration_seconds, 1)} {unit}/s"
