from typing import Any, Dict

from shape_sensing_factory.factory.utils.logging import convert_rate


def generate_stage_stats(items: int, duration: float, unit: str = "sensors", **counts: Any) -> Dict[str, Any]:
    """Summary of one stage run: item count, other counts, duration and throughput."""
    stats: Dict[str, Any] = {unit: items}
    stats.update(counts)
    stats["duration_seconds"] = round(duration, 2)
    stats["throughput"] = convert_rate(items, duration, unit)
    return stats


def count_by_kind(records) -> Dict[str, int]:
    """Observation records per kind, for stage metadata."""
    out: Dict[str, int] = {}
    for r in records:
        out[r["kind"]] = out.get(r["kind"], 0) + 1
    return out
