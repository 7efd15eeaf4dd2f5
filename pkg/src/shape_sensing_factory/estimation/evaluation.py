"""Errors of an estimation report against a known polygon."""
from typing import Any, Dict, List, Sequence

from shape_sensing_factory.models.geometry import PolygonTarget
from shape_sensing_factory.models.report import EstimationReport

# values closer than this (relative) are the same distinct truth
DISTINCT_TOLERANCE = 1e-6


def distinct_values(values: Sequence[float]) -> List[Dict[str, float]]:
    """Sorted distinct values with their multiplicity."""
    out: List[Dict[str, float]] = []
    for v in sorted(values):
        if out and abs(v - out[-1]["value"]) <= DISTINCT_TOLERANCE * max(1.0, abs(v)):
            out[-1]["count"] += 1
        else:
            out.append({"value": v, "count": 1})
    return out


def relative_error(estimate: float, truth: float) -> float:
    return (estimate - truth) / truth


def _match(estimates: List[Dict[str, Any]], truths: List[Dict[str, float]], key: str) -> List[Dict[str, Any]]:
    """Pair each estimated class with the nearest distinct true value."""
    rows = []
    for est in estimates:
        nearest = min(truths, key=lambda t: (abs(t["value"] - est[key]), t["value"]))
        rows.append(
            {
                "class": est["index"],
                "estimate": est[key],
                "truth": nearest["value"],
                "relative_error": relative_error(est[key], nearest["value"]),
                "count_hat": est["count_hat"],
                "count_truth": nearest["count"],
            }
        )
    return rows


def evaluate(report: EstimationReport, truth: PolygonTarget) -> Dict[str, Any]:
    """
    Type-one error: the number of accepted classes differs from the number of
    distinct true values. Type-two error: how far each class value is from the
    true value it was matched to.
    """
    true_lengths = distinct_values(truth.lengths)
    true_angles = distinct_values(truth.inner_angles)
    lengths = [c.to_dict() for c in report.accepted_length_classes]
    angles = [c.to_dict() for c in report.accepted_angle_classes]

    length_rows = _match(lengths, true_lengths, "lambda_hat") if lengths else []
    angle_rows = _match(angles, true_angles, "gamma_hat") if angles else []
    type_one = len(lengths) != len(true_lengths) or len(angles) != len(true_angles)
    worst = [abs(r["relative_error"]) for r in length_rows + angle_rows]
    return {
        "type_one_error": type_one,
        "classes": {
            "lengths": len(lengths),
            "angles": len(angles),
            "true_lengths": len(true_lengths),
            "true_angles": len(true_angles),
        },
        "edge_count": {"estimated": sum(r["count_hat"] for r in lengths), "truth": truth.n_e},
        "lengths": length_rows,
        "angles": angle_rows,
        "max_abs_relative_error": max(worst) if worst else None,
    }
