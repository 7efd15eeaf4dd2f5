"""
SVG output: assembled shapes (optionally over the ground truth) and the
detection-probability curves.
"""
import io
import math
from typing import Dict, List, Optional, Sequence, Tuple

import jinja2
import matplotlib
import numpy as np

from shape_sensing_factory.models.geometry import Point, PolygonTarget
from shape_sensing_factory.models.shape import ShapeEstimate

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

WIDTH = 480
HEIGHT = 480
MARGIN = 30

_SHAPE_TEMPLATE = jinja2.Template(
    """<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{{ width }}" height="{{ height }}" viewBox="0 0 {{ width }} {{ height }}">
<title>{{ title }}</title>
<rect width="100%" height="100%" fill="white"/>
{%- if truth %}
<path d="{{ truth }}" fill="none" stroke="#9e9e9e" stroke-width="1.5" stroke-dasharray="6,4"/>
{%- endif %}
{%- if shape %}
<path d="{{ shape }}" fill="#bbdefb" fill-opacity="0.6" stroke="#0d47a1" stroke-width="2"/>
{%- for x, y in vertices %}
<circle cx="{{ '%.2f' % x }}" cy="{{ '%.2f' % y }}" r="3" fill="#0d47a1"/>
{%- endfor %}
{%- endif %}
{%- for line in notes %}
<text x="10" y="{{ 18 + 14 * loop.index0 }}" font-family="Arial" font-size="11" fill="{{ note_color }}">{{ line }}</text>
{%- endfor %}
</svg>
""",
    autoescape=True,
)


def _path(points: Sequence[Point]) -> str:
    head, *rest = points
    parts = [f"M {head[0]:.2f} {head[1]:.2f}"] + [f"L {x:.2f} {y:.2f}" for x, y in rest]
    return " ".join(parts) + " Z"


def _rigid_fit(src: np.ndarray, dst: np.ndarray) -> Tuple[np.ndarray, float]:
    """Least-squares rotation + translation of ``src`` onto ``dst``; returns the moved points and the rms error."""
    cs, cd = src.mean(axis=0), dst.mean(axis=0)
    u, _, vt = np.linalg.svd((src - cs).T @ (dst - cd))
    rot = u @ vt
    if np.linalg.det(rot) < 0:
        u[:, -1] *= -1
        rot = u @ vt
    moved = (src - cs) @ rot + cd
    return moved, float(np.sqrt(np.mean(np.sum((moved - dst) ** 2, axis=1))))


def align_truth(truth: PolygonTarget, estimate_pts: Sequence[Point]) -> List[Point]:
    """
    Move the ground truth onto the estimate. With matching vertex counts every
    cyclic correspondence in both walking directions is tried and the best rigid
    fit wins; otherwise the centroids are matched.
    """
    src = np.array(truth.vertices, dtype=float)
    dst = np.array(estimate_pts, dtype=float)
    if len(src) != len(dst):
        return [tuple(p) for p in (src - src.mean(axis=0) + dst.mean(axis=0))]
    best, best_err = src, math.inf
    for cand in (src, src[::-1]):
        for shift in range(len(cand)):
            moved, err = _rigid_fit(np.roll(cand, shift, axis=0), dst)
            if err < best_err - 1e-12:
                best, best_err = moved, err
    return [tuple(p) for p in best]


def _viewport(point_sets: Sequence[Sequence[Point]]):
    pts = np.array([p for s in point_sets for p in s], dtype=float)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = max(float(np.max(hi - lo)), 1e-9)
    scale = (min(WIDTH, HEIGHT) - 2 * MARGIN) / span
    cx, cy = (lo + hi) / 2.0

    # y grows downward in SVG
    def to_svg(p: Point) -> Point:
        return (WIDTH / 2 + (p[0] - cx) * scale, HEIGHT / 2 - (p[1] - cy) * scale)

    return to_svg


def render_svg(
    shape: Optional[ShapeEstimate] = None,
    truth: Optional[PolygonTarget] = None,
    title: str = "Estimated shape",
) -> str:
    """
    SVG of an assembled shape, or of a ground-truth polygon alone. Without a shape
    and a truth the document is a placeholder saying nothing was estimated.
    """
    if shape is None and truth is None:
        return _SHAPE_TEMPLATE.render(
            width=WIDTH,
            height=HEIGHT,
            title=title,
            truth=None,
            shape=None,
            vertices=[],
            notes=["no shape estimated", "no length class was accepted or no cycle closed"],
            note_color="#b71c1c",
        )

    shape_pts = shape.vertices() if shape is not None else None
    truth_pts = None
    if truth is not None:
        truth_pts = align_truth(truth, shape_pts) if shape_pts else list(truth.vertices)
    to_svg = _viewport([s for s in (shape_pts, truth_pts) if s])

    notes = [title]
    if shape is not None:
        notes.append(f"edges {shape.n_e}  perimeter {shape.perimeter:.2f}  closure {shape.closure_residual:.3g}")
        if shape.mirror_ambiguous:
            notes.append("mirror image scores the same")
    svg_shape = [to_svg(p) for p in shape_pts] if shape_pts else None
    return _SHAPE_TEMPLATE.render(
        width=WIDTH,
        height=HEIGHT,
        title=title,
        truth=_path([to_svg(p) for p in truth_pts]) if truth_pts else None,
        shape=_path(svg_shape) if svg_shape else None,
        vertices=svg_shape or [],
        notes=notes,
        note_color="#212121",
    )


def render_probability_svg(rows: Sequence[Dict[str, float]], title: str = "Detection probability against θ") -> str:
    """Closed-form curves with Monte Carlo points when the rows carry them."""
    plt.rcParams["svg.hashsalt"] = "shape-sensing-factory"
    theta = [r["theta"] for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    series = [
        ("q_edge", "mc_edge", "whole edge", "#1565c0"),
        ("q_vertex", "mc_vertex", "vertex", "#2e7d32"),
        ("q_edge_concave", "mc_edge_concave", "edge after concave vertex", "#c62828"),
    ]
    for closed, mc, label, color in series:
        ax.plot(theta, [r[closed] for r in rows], color=color, linewidth=1.6, label=label)
        if rows and rows[0].get(mc) is not None:
            ax.scatter(theta, [r[mc] for r in rows], color=color, marker="x", s=22)
    flagged = [r for r in rows if r.get("flag")]
    if flagged:
        ax.scatter([r["theta"] for r in flagged], [r["q_edge"] for r in flagged], facecolors="none", edgecolors="black", s=60, label="outside 3σ")
    ax.set_title(title)
    ax.set_xlabel("θ (rad)")
    ax.set_ylabel("probability")
    ax.legend(loc="best")
    fig.tight_layout()
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    return buf.getvalue()
