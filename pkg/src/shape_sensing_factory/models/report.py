from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import pandas as pd

from shape_sensing_factory.models.classes import AdjacencyCount, AngleClass, LengthClass, VertexHypothesis
from shape_sensing_factory.models.shape import ShapeEstimate


@dataclass
class EstimationReport:
    """
    Everything the estimate stage produces: classes with their counts, vertex
    hypotheses, the adjacency matrix and the assembled shapes, best first.
    """

    length_classes: List[LengthClass] = field(default_factory=list)
    angle_classes: List[AngleClass] = field(default_factory=list)
    hypotheses: List[VertexHypothesis] = field(default_factory=list)
    adjacency: Optional[AdjacencyCount] = None
    shapes: List[ShapeEstimate] = field(default_factory=list)
    min_support: int = 0
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    evaluation: Optional[Dict[str, Any]] = None

    @property
    def is_empty(self) -> bool:
        return not any(not c.rejected for c in self.length_classes)

    @property
    def accepted_length_classes(self) -> List[LengthClass]:
        return [c for c in self.length_classes if not c.rejected]

    @property
    def accepted_angle_classes(self) -> List[AngleClass]:
        return [c for c in self.angle_classes if not c.rejected]

    @property
    def best_shape(self) -> Optional[ShapeEstimate]:
        return self.shapes[0] if self.shapes else None

    def length_table(self) -> pd.DataFrame:
        rows = [c.to_dict() for c in self.length_classes]
        cols = ["index", "lambda_hat", "size", "expected", "count_hat", "count_uncorrected", "rejected"]
        return pd.DataFrame(rows, columns=cols)

    def angle_table(self) -> pd.DataFrame:
        rows = [c.to_dict() for c in self.angle_classes]
        cols = ["index", "gamma_hat", "size", "expected", "count_hat", "concave", "rejected"]
        return pd.DataFrame(rows, columns=cols)

    def hypothesis_table(self) -> pd.DataFrame:
        return pd.DataFrame([h.to_dict() for h in self.hypotheses], columns=["angle_class", "left", "right", "support"])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "length_classes": [c.to_dict() for c in self.length_classes],
            "angle_classes": [c.to_dict() for c in self.angle_classes],
            "hypotheses": [h.to_dict() for h in self.hypotheses],
            "adjacency": self.adjacency.to_dict() if self.adjacency else None,
            "shapes": [s.to_dict() for s in self.shapes],
            "min_support": self.min_support,
            "diagnostics": self.diagnostics,
            "evaluation": self.evaluation,
        }

    def to_text(self) -> str:
        """Human-readable tables, one block per part."""
        blocks = ["Edge lengths", self.length_table().to_string(index=False)]
        blocks += ["", "Inner angles", self.angle_table().to_string(index=False)]
        if self.hypotheses:
            blocks += ["", "Vertex hypotheses", self.hypothesis_table().to_string(index=False)]
        if self.adjacency is not None and self.adjacency.size:
            blocks += ["", "Adjacency counts", pd.DataFrame(self.adjacency.counts).to_string()]
        shape = self.best_shape
        if shape is not None:
            seq = pd.DataFrame({"length": shape.lengths, "angle": shape.angles})
            blocks += [
                "",
                f"Shape (closure {shape.closure_residual:.6g}, angle residual {shape.angle_residual:.6g})",
                seq.to_string(index=False),
            ]
        if self.evaluation:
            for key in ("lengths", "angles"):
                if self.evaluation.get(key):
                    blocks += ["", f"Errors against ground truth: {key}"]
                    blocks.append(pd.DataFrame(self.evaluation[key]).to_string(index=False))
        return "\n".join(blocks) + "\n"
