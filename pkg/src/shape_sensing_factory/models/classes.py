import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

# (sensor_id, k, temporary estimate)
Member = Tuple[int, int, float]


@dataclass
class LengthClass:
    """A cluster of temporary edge-length estimates presumed to come from equal edges."""

    index: int
    members: List[Member] = field(default_factory=list)
    lambda_hat: float = 0.0
    count_hat: int = 0
    expected: float = 0.0
    count_uncorrected: Optional[int] = None
    rejected: bool = False

    @property
    def size(self) -> int:
        return len(self.members)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "lambda_hat": self.lambda_hat,
            "size": self.size,
            "expected": self.expected,
            "count_hat": self.count_hat,
            "count_uncorrected": self.count_uncorrected,
            "rejected": self.rejected,
        }


@dataclass
class AngleClass:
    """A cluster of temporary inner-angle estimates."""

    index: int
    members: List[Member] = field(default_factory=list)
    gamma_hat: float = 0.0
    count_hat: int = 0
    expected: float = 0.0
    rejected: bool = False

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def concave(self) -> bool:
        return self.gamma_hat > math.pi

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "gamma_hat": self.gamma_hat,
            "size": self.size,
            "expected": self.expected,
            "count_hat": self.count_hat,
            "concave": self.concave,
            "rejected": self.rejected,
        }


@dataclass(frozen=True)
class VertexHypothesis:
    """
    An inner-angle class seen between two length classes, in counterclockwise
    order. A one-sided hypothesis leaves the unobserved side as None.
    """

    angle_class: int
    left_length_class: Optional[int]
    right_length_class: Optional[int]
    support: int

    @property
    def two_sided(self) -> bool:
        return self.left_length_class is not None and self.right_length_class is not None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "angle_class": self.angle_class,
            "left": self.left_length_class,
            "right": self.right_length_class,
            "support": self.support,
        }


@dataclass
class AdjacencyCount:
    """Counts of consecutive whole-edge pairs per (length class, length class), CCW order."""

    size: int
    counts: List[List[int]] = field(default_factory=list)
    judged: List[Tuple[int, int]] = field(default_factory=list)
    min_support: int = 0

    def __post_init__(self):
        if not self.counts:
            self.counts = [[0] * self.size for _ in range(self.size)]

    def add(self, m: int, m1: int, n: int = 1) -> None:
        self.counts[m][m1] += n

    def connected(self, m: int, m1: int) -> bool:
        return (m, m1) in self.judged

    def to_dict(self) -> Dict[str, Any]:
        return {"counts": self.counts, "judged": [list(p) for p in self.judged], "min_support": self.min_support}
