from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class ChamberReport:
    """Counts of positive definite principal submatrices by cardinality.

    Read as chamber counts for the negated intersection matrix: every such
    submatrix is one chamber, plus one for the nef chamber.
    """

    matrix_dimension: int
    histogram: dict[int, int]
    elapsed: float = 0.0
    workers: int = 1
    matrix_digest: str = ""
    name: str = ""
    lineage: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.histogram = {int(k): int(v) for k, v in sorted(self.histogram.items()) if v}

    @property
    def posdef_submatrix_count(self) -> int:
        return sum(self.histogram.values())

    @property
    def total_chambers(self) -> int:
        return self.posdef_submatrix_count + 1

    @property
    def max_support(self) -> int:
        return max(self.histogram, default=0)

    def same_counts(self, other: "ChamberReport") -> bool:
        return (
            self.matrix_dimension == other.matrix_dimension
            and self.histogram == other.histogram
        )

    def to_json_dict(self) -> dict[str, Any]:
        # counts as decimal strings: consumers may not hold 64-bit integers
        return {
            "matrix": self.name,
            "matrix_sha256": self.matrix_digest,
            "n": self.matrix_dimension,
            "posdef_submatrix_count": str(self.posdef_submatrix_count),
            "total_chambers": str(self.total_chambers),
            "histogram": {str(k): str(v) for k, v in self.histogram.items()},
            "max_support": self.max_support,
            "elapsed_seconds": round(self.elapsed, 6),
            "workers": self.workers,
            "checkpoint_lineage": list(self.lineage),
        }

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "ChamberReport":
        return cls(
            matrix_dimension=int(data["n"]),
            histogram={int(k): int(v) for k, v in data["histogram"].items()},
            elapsed=float(data.get("elapsed_seconds", 0.0)),
            workers=int(data.get("workers", 1)),
            matrix_digest=data.get("matrix_sha256", ""),
            name=data.get("matrix", ""),
            lineage=list(data.get("checkpoint_lineage", [])),
        )

    def format_table(self) -> str:
        """Histogram as a two-column table: support size and chamber count."""
        width = max(len(f"{v}") for v in self.histogram.values()) if self.histogram else 1
        width = max(width, len("chambers"))
        lines = [f"{'l':>4}  {'chambers':>{width}}", "-" * (width + 6)]
        for ell, count in self.histogram.items():
            lines.append(f"{ell:>4}  {count:>{width}}")
        lines.append("-" * (width + 6))
        lines.append(f"{'nef':>4}  {1:>{width}}")
        lines.append(f"{'z':>4}  {self.total_chambers:>{width}}")
        return "\n".join(lines)
