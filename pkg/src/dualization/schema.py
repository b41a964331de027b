"""
Schema definitions for the dualization engine.
"""

from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, computed_field, model_validator


class EnumConfig(BaseModel):
    """Tie-break and ordering rules of the RUNC-M recursion."""
    # Among rows of R with the least unit count over C, pick the lowest (or highest) index.
    min_row_tie_break: Literal["lowest", "highest"] = "lowest"
    # Order in which the columns of C_0^min are branched on.
    column_order: Literal["ascending", "descending"] = "ascending"

    @classmethod
    def from_config(cls, config: Optional[Dict[str, Any]]) -> "EnumConfig":
        """Build from the ``enumeration`` section of config.yaml."""
        config = config or {}
        return cls(
            min_row_tie_break=config.get('min_row_tie_break', 'lowest'),
            column_order=config.get('column_order', 'ascending')
        )


class EnumStats(BaseModel):
    """Decision-tree counters of one enumeration."""
    nodes: int = 0
    coverings: int = 0
    dead_ends: int = 0
    aborted: bool = False

    @computed_field
    @property
    def steps(self) -> int:
        """Leaves reached: irreducible coverings plus redundant dead ends."""
        return self.coverings + self.dead_ends

    @computed_field
    @property
    def redundancy(self) -> float:
        return self.dead_ends / self.steps if self.steps else 0.0


class ExactSizes(BaseModel):
    """Exact subtask sizes nu_j = |P_j(L)| / |P(L)|."""
    counts: List[int] = Field(description="|P_j(L)| for j = 1..n")
    total: int = Field(ge=0, description="|P(L)|")

    @model_validator(mode='after')
    def validate_counts(self):
        """Counts are non-negative and add up to the total."""
        if any(c < 0 for c in self.counts):
            raise ValueError("subtask counts must be non-negative")
        if sum(self.counts) != self.total:
            raise ValueError(f"subtask counts sum to {sum(self.counts)}, expected {self.total}")
        return self

    @property
    def n(self) -> int:
        return len(self.counts)

    @property
    def is_empty(self) -> bool:
        """True when L has no irreducible coverings (nu is then all zeros)."""
        return self.total == 0

    @property
    def nu(self) -> List[Fraction]:
        if self.total == 0:
            return [Fraction(0)] * self.n
        return [Fraction(c, self.total) for c in self.counts]

    def as_floats(self) -> List[float]:
        return [float(x) for x in self.nu]
