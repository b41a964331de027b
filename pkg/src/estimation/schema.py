"""
Schema definitions for subtask-size estimation.
"""

import math
from typing import List

from pydantic import BaseModel, Field, model_validator

from ..utils.errors import MatrixFormatError

SUM_TOLERANCE = 1e-9


class SampleConfig(BaseModel):
    """Random-submatrix sampling parameters."""
    r: int = Field(ge=1, description="rows per random submatrix")
    t: int = Field(ge=1, description="number of random submatrices")
    u: int = Field(ge=1, description="coverings drawn per submatrix")
    seed: int = Field(ge=0, le=2 ** 64 - 1)

    @property
    def N(self) -> int:
        """Sample size t * u."""
        return self.t * self.u

    @staticmethod
    def default_r(m: int) -> int:
        """ceil(m / 2), the row count above which the estimate becomes reliable."""
        return (m + 1) // 2


class FrequencyEstimate(BaseModel):
    """Estimated subtask sizes f*_r(j) and the sample they came from."""
    f_star: List[float]
    sample: List[int] = Field(description="observed least column indices, 1-based")
    config: SampleConfig
    discarded: int = Field(ge=0, description="resampled submatrices with no coverings")

    @model_validator(mode='after')
    def validate_frequencies(self):
        """f* is a probability vector over the sample's range."""
        if any(f < 0 for f in self.f_star):
            raise ValueError("frequencies must be non-negative")
        if abs(sum(self.f_star) - 1.0) > SUM_TOLERANCE:
            raise ValueError(f"frequencies sum to {sum(self.f_star)}, expected 1")
        n = len(self.f_star)
        if any(not 1 <= x <= n for x in self.sample):
            raise ValueError(f"sample values must lie in 1..{n}")
        return self

    @property
    def n(self) -> int:
        return len(self.f_star)

    def to_dump(self) -> str:
        """``n`` lines ``"j f_star_j"``."""
        return format_estimate(self.f_star)


class ChiSquaredResult(BaseModel):
    """Goodness-of-fit of f* against the exact nu."""
    Z: float = Field(ge=0.0)
    dof: int = Field(ge=1)
    p_value: float = Field(ge=0.0, le=1.0)

    @model_validator(mode='after')
    def validate_infinite(self):
        """An infinite statistic has p-value exactly 0."""
        if math.isinf(self.Z) and self.p_value != 0.0:
            raise ValueError("Z = inf requires p_value = 0")
        return self


class ValidationRow(BaseModel):
    """One (shape, r) cell of the validation table."""
    shape: str
    r: int
    median_Z: float
    median_pvalue: float
    median_max_abs_error: float
    matrices: int


def format_estimate(f_star: List[float]) -> str:
    return "".join(f"{j} {value:.15f}\n" for j, value in enumerate(f_star, start=1))


def parse_estimate(text: str) -> List[float]:
    """
    Parse an estimate dump back into the f* vector.

    Raises:
        MatrixFormatError: on malformed lines or indices out of sequence
    """
    values = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise MatrixFormatError(f"expected 'j f_star_j', got {line!r}", line_number)
        try:
            j, value = int(parts[0]), float(parts[1])
        except ValueError:
            raise MatrixFormatError(f"expected 'j f_star_j', got {line!r}", line_number)
        if j != len(values) + 1:
            raise MatrixFormatError(f"expected index {len(values) + 1}, got {j}", line_number)
        if value < 0 or math.isnan(value):
            raise MatrixFormatError(f"frequency must be non-negative, got {value}", line_number)
        values.append(value)
    if not values:
        raise MatrixFormatError("estimate dump is empty", 1)
    return values
