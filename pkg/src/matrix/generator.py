"""
Random Boolean matrices with i.i.d. Bernoulli entries.

Density 0.5 is the uniform measure over all m×n matrices.
"""

from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator

from ..utils.logger import get_logger
from .bitmatrix import BoolMatrix

logger = get_logger(__name__)

MAX_SEED = 2 ** 64 - 1


class GenSpec(BaseModel):
    """Parameters of a random matrix."""
    m: int = Field(ge=1)
    n: int = Field(ge=1)
    density: float = 0.5
    forbid_zero_rows: bool = False
    seed: int = Field(ge=0, le=MAX_SEED)

    @field_validator('density')
    @classmethod
    def validate_density(cls, v):
        """Density must lie strictly between 0 and 1."""
        if not 0.0 < v < 1.0:
            raise ValueError(f"density must be in (0, 1), got {v}")
        return v


def draw_seed() -> int:
    """Fresh 64-bit seed from OS entropy (printed by the CLI for reproducibility)."""
    return int(np.random.SeedSequence().generate_state(1, dtype=np.uint64)[0])


def derive_seeds(seed: int, count: int) -> List[int]:
    """Deterministic child seeds for ``count`` independent draws."""
    if count <= 0:
        return []
    states = np.random.SeedSequence(seed).generate_state(count, dtype=np.uint64)
    return [int(s) for s in states]


def generate_matrix(spec: GenSpec, rng: Optional[np.random.Generator] = None) -> BoolMatrix:
    """
    Draw a matrix per ``spec``.

    With ``forbid_zero_rows`` every all-zero row is redrawn until it has a 1.

    Args:
        spec: Generation parameters
        rng: Optional generator overriding ``spec.seed``
    """
    if rng is None:
        rng = np.random.default_rng(spec.seed)

    entries = rng.random((spec.m, spec.n)) < spec.density
    if spec.forbid_zero_rows:
        redrawn = 0
        for i in range(spec.m):
            while not entries[i].any():
                entries[i] = rng.random(spec.n) < spec.density
                redrawn += 1
        if redrawn:
            logger.debug(f"Redrew {redrawn} all-zero rows")

    matrix = BoolMatrix.from_numpy(entries)
    logger.debug(f"Generated {spec.m}x{spec.n} matrix, density={spec.density}, seed={spec.seed}")
    return matrix
