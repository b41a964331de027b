"""
Validation experiment for the subtask-size estimator.

For each matrix shape a batch of random matrices is generated, the exact
subtask sizes are computed by a full dualization, and for each r the estimate
f*_r is tested against them with the chi-squared statistic. The table reports
medians over the batch.
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..dualization.oracle import exact_subtask_sizes
from ..dualization.schema import EnumConfig, ExactSizes
from ..matrix.generator import GenSpec, derive_seeds, generate_matrix
from ..utils.helpers import format_shape, parse_shape
from ..utils.logger import get_logger
from .chi_squared import chi_squared_test
from .sampler import sample_eta
from .schema import SampleConfig, ValidationRow

logger = get_logger(__name__)

VALIDATION_COLUMNS = ['shape', 'r', 'median_Z', 'median_pvalue', 'median_max_abs_error', 'matrices']
PVALUE_FLOOR = 1e-4


def _usable_r_values(m: int, r_values: Sequence[int]) -> List[int]:
    usable = []
    for r in r_values:
        if r < 1 or r > m:
            logger.warning(f"Skipping r={r} for a matrix with m={m} rows")
            continue
        usable.append(r)
    return usable


def validation_experiment(shapes: Sequence[Tuple[int, int]],
                          r_values: Sequence[int],
                          matrices_per_shape: int,
                          t: int,
                          u: int,
                          seed: int,
                          density: float = 0.5,
                          dof_mode: str = "support",
                          workers: int = 1,
                          enum_config: Optional[EnumConfig] = None,
                          progress: bool = False) -> pd.DataFrame:
    """
    Median chi-squared statistic and p-value of f*_r against the exact sizes.

    Matrices are drawn with all-zero rows forbidden, so every matrix has at
    least one irreducible covering. Each ``r`` outside ``1..m`` is skipped
    for that shape.

    Args:
        shapes: (m, n) pairs
        r_values: Submatrix row counts to test
        matrices_per_shape: Random matrices per shape
        t: Submatrices per estimate
        u: Coverings drawn per submatrix
        seed: Master seed; matrix and sampling seeds are derived from it
        density: Bernoulli parameter of the generated matrices
        dof_mode: ``support`` or ``literal`` degrees of freedom
        workers: Processes per estimate
        enum_config: Enumeration rules
        progress: Show a progress bar

    Returns:
        Long table with one row per (shape, r), columns in VALIDATION_COLUMNS order
    """
    if matrices_per_shape < 1:
        raise ValueError(f"matrices_per_shape must be positive, got {matrices_per_shape}")

    rows: List[Dict[str, Any]] = []
    shape_seeds = derive_seeds(seed, len(shapes))

    for (m, n), shape_seed in zip(shapes, shape_seeds):
        shape = format_shape(m, n)
        usable = _usable_r_values(m, r_values)
        if not usable:
            continue

        matrix_seeds = derive_seeds(shape_seed, matrices_per_shape)
        z_values: Dict[int, List[float]] = {r: [] for r in usable}
        p_values: Dict[int, List[float]] = {r: [] for r in usable}
        errors: Dict[int, List[float]] = {r: [] for r in usable}

        iterator = tqdm(matrix_seeds, desc=f"Validating {shape}", disable=not progress)
        for matrix_seed in iterator:
            matrix = generate_matrix(GenSpec(m=m, n=n, density=density,
                                             forbid_zero_rows=True, seed=matrix_seed))
            exact = exact_subtask_sizes(matrix, method="runcm", config=enum_config)
            nu = exact.as_floats()
            sample_seeds = derive_seeds(matrix_seed, len(usable))

            for r, sample_seed in zip(usable, sample_seeds):
                config = SampleConfig(r=r, t=t, u=u, seed=sample_seed)
                estimate = sample_eta(matrix, config, enum_config=enum_config, workers=workers)
                result = chi_squared_test(estimate.f_star, nu, config.N, dof_mode)
                z_values[r].append(result.Z)
                p_values[r].append(result.p_value)
                errors[r].append(max_abs_error(estimate.f_star, exact))

        for r in usable:
            row = ValidationRow(
                shape=shape,
                r=r,
                median_Z=float(np.median(z_values[r])),
                median_pvalue=float(np.median(p_values[r])),
                median_max_abs_error=float(np.median(errors[r])),
                matrices=matrices_per_shape
            )
            logger.info(
                f"{shape} r={r}: median Z={row.median_Z:.3f}, median p={row.median_pvalue:.3g}"
            )
            rows.append(row.model_dump())

    return pd.DataFrame(rows, columns=VALIDATION_COLUMNS)


def max_abs_error(f_star: Sequence[float], exact: ExactSizes) -> float:
    """max_j |f*_j - nu_j|."""
    return float(np.max(np.abs(np.asarray(f_star, dtype=float) - np.asarray(exact.as_floats()))))


def _format_cell(z: float, p: float) -> str:
    p_text = "<1e-4" if p < PVALUE_FLOOR else f"{p:.4f}"
    return f"({z:.1f}, {p_text})"


def table1_layout(frame: pd.DataFrame) -> pd.DataFrame:
    """
    Pivot the long validation table to one row per r and one column per shape,
    each cell reading ``"(Z, p)"``; p-values below 1e-4 print as ``"<1e-4"``.
    """
    if frame.empty:
        return pd.DataFrame(columns=['r'])
    cells = frame.assign(cell=[
        _format_cell(z, p) for z, p in zip(frame['median_Z'], frame['median_pvalue'])
    ])
    shapes = list(dict.fromkeys(frame['shape']))
    table = cells.pivot(index='r', columns='shape', values='cell').reindex(columns=shapes)
    table = table.fillna('').sort_index().reset_index()
    table.columns.name = None
    return table


class ValidationExperiment:
    """Runs :func:`validation_experiment` with defaults from the ``estimator`` config section."""

    def __init__(self, config: Optional[Dict[str, Any]] = None, enum_config: Optional[EnumConfig] = None):
        config = config or {}
        validation = config.get('validation', {})
        self.t = config.get('t', 20)
        self.u = config.get('u', 50)
        self.workers = config.get('workers', 1)
        self.dof_mode = config.get('dof_mode', 'support')
        self.shapes = validation.get('shapes', ['20x60'])
        self.r_values = validation.get('r_values', [6, 10, 14, 18])
        self.matrices_per_shape = validation.get('matrices_per_shape', 5)
        self.density = validation.get('density', 0.5)
        self.enum_config = enum_config

    def run(self,
            seed: int,
            shapes: Optional[Sequence[Tuple[int, int]]] = None,
            r_values: Optional[Sequence[int]] = None,
            matrices_per_shape: Optional[int] = None,
            progress: bool = False) -> pd.DataFrame:
        if shapes is None:
            shapes = [parse_shape(s) for s in self.shapes]
        return validation_experiment(
            shapes=shapes,
            r_values=r_values if r_values is not None else self.r_values,
            matrices_per_shape=matrices_per_shape if matrices_per_shape is not None else self.matrices_per_shape,
            t=self.t,
            u=self.u,
            seed=seed,
            density=self.density,
            dof_mode=self.dof_mode,
            workers=self.workers,
            enum_config=self.enum_config,
            progress=progress
        )
