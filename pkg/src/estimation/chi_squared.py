"""
Chi-squared goodness-of-fit of estimated against exact subtask sizes.
"""

import math
from typing import Literal, Sequence

import numpy as np
from scipy import special

from ..utils.logger import get_logger
from .schema import SUM_TOLERANCE, ChiSquaredResult

logger = get_logger(__name__)


def regularized_lower_gamma(a: float, x: float) -> float:
    """P(a, x) = gamma(a, x) / Gamma(a)."""
    return float(special.gammainc(a, x))


def regularized_upper_gamma(a: float, x: float) -> float:
    """Q(a, x) = 1 - P(a, x), computed directly to keep tail precision."""
    return float(special.gammaincc(a, x))


def _as_distribution(values: Sequence[float], label: str) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if array.ndim != 1 or array.size == 0:
        raise ValueError(f"{label} must be a nonempty vector")
    if np.any(array < 0):
        raise ValueError(f"{label} has negative entries")
    total = float(array.sum())
    if abs(total - 1.0) > SUM_TOLERANCE:
        raise ValueError(f"{label} sums to {total}, expected 1")
    return array


def chi_squared_statistic(f_star: Sequence[float], nu: Sequence[float], N: int) -> float:
    """
    Z = N * sum over the support of nu of (f*_j - nu_j)^2 / nu_j.

    Returns ``inf`` when f* puts mass on a cell where nu is zero.

    Raises:
        ValueError: on length mismatch, non-positive N, or vectors not summing to 1
    """
    if len(f_star) != len(nu):
        raise ValueError(f"length mismatch: f_star has {len(f_star)} cells, nu has {len(nu)}")
    if N < 1:
        raise ValueError(f"sample size must be positive, got {N}")
    f = _as_distribution(f_star, "f_star")
    p = _as_distribution(nu, "nu")

    support = p > 0
    if np.any(f[~support] > 0):
        return math.inf
    diff = f[support] - p[support]
    return float(N * np.sum(diff * diff / p[support]))


def chi_squared_pvalue(Z: float, dof: int) -> float:
    """
    Upper tail 1 - CDF of the chi-squared distribution with ``dof`` degrees of freedom.

    Raises:
        ValueError: if ``Z`` is negative/NaN or ``dof`` < 1
    """
    if isinstance(dof, bool) or int(dof) != dof or dof < 1:
        raise ValueError(f"degrees of freedom must be a positive integer, got {dof}")
    if math.isnan(Z) or Z < 0:
        raise ValueError(f"statistic must be non-negative, got {Z}")
    if math.isinf(Z):
        return 0.0
    if Z == 0:
        return 1.0
    return min(max(regularized_upper_gamma(dof / 2.0, Z / 2.0), 0.0), 1.0)


def support_dof(nu: Sequence[float]) -> int:
    """|support of nu| - 1, floored at 1."""
    return max(int(np.count_nonzero(np.asarray(nu, dtype=float) > 0)) - 1, 1)


def chi_squared_test(f_star: Sequence[float],
                     nu: Sequence[float],
                     N: int,
                     dof_mode: Literal["support", "literal"] = "support") -> ChiSquaredResult:
    """
    Statistic plus p-value.

    Args:
        f_star: Estimated frequencies
        nu: Exact subtask sizes
        N: Sample size
        dof_mode: ``support`` uses |support of nu| - 1 degrees of freedom,
            ``literal`` uses n - 1
    """
    Z = chi_squared_statistic(f_star, nu, N)
    if dof_mode == "support":
        dof = support_dof(nu)
    elif dof_mode == "literal":
        dof = max(len(nu) - 1, 1)
    else:
        raise ValueError(f"Unknown dof mode: {dof_mode}")
    return ChiSquaredResult(Z=Z, dof=dof, p_value=chi_squared_pvalue(Z, dof))
