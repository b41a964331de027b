"""
Brute-force reference dualizer and exact subtask sizes.

Deliberately naive: every column subset is tested, minimality by removing
one column at a time. Only meant for cross-checking at small scale.
"""

from itertools import combinations
from typing import Literal, Optional, Set

from ..matrix.bitmatrix import BoolMatrix, Covering
from ..utils.errors import OracleCapExceededError
from ..utils.logger import get_logger
from .runcm import enumerate_coverings
from .schema import EnumConfig, ExactSizes

logger = get_logger(__name__)

DEFAULT_MAX_COLUMNS = 20


def _covers_all(cols, subset, full: int) -> bool:
    covered = 0
    for k in subset:
        covered |= cols[k]
        if covered == full:
            return True
    return covered == full


def is_minimal_by_removal(L: BoolMatrix, H: Covering) -> bool:
    """True iff H covers L and no H minus one column does."""
    cols = L.column_masks
    full = L.all_rows_mask
    positions = [j - 1 for j in H]
    if not positions or not _covers_all(cols, positions, full):
        return False
    for drop in range(len(positions)):
        rest = positions[:drop] + positions[drop + 1:]
        if _covers_all(cols, rest, full):
            return False
    return True


def brute_force_dualize(L: BoolMatrix, max_columns: int = DEFAULT_MAX_COLUMNS) -> Set[Covering]:
    """
    All irreducible coverings of ``L`` by exhaustive subset scan.

    Subsets are visited by cardinality, then lexicographically.

    Args:
        L: Matrix
        max_columns: Refuse matrices with more columns than this

    Raises:
        OracleCapExceededError: if ``L.n > max_columns``
    """
    if L.n > max_columns:
        logger.error(f"Oracle refused {L.m}x{L.n} matrix (cap {max_columns})")
        raise OracleCapExceededError(L.n, max_columns)

    cols = L.column_masks
    full = L.all_rows_mask
    found: Set[Covering] = set()
    if L.has_zero_row():
        return found

    for size in range(1, L.n + 1):
        for subset in combinations(range(L.n), size):
            if not _covers_all(cols, subset, full):
                continue
            covering = tuple(k + 1 for k in subset)
            if is_minimal_by_removal(L, covering):
                found.add(covering)

    logger.debug(f"Oracle found {len(found)} irreducible coverings of a {L.m}x{L.n} matrix")
    return found


def exact_subtask_sizes(L: BoolMatrix,
                        method: Literal["auto", "oracle", "runcm"] = "auto",
                        max_columns: int = DEFAULT_MAX_COLUMNS,
                        config: Optional[EnumConfig] = None) -> ExactSizes:
    """
    Exact nu_j(L) = |P_j(L)| / |P(L)| from a full dualization.

    Args:
        L: Matrix
        method: ``oracle`` (brute force), ``runcm`` (full RUNC-M dualization) or
            ``auto`` (oracle when ``L.n <= max_columns``, else RUNC-M)
        max_columns: Oracle cap
        config: Enumeration rules for the RUNC-M path
    """
    if method == "auto":
        method = "oracle" if L.n <= max_columns else "runcm"

    if method == "oracle":
        coverings = brute_force_dualize(L, max_columns)
    elif method == "runcm":
        coverings = enumerate_coverings(L, config)
    else:
        raise ValueError(f"Unknown method: {method}")

    counts = [0] * L.n
    total = 0
    for covering in coverings:
        counts[covering[0] - 1] += 1
        total += 1

    sizes = ExactSizes(counts=counts, total=total)
    if sizes.is_empty:
        logger.warning(f"Matrix {L.m}x{L.n} has no irreducible coverings; nu is all zeros")
    return sizes
