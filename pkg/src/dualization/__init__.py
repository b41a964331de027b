"""
Dualization module: RUNC-M enumeration of irreducible coverings and a brute-force oracle.
"""

from .oracle import brute_force_dualize, exact_subtask_sizes
from .runcm import (
    RuncmEnumerator,
    SearchNode,
    dualize,
    enumerate_coverings,
    enumerate_subtask,
    is_compatible,
    is_consistent,
    is_irreducible_covering,
    run_enumeration,
    supporting_rows
)
from .schema import EnumConfig, EnumStats, ExactSizes

__all__ = [
    'brute_force_dualize',
    'exact_subtask_sizes',
    'RuncmEnumerator',
    'SearchNode',
    'dualize',
    'enumerate_coverings',
    'enumerate_subtask',
    'is_compatible',
    'is_consistent',
    'is_irreducible_covering',
    'run_enumeration',
    'supporting_rows',
    'EnumConfig',
    'EnumStats',
    'ExactSizes'
]
