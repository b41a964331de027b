"""
Static assignment of the n dualization subtasks to p workers.

``distribute_tasks`` is the greedy rule: subtasks are taken in ascending j and
each goes to the currently least-loaded worker (ties to the lowest index).
Round-robin and block schedules are kept as baselines.
"""

import math
from typing import Callable, Dict, List, Literal, Optional, Sequence

import numpy as np

from ..utils.logger import get_logger
from .schema import Schedule

logger = get_logger(__name__)

STRATEGIES = ("estimated", "lpt", "round_robin", "block")


def _check_arguments(p: int, n: int, f_star: Optional[Sequence[float]]) -> List[float]:
    if n < 1:
        raise ValueError(f"subtask count must be positive, got {n}")
    if p < 1:
        raise ValueError(f"worker count must be positive, got {p}")
    if p > n:
        raise ValueError(f"worker count p={p} exceeds subtask count n={n}")
    if f_star is None:
        return [1.0 / n] * n
    if len(f_star) != n:
        raise ValueError(f"expected {n} subtask sizes, got {len(f_star)}")
    sizes = [float(f) for f in f_star]
    for j, f in enumerate(sizes, start=1):
        if f < 0 or math.isnan(f):
            raise ValueError(f"subtask size f*_{j} = {f} must be non-negative")
    return sizes


def _loads(p: int, assignment: Sequence[int], sizes: Sequence[float]) -> List[float]:
    loads = [0.0] * p
    for worker, size in zip(assignment, sizes):
        loads[worker - 1] += size
    return loads


def distribute_tasks(p: int,
                     n: int,
                     f_star: Sequence[float],
                     order: Literal["ascending", "lpt"] = "ascending") -> Schedule:
    """
    Greedy schedule from estimated subtask sizes.

    Args:
        p: Worker count, 1 <= p <= n
        n: Subtask count
        f_star: Estimated size of each subtask
        order: ``ascending`` takes subtasks j = 1..n; ``lpt`` takes them by
            decreasing size (ties by ascending j)

    Raises:
        ValueError: if p is out of range, f_star has the wrong length or a negative entry
    """
    sizes = _check_arguments(p, n, f_star)
    if order == "ascending":
        sequence = range(n)
    elif order == "lpt":
        sequence = sorted(range(n), key=lambda j: (-sizes[j], j))
    else:
        raise ValueError(f"Unknown order: {order}")

    loads = [0.0] * p
    assignment = [0] * n
    for j in sequence:
        # min() returns the first minimum, so ties go to the lowest worker index
        k0 = min(range(p), key=loads.__getitem__)
        assignment[j] = k0 + 1
        loads[k0] += sizes[j]

    strategy = "estimated" if order == "ascending" else "lpt"
    return Schedule(assignment=assignment, predicted_load=loads, p=p, strategy=strategy)


def round_robin_schedule(p: int, n: int, f_star: Optional[Sequence[float]] = None) -> Schedule:
    """N_j = ((j - 1) mod p) + 1."""
    sizes = _check_arguments(p, n, f_star)
    assignment = [(j % p) + 1 for j in range(n)]
    return Schedule(assignment=assignment, predicted_load=_loads(p, assignment, sizes),
                    p=p, strategy="round_robin")


def block_schedule(p: int, n: int, f_star: Optional[Sequence[float]] = None) -> Schedule:
    """Contiguous blocks; the first n mod p workers get one extra subtask."""
    sizes = _check_arguments(p, n, f_star)
    assignment = []
    for k, block in enumerate(np.array_split(np.arange(n), p), start=1):
        assignment.extend([k] * len(block))
    return Schedule(assignment=assignment, predicted_load=_loads(p, assignment, sizes),
                    p=p, strategy="block")


def schedule_makespan(schedule: Schedule) -> float:
    """sigma(N) = max_k sigma_k."""
    return max(schedule.predicted_load)


_BUILDERS: Dict[str, Callable[[int, int, Optional[Sequence[float]]], Schedule]] = {
    "estimated": lambda p, n, f: distribute_tasks(p, n, f, order="ascending"),
    "lpt": lambda p, n, f: distribute_tasks(p, n, f, order="lpt"),
    "round_robin": round_robin_schedule,
    "block": block_schedule,
}


def build_schedule(strategy: str, p: int, n: int, f_star: Optional[Sequence[float]] = None) -> Schedule:
    """
    Build a schedule by strategy name.

    Args:
        strategy: One of ``estimated``, ``lpt``, ``round_robin``, ``block``
        p: Worker count
        n: Subtask count
        f_star: Subtask sizes; required by ``estimated`` and ``lpt``
    """
    if strategy not in _BUILDERS:
        raise ValueError(f"Unknown strategy {strategy!r}; expected one of {', '.join(STRATEGIES)}")
    if f_star is None and strategy in ("estimated", "lpt"):
        raise ValueError(f"strategy {strategy!r} needs subtask sizes")

    schedule = _BUILDERS[strategy](p, n, f_star)
    logger.info(f"Built {strategy} schedule for p={p}, n={n}: makespan {schedule_makespan(schedule):.4f}")
    return schedule
