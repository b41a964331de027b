"""
Parallel execution of a static schedule.

Worker k enumerates its assigned subtasks in ascending j and times only that
loop. Workers share nothing mutable; coverings and timings come back to the
parent, which merges them after every worker has finished.
"""

import os
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

from ..dualization.runcm import RuncmEnumerator
from ..dualization.schema import EnumConfig
from ..matrix.bitmatrix import BoolMatrix, Covering
from ..utils.errors import TimerResolutionError, WorkerFailureError
from ..utils.logger import get_logger
from .schema import RunReport, Schedule, ScalingMetrics

logger = get_logger(__name__)

Backend = Literal["process", "inline"]


def available_workers() -> int:
    """CPUs this process may run on."""
    if hasattr(os, "sched_getaffinity"):
        return len(os.sched_getaffinity(0))
    return os.cpu_count() or 1


def run_worker(matrix: BoolMatrix,
               tasks: Sequence[int],
               config: Optional[EnumConfig] = None) -> Tuple[List[Covering], float]:
    """
    Enumerate the j-coverings of every assigned subtask, in ascending j.

    Returns:
        The coverings and the wall time of the enumeration loop
    """
    enumerator = RuncmEnumerator(matrix, config)
    coverings: List[Covering] = []
    started = time.perf_counter()
    for j in sorted(tasks):
        coverings.extend(enumerator.iter_subtask(j))
    elapsed = time.perf_counter() - started
    return coverings, elapsed


def run_parallel(L: BoolMatrix,
                 schedule: Schedule,
                 config: Optional[EnumConfig] = None,
                 backend: Backend = "process",
                 allow_oversubscribe: bool = False,
                 estimation_seconds: float = 0.0) -> Tuple[List[Covering], RunReport]:
    """
    Run every worker's subtask batch and merge the results.

    Args:
        L: Matrix to dualize
        schedule: Assignment of subtasks 1..n to workers 1..p
        config: Enumeration rules
        backend: ``process`` runs one process per worker; ``inline`` runs the
            workers one after another in this process
        allow_oversubscribe: Permit more workers than available CPUs
        estimation_seconds: Time spent estimating subtask sizes, carried into the report

    Returns:
        Lexicographically sorted coverings and the run report

    Raises:
        ValueError: if the schedule does not match ``L`` or oversubscribes without permission
        WorkerFailureError: if any worker fails; no partial result is returned
    """
    if schedule.n != L.n:
        raise ValueError(f"schedule covers {schedule.n} subtasks but the matrix has {L.n} columns")
    p = schedule.p
    if backend == "process" and not allow_oversubscribe and p > available_workers():
        raise ValueError(
            f"p={p} workers exceeds the {available_workers()} available CPUs; "
            f"pass allow_oversubscribe to run anyway"
        )

    batches = [schedule.tasks_for(k) for k in range(1, p + 1)]
    results: List[Optional[Tuple[List[Covering], float]]] = [None] * p

    if backend == "inline":
        for k, tasks in enumerate(batches, start=1):
            try:
                results[k - 1] = run_worker(L, tasks, config)
            except Exception as e:
                logger.error(f"Worker {k} failed: {e}")
                raise WorkerFailureError(k, f"{e.__class__.__name__}: {e}") from e
    elif backend == "process":
        with ProcessPoolExecutor(max_workers=p) as executor:
            futures = [executor.submit(run_worker, L, tasks, config) for tasks in batches]
            for k, future in enumerate(futures, start=1):
                try:
                    results[k - 1] = future.result()
                except Exception as e:
                    logger.error(f"Worker {k} failed: {e}")
                    for pending in futures:
                        pending.cancel()
                    raise WorkerFailureError(k, f"{e.__class__.__name__}: {e}") from e
    else:
        raise ValueError(f"Unknown backend: {backend}")

    merged: List[Covering] = []
    times: List[float] = []
    counts: List[int] = []
    for k, (coverings, elapsed) in enumerate(results, start=1):
        logger.debug(f"Worker {k}: {len(batches[k - 1])} subtasks, {len(coverings)} coverings, {elapsed:.4f}s")
        merged.extend(coverings)
        times.append(elapsed)
        counts.append(len(coverings))
    merged.sort()

    report = RunReport(
        p=p,
        per_worker_time=times,
        per_worker_count=counts,
        estimation_seconds=estimation_seconds,
        strategy=schedule.strategy
    )
    logger.info(f"Parallel run p={p}: {report.total_coverings} coverings, T={report.T:.4f}s")
    return merged, report


def compute_metrics(baseline: RunReport, run: RunReport) -> ScalingMetrics:
    """
    Speedup S = T(1)/T(p), efficiency E = S/p and load levels s_k = T_k/T_sigma.

    Raises:
        ValueError: if the baseline is not a one-worker run
        TimerResolutionError: if a measured time is zero
    """
    if baseline.p != 1:
        raise ValueError(f"baseline must be a p=1 run, got p={baseline.p}")
    if run.T == 0 or baseline.T == 0:
        raise TimerResolutionError(
            "measured wall time is zero; the timer resolution is too coarse, rerun with repetitions"
        )

    S = baseline.T / run.T
    total = run.T_sigma
    return ScalingMetrics(
        p=run.p,
        S=S,
        E=S / run.p,
        s_k=[t / total for t in run.per_worker_time]
    )


class ParallelRunner:
    """Runs schedules with the backend and limits from the ``runner`` config section."""

    def __init__(self, config: Optional[Dict[str, Any]] = None, enum_config: Optional[EnumConfig] = None):
        config = config or {}
        self.backend: Backend = config.get('backend', 'process')
        self.allow_oversubscribe = config.get('allow_oversubscribe', False)
        self.enum_config = enum_config

    def run(self, matrix: BoolMatrix, schedule: Schedule,
            estimation_seconds: float = 0.0) -> Tuple[List[Covering], RunReport]:
        return run_parallel(
            matrix,
            schedule,
            config=self.enum_config,
            backend=self.backend,
            allow_oversubscribe=self.allow_oversubscribe,
            estimation_seconds=estimation_seconds
        )
