"""
Parallel module: static schedules, multi-worker runs and scaling benchmarks.
"""

from .benchmark import BenchmarkHarness, BenchmarkResult, benchmark, detect_plateau
from .runner import ParallelRunner, available_workers, compute_metrics, run_parallel, run_worker
from .scheduler import (
    block_schedule,
    build_schedule,
    distribute_tasks,
    round_robin_schedule,
    schedule_makespan
)
from .schema import RunReport, ScalingMetrics, Schedule, format_schedule, parse_schedule

__all__ = [
    'BenchmarkHarness',
    'BenchmarkResult',
    'benchmark',
    'detect_plateau',
    'ParallelRunner',
    'available_workers',
    'compute_metrics',
    'run_parallel',
    'run_worker',
    'block_schedule',
    'build_schedule',
    'distribute_tasks',
    'round_robin_schedule',
    'schedule_makespan',
    'RunReport',
    'ScalingMetrics',
    'Schedule',
    'format_schedule',
    'parse_schedule'
]
