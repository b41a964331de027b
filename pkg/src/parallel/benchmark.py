"""
Scaling benchmark: random matrices, estimated schedules, timed parallel runs.

For every shape one matrix is generated, its subtask sizes are estimated once,
and for every worker count p a schedule is built and run ``repetitions`` times;
the run with the median T(p) represents the (shape, p) cell.
"""

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import pandas as pd
from tqdm import tqdm

from ..dualization.oracle import exact_subtask_sizes
from ..dualization.schema import EnumConfig
from ..estimation.sampler import sample_eta
from ..estimation.schema import SampleConfig
from ..matrix.bitmatrix import BoolMatrix
from ..matrix.generator import GenSpec, derive_seeds, generate_matrix
from ..utils.errors import DualizationError
from ..utils.helpers import ensure_dir, format_shape, parse_shape, save_csv, save_json
from ..utils.logger import get_logger
from .runner import available_workers, compute_metrics, run_parallel
from .scheduler import build_schedule
from .schema import RunReport

logger = get_logger(__name__)

SUMMARY_COLUMNS = ['shape', 'n_cols', 'p', 'T_seconds', 'S', 'E', 'estimation_seconds', 'repetitions']
WORKER_COLUMNS = ['shape', 'p', 'k', 'T_k', 's_k', 'count_k']
BENCH_STRATEGIES = ("estimated", "lpt", "exact", "round_robin", "block")


@dataclass
class BenchmarkResult:
    """Benchmark tables plus the parameters needed to reproduce them."""
    summary: pd.DataFrame
    per_worker: pd.DataFrame
    metadata: Dict[str, Any] = field(default_factory=dict)

    def save(self, output_dir: Union[str, Path], prefix: str = "bench") -> Dict[str, Path]:
        output_dir = ensure_dir(output_dir)
        paths = {
            'summary': save_csv(self.summary, output_dir / f"{prefix}_summary.csv"),
            'per_worker': save_csv(self.per_worker, output_dir / f"{prefix}_workers.csv"),
            'metadata': output_dir / f"{prefix}_metadata.json"
        }
        save_json(self.metadata, paths['metadata'])
        return paths


def detect_plateau(times: Dict[int, float], tolerance: float = 0.9) -> Optional[int]:
    """
    Smallest p with both p and 2p measured and T(2p) >= tolerance * T(p).

    Returns:
        The plateau threshold p*, or None if doubling always helped
    """
    for p in sorted(times):
        if 2 * p in times and times[2 * p] >= tolerance * times[p]:
            return p
    return None


def _median_report(reports: List[RunReport]) -> RunReport:
    return sorted(reports, key=lambda report: report.T)[len(reports) // 2]


def _subtask_sizes(matrix: BoolMatrix,
                   strategy: str,
                   seed: int,
                   t: int,
                   u: int,
                   r: Optional[int],
                   estimator_workers: int,
                   enum_config: Optional[EnumConfig]) -> Tuple[Optional[List[float]], float, Optional[int]]:
    """Sizes the schedule is built from, the seconds spent on them, and the r used."""
    started = time.perf_counter()
    if strategy in ("round_robin", "block"):
        return None, 0.0, None
    if strategy == "exact":
        sizes = exact_subtask_sizes(matrix, method="runcm", config=enum_config)
        return sizes.as_floats(), time.perf_counter() - started, None

    r = r if r is not None else SampleConfig.default_r(matrix.m)
    estimate = sample_eta(matrix, SampleConfig(r=r, t=t, u=u, seed=seed),
                          enum_config=enum_config, workers=estimator_workers)
    return estimate.f_star, time.perf_counter() - started, r


def benchmark(shapes: Sequence[Tuple[int, int]],
              p_values: Sequence[int],
              seed: int,
              t: int = 20,
              u: int = 50,
              r: Optional[int] = None,
              repetitions: int = 3,
              strategy: str = "estimated",
              density: float = 0.5,
              forbid_zero_rows: bool = True,
              backend: str = "process",
              allow_oversubscribe: bool = False,
              estimator_workers: int = 1,
              enum_config: Optional[EnumConfig] = None,
              progress: bool = True) -> BenchmarkResult:
    """
    Measure T(p), S(p), E(p) and s_k(p) over a grid of shapes and worker counts.

    A p=1 baseline is always run, even when 1 is not in ``p_values``; worker
    counts above n are skipped for that shape. With the process backend, worker
    counts above the available CPUs are dropped before any work starts unless
    ``allow_oversubscribe`` is set.

    Args:
        shapes: (m, n) pairs
        p_values: Worker counts
        seed: Master seed; matrix and sampling seeds are derived from it
        t, u: Sampling parameters of the estimator
        r: Submatrix rows; defaults to ceil(m/2) per shape
        repetitions: Runs per (shape, p); the median T(p) is reported
        strategy: Schedule strategy; ``exact`` uses the exact subtask sizes
        density: Bernoulli parameter of the generated matrices
        forbid_zero_rows: Redraw all-zero rows
        backend: Runner backend
        allow_oversubscribe: Permit more workers than CPUs
        estimator_workers: Processes for the sampling phase
        enum_config: Enumeration rules
        progress: Show a progress bar
    """
    if repetitions < 1:
        raise ValueError(f"repetitions must be positive, got {repetitions}")
    if strategy not in BENCH_STRATEGIES:
        raise ValueError(f"Unknown strategy {strategy!r}; expected one of {', '.join(BENCH_STRATEGIES)}")
    if any(p < 1 for p in p_values):
        raise ValueError(f"worker counts must be positive, got {list(p_values)}")

    worker_counts = sorted(set(p_values) | {1})
    oversubscribed: List[int] = []
    if backend == "process" and not allow_oversubscribe:
        cpus = available_workers()
        oversubscribed = [p for p in worker_counts if p > cpus]
        if oversubscribed:
            logger.warning(f"Skipping p={oversubscribed}: more workers than the {cpus} available CPUs "
                           f"(allow_oversubscribe runs them anyway)")
        worker_counts = [p for p in worker_counts if p <= cpus]
    shape_seeds = derive_seeds(seed, len(shapes))
    summary_rows: List[Dict[str, Any]] = []
    worker_rows: List[Dict[str, Any]] = []
    metadata: Dict[str, Any] = {
        'seed': seed,
        'shapes': [format_shape(m, n) for m, n in shapes],
        'p_values': worker_counts,
        'skipped_oversubscribed': oversubscribed,
        't': t,
        'u': u,
        'repetitions': repetitions,
        'strategy': strategy,
        'density': density,
        'forbid_zero_rows': forbid_zero_rows,
        'backend': backend,
        'matrices': []
    }

    total_cells = len(shapes) * len(worker_counts)
    bar = tqdm(total=total_cells, desc="Benchmark", disable=not progress)

    for (m, n), shape_seed in zip(shapes, shape_seeds):
        shape = format_shape(m, n)
        matrix_seed, sample_seed = derive_seeds(shape_seed, 2)
        matrix = generate_matrix(GenSpec(m=m, n=n, density=density,
                                         forbid_zero_rows=forbid_zero_rows, seed=matrix_seed))
        sizes, estimation_seconds, used_r = _subtask_sizes(
            matrix, strategy, sample_seed, t, u, r, estimator_workers, enum_config
        )
        logger.info(f"{shape}: subtask sizes ({strategy}) ready in {estimation_seconds:.3f}s")
        metadata['matrices'].append({
            'shape': shape,
            'matrix_seed': matrix_seed,
            'sample_seed': sample_seed,
            'r': used_r,
            'estimation_seconds': estimation_seconds
        })

        baseline: Optional[RunReport] = None
        expected_total: Optional[int] = None
        for p in worker_counts:
            bar.update(1)
            if p > n:
                logger.warning(f"Skipping p={p} for {shape}: more workers than subtasks")
                continue

            schedule_strategy = "estimated" if strategy == "exact" else strategy
            schedule = build_schedule(schedule_strategy, p, n, sizes)
            reports = []
            for _ in range(repetitions):
                _, report = run_parallel(matrix, schedule, enum_config, backend=backend,
                                         allow_oversubscribe=allow_oversubscribe,
                                         estimation_seconds=estimation_seconds)
                reports.append(report.model_copy(update={'strategy': strategy}))
            report = _median_report(reports)

            if expected_total is None:
                expected_total = report.total_coverings
            elif report.total_coverings != expected_total:
                logger.error(f"{shape} p={p}: {report.total_coverings} coverings, expected {expected_total}")
                raise DualizationError(
                    f"covering count changed with p on {shape}: {report.total_coverings} != {expected_total}"
                )
            if p == 1:
                baseline = report

            metrics = compute_metrics(baseline, report)
            summary_rows.append({
                'shape': shape,
                'n_cols': n,
                'p': p,
                'T_seconds': report.T,
                'S': metrics.S,
                'E': metrics.E,
                'estimation_seconds': estimation_seconds,
                'repetitions': repetitions
            })
            for k, (elapsed, level, count) in enumerate(
                    zip(report.per_worker_time, metrics.s_k, report.per_worker_count), start=1):
                worker_rows.append({
                    'shape': shape,
                    'p': p,
                    'k': k,
                    'T_k': elapsed,
                    's_k': level,
                    'count_k': count
                })
            logger.info(f"{shape} p={p}: T={report.T:.4f}s S={metrics.S:.3f} E={metrics.E:.3f}")

    bar.close()
    summary = pd.DataFrame(summary_rows, columns=SUMMARY_COLUMNS)
    for shape in summary['shape'].unique():
        rows = summary[summary['shape'] == shape]
        plateau = detect_plateau(dict(zip(rows['p'], rows['T_seconds'])))
        if plateau is not None:
            logger.info(f"{shape}: T(p) stops improving beyond p*={plateau}")

    return BenchmarkResult(
        summary=summary,
        per_worker=pd.DataFrame(worker_rows, columns=WORKER_COLUMNS),
        metadata=metadata
    )


class BenchmarkHarness:
    """Runs :func:`benchmark` with defaults from the ``benchmark`` and ``estimator`` config sections."""

    def __init__(self,
                 config: Optional[Dict[str, Any]] = None,
                 estimator_config: Optional[Dict[str, Any]] = None,
                 runner_config: Optional[Dict[str, Any]] = None,
                 enum_config: Optional[EnumConfig] = None):
        config = config or {}
        estimator_config = estimator_config or {}
        runner_config = runner_config or {}
        self.shapes = config.get('shapes', ['25x60', '25x80', '30x60', '30x80'])
        self.p_values = config.get('p_values', [1, 2, 4, 8])
        self.repetitions = config.get('repetitions', 3)
        self.strategy = config.get('strategy', 'estimated')
        self.density = config.get('density', 0.5)
        self.forbid_zero_rows = config.get('forbid_zero_rows', True)
        self.output_dir = config.get('output_dir', 'results')
        self.t = estimator_config.get('t', 20)
        self.u = estimator_config.get('u', 50)
        self.estimator_workers = estimator_config.get('workers', 1)
        self.backend = runner_config.get('backend', 'process')
        self.allow_oversubscribe = runner_config.get('allow_oversubscribe', False)
        self.enum_config = enum_config

    def run(self, seed: int, **overrides) -> BenchmarkResult:
        """Run the configured grid; keyword arguments override any :func:`benchmark` parameter."""
        params = {
            'shapes': [parse_shape(s) for s in self.shapes],
            'p_values': self.p_values,
            'seed': seed,
            't': self.t,
            'u': self.u,
            'repetitions': self.repetitions,
            'strategy': self.strategy,
            'density': self.density,
            'forbid_zero_rows': self.forbid_zero_rows,
            'backend': self.backend,
            'allow_oversubscribe': self.allow_oversubscribe,
            'estimator_workers': self.estimator_workers,
            'enum_config': self.enum_config
        }
        params.update({key: value for key, value in overrides.items() if value is not None})
        return benchmark(**params)
