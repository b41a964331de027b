"""
Tests for parallel execution, scaling metrics and the benchmark harness.
"""

import json
import math
import os
import sys
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

import pandas as pd

# Add parent directory to path to import modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.dualization.oracle import exact_subtask_sizes
from src.dualization.runcm import dualize
from src.estimation.sampler import sample_eta
from src.estimation.schema import SampleConfig
from src.matrix.bitmatrix import BoolMatrix
from src.matrix.generator import GenSpec, derive_seeds, generate_matrix
from src.parallel.benchmark import (
    SUMMARY_COLUMNS,
    WORKER_COLUMNS,
    BenchmarkHarness,
    benchmark,
    detect_plateau
)
from src.parallel.runner import ParallelRunner, available_workers, compute_metrics, run_parallel
from src.parallel.scheduler import distribute_tasks
from src.parallel.schema import RunReport, Schedule
from src.utils.errors import TimerResolutionError, WorkerFailureError

# src.parallel re-exports a function named `benchmark`, which shadows the submodule
# when mock resolves dotted targets on Python 3.10; patch the module object directly.
_benchmark_module = sys.modules['src.parallel.benchmark']

RUN_SLOW_TESTS = os.environ.get('RUN_SLOW_TESTS') == '1'


class TestRunParallel(unittest.TestCase):
    """Tests for run_parallel."""

    def setUp(self):
        """Set up test fixtures."""
        self.L = BoolMatrix.from_strings(["1100", "0110", "0011"])

    def test_example_split(self):
        schedule = Schedule(assignment=[1, 2, 2, 2], predicted_load=[0.5, 0.5], p=2)
        coverings, report = run_parallel(self.L, schedule, backend="inline")
        self.assertEqual(coverings, [(1, 3), (2, 3), (2, 4)])
        self.assertEqual(report.per_worker_count, [1, 2])
        self.assertEqual(report.total_coverings, 3)

    def test_single_worker_matches_serial(self):
        L = generate_matrix(GenSpec(m=10, n=14, forbid_zero_rows=True, seed=6))
        schedule = distribute_tasks(1, L.n, [1 / L.n] * L.n)
        coverings, report = run_parallel(L, schedule, backend="inline")
        self.assertEqual(coverings, sorted(dualize(L)))
        self.assertEqual(report.p, 1)

    def test_output_invariance(self):
        for seed in derive_seeds(404, 20):
            L = generate_matrix(GenSpec(m=15, n=40, forbid_zero_rows=True, seed=seed))
            serial = set(dualize(L))
            estimate = sample_eta(L, SampleConfig(r=8, t=5, u=20, seed=seed))
            for p in (1, 2, 4):
                schedule = distribute_tasks(p, L.n, estimate.f_star)
                coverings, report = run_parallel(L, schedule, backend="inline")
                self.assertEqual(set(coverings), serial)
                self.assertEqual(len(coverings), len(serial))
                levels = [t / report.T_sigma for t in report.per_worker_time]
                self.assertAlmostEqual(sum(levels), 1.0, delta=1e-9)

    def test_process_backend(self):
        L = generate_matrix(GenSpec(m=12, n=20, forbid_zero_rows=True, seed=13))
        schedule = distribute_tasks(2, L.n, [1 / L.n] * L.n)
        coverings, report = run_parallel(L, schedule, backend="process", allow_oversubscribe=True)
        self.assertEqual(coverings, sorted(dualize(L)))
        self.assertEqual(len(report.per_worker_time), 2)

    def test_worker_counts_match_exact_sizes(self):
        L = generate_matrix(GenSpec(m=9, n=12, forbid_zero_rows=True, seed=21))
        counts = exact_subtask_sizes(L).counts
        schedule = distribute_tasks(3, L.n, [1 / L.n] * L.n)
        _, report = run_parallel(L, schedule, backend="inline")
        for k in range(1, 4):
            expected = sum(counts[j - 1] for j in schedule.tasks_for(k))
            self.assertEqual(report.per_worker_count[k - 1], expected)

    def test_worker_failure(self):
        schedule = Schedule(assignment=[1, 2, 2, 2], predicted_load=[0.5, 0.5], p=2)
        with patch('src.parallel.runner.run_worker', side_effect=RuntimeError("boom")):
            with self.assertRaises(WorkerFailureError) as ctx:
                run_parallel(self.L, schedule, backend="inline")
        self.assertEqual(ctx.exception.worker, 1)
        self.assertIn("boom", ctx.exception.diagnostic)

    def test_oversubscription_needs_flag(self):
        n = available_workers() + 1
        L = BoolMatrix.from_lists([[1] * n])
        schedule = Schedule(assignment=list(range(1, n + 1)), predicted_load=[1 / n] * n, p=n)
        with self.assertRaises(ValueError):
            run_parallel(L, schedule, backend="process")

    def test_schedule_must_match_matrix(self):
        schedule = Schedule(assignment=[1, 1], predicted_load=[1.0], p=1)
        with self.assertRaises(ValueError):
            run_parallel(self.L, schedule, backend="inline")

    def test_runner_from_config(self):
        runner = ParallelRunner({'backend': 'inline'})
        schedule = Schedule(assignment=[1, 1, 1, 1], predicted_load=[1.0], p=1, strategy="block")
        coverings, report = runner.run(self.L, schedule, estimation_seconds=0.25)
        self.assertEqual(len(coverings), 3)
        self.assertEqual(report.estimation_seconds, 0.25)
        self.assertEqual(report.strategy, "block")


class TestMetrics(unittest.TestCase):
    """Tests for compute_metrics."""

    def test_published_row(self):
        baseline = RunReport(p=1, per_worker_time=[3.95], per_worker_count=[10])
        run = RunReport(p=8, per_worker_time=[0.59] + [0.5] * 7, per_worker_count=[1] * 8)
        metrics = compute_metrics(baseline, run)
        self.assertAlmostEqual(metrics.S, 6.695, delta=0.001)
        self.assertAlmostEqual(metrics.E, 0.8369, delta=0.0005)
        self.assertEqual(metrics.ideal_speedup, 8)

    def test_plateau_row(self):
        baseline = RunReport(p=1, per_worker_time=[231.0], per_worker_count=[1])
        run = RunReport(p=32, per_worker_time=[13.8] * 32, per_worker_count=[0] * 32)
        metrics = compute_metrics(baseline, run)
        self.assertAlmostEqual(metrics.S, 16.74, delta=0.01)
        self.assertAlmostEqual(metrics.E, 0.523, delta=0.001)

    def test_load_levels(self):
        baseline = RunReport(p=1, per_worker_time=[3.0], per_worker_count=[3])
        run = RunReport(p=2, per_worker_time=[2.0, 1.0], per_worker_count=[2, 1])
        metrics = compute_metrics(baseline, run)
        self.assertEqual(run.T, 2.0)
        self.assertEqual(run.T_sigma, 3.0)
        self.assertAlmostEqual(metrics.s_k[0], 2 / 3)
        self.assertAlmostEqual(metrics.s_k[1], 1 / 3)
        self.assertAlmostEqual(metrics.load_spread, 2.0)

    def test_idle_worker_spread(self):
        baseline = RunReport(p=1, per_worker_time=[1.0], per_worker_count=[1])
        run = RunReport(p=2, per_worker_time=[1.0, 0.0], per_worker_count=[1, 0])
        self.assertEqual(compute_metrics(baseline, run).load_spread, math.inf)

    def test_errors(self):
        two = RunReport(p=2, per_worker_time=[1.0, 1.0], per_worker_count=[1, 1])
        with self.assertRaises(ValueError):
            compute_metrics(two, two)
        baseline = RunReport(p=1, per_worker_time=[1.0], per_worker_count=[1])
        zero = RunReport(p=2, per_worker_time=[0.0, 0.0], per_worker_count=[0, 0])
        with self.assertRaises(TimerResolutionError):
            compute_metrics(baseline, zero)

    def test_report_validation(self):
        with self.assertRaises(ValueError):
            RunReport(p=2, per_worker_time=[1.0], per_worker_count=[1, 1])


class TestBenchmark(unittest.TestCase):
    """Tests for the benchmark harness."""

    def test_detect_plateau(self):
        self.assertEqual(detect_plateau({1: 8.0, 2: 4.1, 4: 2.2, 8: 2.1}), 4)
        self.assertIsNone(detect_plateau({1: 8.0, 2: 4.0, 4: 2.0}))
        self.assertIsNone(detect_plateau({}))

    def test_small_grid(self):
        result = benchmark([(10, 14)], [2], seed=7, t=4, u=10, repetitions=1,
                           backend="inline", progress=False)
        self.assertEqual(list(result.summary.columns), SUMMARY_COLUMNS)
        self.assertEqual(list(result.per_worker.columns), WORKER_COLUMNS)
        self.assertEqual(list(result.summary['p']), [1, 2])
        self.assertAlmostEqual(result.summary.loc[0, 'S'], 1.0)
        self.assertEqual(len(result.per_worker), 3)
        for p, rows in result.per_worker.groupby('p'):
            self.assertAlmostEqual(rows['s_k'].sum(), 1.0, delta=1e-9)
        self.assertEqual(result.metadata['strategy'], "estimated")
        self.assertEqual(result.metadata['matrices'][0]['r'], 5)

    def test_skips_p_above_n(self):
        result = benchmark([(4, 3)], [1, 4], seed=1, t=2, u=5, repetitions=1,
                           strategy="round_robin", backend="inline", progress=False)
        self.assertEqual(list(result.summary['p']), [1])

    def test_exact_strategy_and_save(self):
        harness = BenchmarkHarness({'shapes': ['8x10'], 'p_values': [2], 'repetitions': 1, 'strategy': 'exact'},
                                   runner_config={'backend': 'inline'})
        result = harness.run(seed=3, progress=False)
        self.assertEqual(len(result.summary), 2)
        with tempfile.TemporaryDirectory() as tmp:
            paths = result.save(tmp)
            self.assertEqual(list(pd.read_csv(paths['summary']).columns), SUMMARY_COLUMNS)
            with open(paths['metadata']) as f:
                self.assertEqual(json.load(f)['seed'], 3)

    def test_oversubscribed_counts_skipped_up_front(self):
        with patch.object(_benchmark_module, 'available_workers', return_value=1), \
                patch.object(_benchmark_module, 'run_parallel', wraps=run_parallel) as runs:
            result = benchmark([(6, 8)], [1, 2], seed=5, t=2, u=5, repetitions=1,
                               backend="process", progress=False)
        self.assertEqual(list(result.summary['p']), [1])
        self.assertEqual(result.metadata['skipped_oversubscribed'], [2])
        self.assertEqual({call.args[1].p for call in runs.call_args_list}, {1})

    def test_oversubscribe_flag_keeps_counts(self):
        with patch.object(_benchmark_module, 'available_workers', return_value=1):
            result = benchmark([(6, 8)], [2], seed=5, t=2, u=5, repetitions=1, backend="process",
                               allow_oversubscribe=True, progress=False)
        self.assertEqual(list(result.summary['p']), [1, 2])
        self.assertEqual(result.metadata['skipped_oversubscribed'], [])

    def test_invalid_arguments(self):
        with self.assertRaises(ValueError):
            benchmark([(5, 5)], [1], seed=1, repetitions=0, progress=False)
        with self.assertRaises(ValueError):
            benchmark([(5, 5)], [1], seed=1, strategy="random", progress=False)

    @unittest.skipUnless(RUN_SLOW_TESTS and available_workers() >= 4,
                         "set RUN_SLOW_TESTS=1 on a machine with at least 4 CPUs")
    def test_speedup_and_plateau(self):
        result = benchmark([(30, 100)], [1, 2, 4], seed=2024, repetitions=3, progress=False)
        speedup = dict(zip(result.summary['p'], result.summary['S']))
        self.assertGreaterEqual(speedup[2], 1.5)
        self.assertGreaterEqual(speedup[4], 2.5)

        counts = [p for p in (1, 2, 4, 8, 16, 32) if p <= available_workers()]
        times = benchmark([(25, 60)], counts, seed=2024, repetitions=3, progress=False).summary
        self.assertIsNotNone(detect_plateau(dict(zip(times['p'], times['T_seconds']))))


if __name__ == '__main__':
    unittest.main()
