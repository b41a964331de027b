"""
Tests for the estimation module.
"""

import math
import os
import sys
import unittest
from collections import Counter
from itertools import combinations
from pathlib import Path

import numpy as np
import pandas as pd

# Add parent directory to path to import modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.dualization.oracle import exact_subtask_sizes
from src.estimation.chi_squared import (
    chi_squared_pvalue,
    chi_squared_statistic,
    chi_squared_test,
    regularized_lower_gamma,
    regularized_upper_gamma,
    support_dof
)
from src.estimation.sampler import SubtaskEstimator, draw_submatrix_coverings, floyd_sample, sample_eta
from src.estimation.schema import SampleConfig, format_estimate, parse_estimate
from src.estimation.validation import VALIDATION_COLUMNS, table1_layout, validation_experiment
from src.matrix.bitmatrix import BoolMatrix
from src.matrix.generator import GenSpec, derive_seeds, generate_matrix
from src.utils.errors import MatrixFormatError, SamplingError

RUN_SLOW_TESTS = os.environ.get('RUN_SLOW_TESTS') == '1'


class TestChiSquared(unittest.TestCase):
    """Tests for the statistic and its p-value."""

    def test_statistic_examples(self):
        self.assertEqual(chi_squared_statistic([0.2, 0.8], [0.2, 0.8], 50), 0.0)
        self.assertAlmostEqual(chi_squared_statistic([0.4, 0.6], [1 / 3, 2 / 3], 100), 2.0, places=9)
        self.assertEqual(chi_squared_statistic([0.9, 0.1], [1.0, 0.0], 10), math.inf)

    def test_statistic_ignores_empty_cells_without_mass(self):
        self.assertAlmostEqual(chi_squared_statistic([0.5, 0.5, 0.0], [0.5, 0.5, 0.0], 10), 0.0)

    def test_statistic_errors(self):
        with self.assertRaises(ValueError):
            chi_squared_statistic([0.5, 0.5], [1.0], 10)
        with self.assertRaises(ValueError):
            chi_squared_statistic([0.5, 0.6], [0.5, 0.5], 10)
        with self.assertRaises(ValueError):
            chi_squared_statistic([0.5, 0.5], [0.5, 0.5], 0)

    def test_statistic_permutation_invariant(self):
        f = [0.1, 0.2, 0.3, 0.4]
        nu = [0.25, 0.25, 0.2, 0.3]
        order = [2, 0, 3, 1]
        self.assertAlmostEqual(
            chi_squared_statistic(f, nu, 200),
            chi_squared_statistic([f[i] for i in order], [nu[i] for i in order], 200),
            places=12
        )

    def test_pvalue_reference_points(self):
        for dof, Z in ((1, 3.841), (2, 5.991), (10, 18.307)):
            self.assertAlmostEqual(chi_squared_pvalue(Z, dof), 0.05, delta=5e-4)

    def test_pvalue_closed_form_for_two_dof(self):
        for Z in np.linspace(0.0, 50.0, 201):
            self.assertAlmostEqual(chi_squared_pvalue(float(Z), 2), math.exp(-Z / 2), delta=1e-10)

    def test_pvalue_edges(self):
        self.assertEqual(chi_squared_pvalue(0.0, 3), 1.0)
        self.assertEqual(chi_squared_pvalue(math.inf, 3), 0.0)
        with self.assertRaises(ValueError):
            chi_squared_pvalue(-1.0, 3)
        with self.assertRaises(ValueError):
            chi_squared_pvalue(1.0, 0)

    def test_pvalue_decreasing(self):
        values = [chi_squared_pvalue(Z, 5) for Z in np.linspace(0.5, 40.0, 80)]
        self.assertTrue(all(a > b for a, b in zip(values, values[1:])))

    def test_incomplete_gamma_complement(self):
        for a in np.arange(0.5, 50.5, 0.5):
            for x in np.linspace(0.0, 200.0, 41):
                total = regularized_lower_gamma(float(a), float(x)) + regularized_upper_gamma(float(a), float(x))
                self.assertAlmostEqual(total, 1.0, delta=1e-12)

    def test_dof_modes(self):
        nu = [0.5, 0.5, 0.0, 0.0]
        self.assertEqual(support_dof(nu), 1)
        self.assertEqual(support_dof([1.0, 0.0]), 1)
        self.assertEqual(chi_squared_test(nu, nu, 10).dof, 1)
        self.assertEqual(chi_squared_test(nu, nu, 10, dof_mode="literal").dof, 3)
        with self.assertRaises(ValueError):
            chi_squared_test(nu, nu, 10, dof_mode="other")

    def test_infinite_statistic_result(self):
        result = chi_squared_test([0.9, 0.1], [1.0, 0.0], 10)
        self.assertEqual(result.Z, math.inf)
        self.assertEqual(result.p_value, 0.0)


class TestSampling(unittest.TestCase):
    """Tests for floyd_sample and sample_eta."""

    def setUp(self):
        """Set up test fixtures."""
        self.L = BoolMatrix.from_strings(["1100", "0110", "0011"])

    def test_floyd_sample(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            w = floyd_sample(rng, 10, 4)
            self.assertEqual(len(set(w)), 4)
            self.assertEqual(w, sorted(w))
            self.assertTrue(all(1 <= i <= 10 for i in w))
        with self.assertRaises(ValueError):
            floyd_sample(rng, 3, 4)

    def test_floyd_sample_is_uniform(self):
        rng = np.random.default_rng(2)
        draws = 9000
        counts = {pair: 0 for pair in combinations(range(1, 4), 2)}
        for _ in range(draws):
            counts[tuple(floyd_sample(rng, 3, 2))] += 1
        sigma = math.sqrt(draws * (1 / 3) * (2 / 3))
        for count in counts.values():
            self.assertLess(abs(count - draws / 3), 4 * sigma)

    def test_small_example_distribution(self):
        # Row pairs {1,2}, {1,3}, {2,3} give least-index laws (1/2, 1/2, 0, 0),
        # (1/2, 1/2, 0, 0) and (0, 1/2, 1/2, 0).
        expected = [1 / 3, 1 / 2, 1 / 6, 0.0]
        estimate = sample_eta(self.L, SampleConfig(r=2, t=6000, u=1, seed=42))
        for f, e in zip(estimate.f_star, expected):
            self.assertAlmostEqual(f, e, delta=0.03)
        self.assertEqual(estimate.f_star[3], 0.0)

    def test_pair_distribution(self):
        # Each row pair has probability 1/3 and its coverings split it evenly.
        expected = {
            ((1, 2), (2,)): 1 / 6, ((1, 2), (1, 3)): 1 / 6,
            ((1, 3), (1, 3)): 1 / 12, ((1, 3), (1, 4)): 1 / 12,
            ((1, 3), (2, 3)): 1 / 12, ((1, 3), (2, 4)): 1 / 12,
            ((2, 3), (3,)): 1 / 6, ((2, 3), (2, 4)): 1 / 6,
        }
        draws = 10000
        counts = Counter()
        for child in np.random.SeedSequence(77).spawn(draws):
            w, drawn, discarded = draw_submatrix_coverings(self.L, 2, 1, child)
            self.assertEqual(discarded, 0)
            counts[(w, drawn[0])] += 1
        self.assertEqual(set(counts), set(expected))
        for pair, probability in expected.items():
            sigma = math.sqrt(draws * probability * (1 - probability))
            self.assertLess(abs(counts[pair] - draws * probability), 4 * sigma, pair)

    def test_reproducible(self):
        config = SampleConfig(r=2, t=30, u=10, seed=5)
        first = sample_eta(self.L, config)
        second = sample_eta(self.L, config)
        self.assertEqual(first.f_star, second.f_star)
        self.assertEqual(first.sample, second.sample)
        self.assertAlmostEqual(sum(first.f_star), 1.0, places=12)
        self.assertEqual(len(first.sample), config.N)

    def test_worker_count_does_not_change_result(self):
        L = generate_matrix(GenSpec(m=8, n=10, forbid_zero_rows=True, seed=4))
        config = SampleConfig(r=4, t=6, u=20, seed=8)
        self.assertEqual(sample_eta(L, config).sample, sample_eta(L, config, workers=2).sample)

    def test_all_ones_is_uniform(self):
        L = BoolMatrix.from_lists([[1] * 5] * 6)
        estimate = sample_eta(L, SampleConfig(r=3, t=50, u=100, seed=3))
        for f in estimate.f_star:
            self.assertAlmostEqual(f, 0.2, delta=0.03)

    def test_r_above_m(self):
        with self.assertRaises(ValueError):
            sample_eta(self.L, SampleConfig(r=4, t=1, u=1, seed=1))

    def test_zero_row_fails(self):
        L = BoolMatrix.from_strings(["11", "00"])
        with self.assertRaises(SamplingError):
            sample_eta(L, SampleConfig(r=2, t=1, u=1, seed=1), max_consecutive_discards=10)

    def test_discards_are_counted(self):
        L = BoolMatrix.from_strings(["11", "00", "01"])
        estimate = sample_eta(L, SampleConfig(r=1, t=200, u=1, seed=9))
        self.assertGreater(estimate.discarded, 0)
        self.assertAlmostEqual(sum(estimate.f_star), 1.0, places=12)

    def test_consistency_at_full_rows(self):
        checked = 0
        for seed in derive_seeds(31, 200):
            L = generate_matrix(GenSpec(m=8, n=10, forbid_zero_rows=True, seed=seed))
            exact = exact_subtask_sizes(L, method="runcm")
            if exact.total < 5:
                continue
            estimate = sample_eta(L, SampleConfig(r=8, t=1, u=5000, seed=seed))
            error = max(abs(f - nu) for f, nu in zip(estimate.f_star, exact.as_floats()))
            self.assertLessEqual(error, 0.03)
            checked += 1
            if checked == 20:
                break
        self.assertEqual(checked, 20)

    def test_estimator_defaults(self):
        L = generate_matrix(GenSpec(m=7, n=9, forbid_zero_rows=True, seed=2))
        estimator = SubtaskEstimator({'t': 4, 'u': 5})
        config = estimator.sample_config(L, seed=1)
        self.assertEqual((config.r, config.t, config.u), (4, 4, 5))
        result = estimator.estimate(L, seed=1)
        self.assertEqual(len(result.f_star), 9)


class TestEstimateFormat(unittest.TestCase):
    """Tests for the estimate dump."""

    def test_round_trip(self):
        values = [0.25, 0.5, 0.25, 0.0]
        text = format_estimate(values)
        self.assertTrue(text.startswith("1 0.250000000000000\n"))
        self.assertEqual(parse_estimate(text), values)

    def test_malformed(self):
        for text, line in (("1 0.5\n3 0.5\n", 2), ("1 x\n", 1), ("", 1), ("1 0.5 2\n", 1)):
            with self.assertRaises(MatrixFormatError) as ctx:
                parse_estimate(text)
            self.assertEqual(ctx.exception.line_number, line)


class TestValidation(unittest.TestCase):
    """Tests for the validation experiment and its table layout."""

    def test_small_experiment(self):
        frame = validation_experiment([(6, 8)], [3, 6, 7], matrices_per_shape=2, t=5, u=20, seed=12)
        self.assertEqual(list(frame.columns), VALIDATION_COLUMNS)
        self.assertEqual(list(frame['r']), [3, 6])
        self.assertTrue(((frame['median_pvalue'] >= 0) & (frame['median_pvalue'] <= 1)).all())
        self.assertTrue((frame['matrices'] == 2).all())

    def test_reproducible(self):
        first = validation_experiment([(5, 6)], [3], matrices_per_shape=2, t=4, u=10, seed=3)
        second = validation_experiment([(5, 6)], [3], matrices_per_shape=2, t=4, u=10, seed=3)
        pd.testing.assert_frame_equal(first, second)

    def test_table1_layout(self):
        frame = pd.DataFrame([
            {'shape': '30x120', 'r': 5, 'median_Z': 412.3, 'median_pvalue': 1e-9,
             'median_max_abs_error': 0.1, 'matrices': 20},
            {'shape': '30x120', 'r': 15, 'median_Z': 98.0, 'median_pvalue': 0.42,
             'median_max_abs_error': 0.01, 'matrices': 20},
            {'shape': '70x70', 'r': 5, 'median_Z': 80.0, 'median_pvalue': 0.003,
             'median_max_abs_error': 0.1, 'matrices': 20},
        ])
        layout = table1_layout(frame)
        self.assertEqual(list(layout.columns), ['r', '30x120', '70x70'])
        self.assertEqual(layout.loc[0, '30x120'], "(412.3, <1e-4)")
        self.assertEqual(layout.loc[1, '30x120'], "(98.0, 0.4200)")
        self.assertEqual(layout.loc[0, '70x70'], "(80.0, 0.0030)")
        self.assertEqual(layout.loc[1, '70x70'], "")

    @unittest.skipUnless(RUN_SLOW_TESTS, "set RUN_SLOW_TESTS=1 to run")
    def test_statistic_decreases_with_r(self):
        frame = validation_experiment([(20, 60)], [6, 10, 14, 18], matrices_per_shape=5, t=20, u=50, seed=2024)
        z = list(frame['median_Z'])
        self.assertTrue(all(a > b for a, b in zip(z, z[1:])), z)
        p = dict(zip(frame['r'], frame['median_pvalue']))
        self.assertGreaterEqual(p[10], 10 * p[6])


if __name__ == '__main__':
    unittest.main()
