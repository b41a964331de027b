"""
Tests for the RUNC-M enumerator.
"""

import itertools
import sys
import unittest
from pathlib import Path

import numpy as np

# Add parent directory to path to import modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.dualization.oracle import brute_force_dualize, is_minimal_by_removal
from src.dualization.runcm import (
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
from src.dualization.schema import EnumConfig
from src.matrix.bitmatrix import BoolMatrix
from src.matrix.generator import GenSpec, derive_seeds, generate_matrix


def random_matrix(rng: np.random.Generator, m: int, n: int, density: float) -> BoolMatrix:
    return BoolMatrix.from_numpy(rng.random((m, n)) < density)


class TestCriterion(unittest.TestCase):
    """Tests for supporting rows, consistency and the covering criterion."""

    def setUp(self):
        """Set up test fixtures."""
        self.L = BoolMatrix.from_strings(["1100", "0110", "0011"])

    def test_supporting_rows(self):
        self.assertEqual(supporting_rows(self.L, (1, 3), 1).to_tuple(), (1,))
        self.assertEqual(supporting_rows(self.L, (1, 3), 3).to_tuple(), (2, 3))
        self.assertEqual(supporting_rows(self.L, (2, 3), 2).to_tuple(), (1,))
        with self.assertRaises(ValueError):
            supporting_rows(self.L, (1, 3), 2)

    def test_is_consistent(self):
        self.assertTrue(is_consistent(self.L, (1, 3)))
        self.assertTrue(is_consistent(self.L, (1, 4)))
        self.assertFalse(is_consistent(self.L, (1, 2)))
        self.assertFalse(is_consistent(self.L, (1, 2, 3)))
        with self.assertRaises(ValueError):
            is_consistent(self.L, ())

    def test_is_irreducible_covering(self):
        self.assertTrue(is_irreducible_covering(self.L, (2, 4)))
        self.assertFalse(is_irreducible_covering(self.L, (1, 2)))
        self.assertFalse(is_irreducible_covering(self.L, (1, 2, 4)))
        self.assertFalse(is_irreducible_covering(self.L, ()))

    def test_identity_has_one_covering(self):
        identity = BoolMatrix.from_numpy(np.eye(5, dtype=bool))
        self.assertEqual(dualize(identity), [(1, 2, 3, 4, 5)])

    def test_criterion_matches_removal_minimality_on_all_3x3(self):
        subsets = [c for size in range(1, 4) for c in itertools.combinations(range(1, 4), size)]
        for bits in range(1 << 9):
            rows = [[(bits >> (3 * i + k)) & 1 for k in range(3)] for i in range(3)]
            L = BoolMatrix.from_lists(rows)
            for H in subsets:
                self.assertEqual(is_irreducible_covering(L, H), is_minimal_by_removal(L, H), (rows, H))

    def test_compatibility_equals_consistency_of_extension(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            L = random_matrix(rng, 6, 7, 0.4)
            for size in (1, 2):
                for H in itertools.combinations(range(1, 8), size):
                    if not is_consistent(L, H):
                        continue
                    node = SearchNode.from_columns(L, H)
                    for u in node.C:
                        self.assertEqual(is_compatible(L, node, u), is_consistent(L, H + (u,)), (H, u))

    def test_incremental_supports_match_scratch(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            L = random_matrix(rng, 8, 9, 0.35)
            order = [int(j) for j in rng.permutation(9)[:4] + 1]
            node = SearchNode.from_columns(L, ())
            for u in order:
                node = node.extend(u)
                scratch = SearchNode.from_columns(L, node.H, node.C)
                self.assertEqual(node.support, scratch.support)
                self.assertEqual(node.R, scratch.R)


class TestEnumeration(unittest.TestCase):
    """Tests for full and per-subtask enumeration."""

    def setUp(self):
        """Set up test fixtures."""
        self.L = BoolMatrix.from_strings(["1100", "0110", "0011"])

    def test_example_order(self):
        self.assertEqual(dualize(self.L), [(1, 3), (2, 3), (2, 4)])

    def test_subtasks(self):
        self.assertEqual(list(enumerate_subtask(self.L, 1)), [(1, 3)])
        self.assertEqual(list(enumerate_subtask(self.L, 2)), [(2, 3), (2, 4)])
        self.assertEqual(list(enumerate_subtask(self.L, 4)), [])
        with self.assertRaises(ValueError):
            list(enumerate_subtask(self.L, 5))

    def test_zero_row_gives_nothing(self):
        L = BoolMatrix.from_strings(["110", "000"])
        self.assertEqual(dualize(L), [])
        self.assertEqual(list(enumerate_subtask(L, 1)), [])

    def test_zero_column_is_never_used(self):
        L = BoolMatrix.from_strings(["1010", "0110"])
        self.assertEqual(set(dualize(L)), {(3,), (1, 2)})
        self.assertEqual(list(enumerate_subtask(L, 4)), [])

    def test_single_column_covering(self):
        L = BoolMatrix.from_strings(["11", "10"])
        self.assertEqual(list(enumerate_subtask(L, 1)), [(1,)])

    def test_oracle_equivalence(self):
        rng = np.random.default_rng(2024)
        for trial in range(200):
            m = int(rng.integers(3, 13))
            n = int(rng.integers(3, 15))
            density = [0.2, 0.5, 0.8][trial % 3]
            L = random_matrix(rng, m, n, density)
            produced = dualize(L)
            self.assertEqual(len(produced), len(set(produced)), "duplicate coverings")
            self.assertEqual(set(produced), brute_force_dualize(L), (m, n, density, L.to_strings()))

    def test_subtask_partition(self):
        for seed in derive_seeds(99, 50):
            L = generate_matrix(GenSpec(m=10, n=12, seed=seed))
            whole = set(enumerate_coverings(L))
            union = set()
            total = 0
            for j in range(1, L.n + 1):
                part = list(enumerate_subtask(L, j))
                self.assertTrue(all(c[0] == j for c in part))
                union.update(part)
                total += len(part)
            self.assertEqual(union, whole)
            self.assertEqual(total, len(whole))

    def test_enumeration_rules_keep_output_set(self):
        rng = np.random.default_rng(7)
        rules = [
            EnumConfig(min_row_tie_break=tie, column_order=order)
            for tie in ("lowest", "highest") for order in ("ascending", "descending")
        ]
        for _ in range(30):
            L = random_matrix(rng, 7, 9, 0.4)
            expected = set(dualize(L))
            for rule in rules:
                produced = dualize(L, rule)
                self.assertEqual(len(produced), len(expected))
                self.assertEqual(set(produced), expected)


class TestEnumerationStats(unittest.TestCase):
    """Tests for the push-style entry point and its counters."""

    def setUp(self):
        """Set up test fixtures."""
        self.L = generate_matrix(GenSpec(m=8, n=10, forbid_zero_rows=True, seed=17))

    def test_counters(self):
        seen = []
        stats = run_enumeration(self.L, seen.append)
        self.assertEqual(stats.coverings, len(seen))
        self.assertEqual(set(seen), set(dualize(self.L)))
        self.assertEqual(stats.steps, stats.coverings + stats.dead_ends)
        self.assertFalse(stats.aborted)
        self.assertGreaterEqual(stats.nodes, 1)
        self.assertTrue(0.0 <= stats.redundancy < 1.0)

    def test_sink_abort(self):
        seen = []

        def sink(covering):
            seen.append(covering)
            return len(seen) < 2

        stats = run_enumeration(self.L, sink)
        self.assertTrue(stats.aborted)
        self.assertEqual(len(seen), 2)

    def test_enumerator_is_lazy(self):
        enumerator = RuncmEnumerator(self.L)
        stream = enumerator.iter_all()
        first = next(stream)
        self.assertEqual(enumerator.coverings, 1)
        self.assertEqual(first, dualize(self.L)[0])


if __name__ == '__main__':
    unittest.main()
