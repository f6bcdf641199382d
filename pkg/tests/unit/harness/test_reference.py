# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import unittest
from unittest.mock import patch

import numpy as np

from barrier_fw.application.dopt import dopt_build, dopt_random
from barrier_fw.harness import reference
from barrier_fw.harness.reference import compute_reference_fstar
from tests.unit.fixtures.instances import (HALF_HALF, THREE_POINT_FSTAR,
                                           three_point_dopt)


class TestReferenceValue(unittest.TestCase):
    def setUp(self) -> None:
        reference._CACHE.get_cache_region(reference._REFERENCE_CACHE_REGION,
                                          reference._REFERENCE_CACHE_REGION).clear()

    def test_certified_value(self) -> None:
        instance = three_point_dopt()
        value = compute_reference_fstar(instance, 1e-9)
        self.assertTrue(value.converged)
        self.assertAlmostEqual(value.fstar, THREE_POINT_FSTAR, places=12)
        self.assertLessEqual(value.fw_gap, 1e-9)
        self.assertEqual(value.epsilon, 1e-9)
        # the caller's instance keeps its point
        np.testing.assert_array_equal(instance.weights, HALF_HALF)

    def test_certified_values_are_cached(self) -> None:
        with patch.object(reference, '_solve_reference', wraps=reference._solve_reference) as mock_solve:
            first = compute_reference_fstar(three_point_dopt(), 1e-9)
            second = compute_reference_fstar(three_point_dopt(), 1e-9)
            self.assertEqual(first, second)
            self.assertEqual(mock_solve.call_count, 1)

            compute_reference_fstar(three_point_dopt(), 1e-6)
            self.assertEqual(mock_solve.call_count, 2)

            compute_reference_fstar(three_point_dopt(), 1e-9, use_cache=False)
            self.assertEqual(mock_solve.call_count, 3)

    def test_uncertified_values_are_not_cached(self) -> None:
        instance = dopt_build(dopt_random(30, 4, seed=8))
        with patch.object(reference, '_solve_reference', wraps=reference._solve_reference) as mock_solve:
            value = compute_reference_fstar(instance, 1e-12, max_iterations=2)
            self.assertFalse(value.converged)
            self.assertEqual(value.iterations, 2)
            self.assertLessEqual(value.fstar, instance.objective())
            compute_reference_fstar(instance, 1e-12, max_iterations=2)
            self.assertEqual(mock_solve.call_count, 2)


if __name__ == '__main__':
    unittest.main()
