# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import unittest

import numpy as np

from barrier_fw.application.hawkes import (hawkes_simulate,
                                           mhp_random_parameters,
                                           spectral_radius)
from barrier_fw.exception import PreconditionError, SimulationError


class TestHawkesSimulation(unittest.TestCase):
    def test_deterministic_for_seed(self) -> None:
        mu, excitation = mhp_random_parameters(3, sparsity=0.5, seed=1)
        first = hawkes_simulate(mu, excitation, 200.0, seed=4)
        second = hawkes_simulate(mu, excitation, 200.0, seed=4)
        np.testing.assert_array_equal(first.times, second.times)
        np.testing.assert_array_equal(first.dims, second.dims)
        self.assertGreater(first.size, 0)
        self.assertTrue(np.all(np.diff(first.times) >= 0))
        self.assertLess(first.times[-1], 200.0)
        self.assertEqual(first.m, 3)

    def test_stationary_rate(self) -> None:
        # stationary intensity mu / (1 - a) = 4 events per unit time
        arrivals = hawkes_simulate(np.array([1.0]), np.array([[0.5]]), 2000.0, seed=0)
        self.assertAlmostEqual(arrivals.size / 2000.0, 4.0, delta=0.6)

    def test_poisson_without_excitation(self) -> None:
        arrivals = hawkes_simulate(np.array([2.0, 0.0]), np.zeros((2, 2)), 1000.0, seed=2)
        self.assertTrue(np.all(arrivals.dims == 0))
        self.assertAlmostEqual(arrivals.size / 1000.0, 2.0, delta=0.3)

    def test_invalid_parameters(self) -> None:
        with self.assertRaises(PreconditionError):
            hawkes_simulate(np.array([1.0]), np.array([[1.0]]), 10.0)
        with self.assertRaises(PreconditionError):
            hawkes_simulate(np.array([-1.0]), np.array([[0.5]]), 10.0)
        with self.assertRaises(PreconditionError):
            hawkes_simulate(np.array([1.0, 1.0]), np.array([[0.5]]), 10.0)
        with self.assertRaises(PreconditionError):
            hawkes_simulate(np.array([1.0]), np.array([[0.5]]), 0.0)

    def test_event_guard(self) -> None:
        with self.assertRaises(SimulationError):
            hawkes_simulate(np.array([5.0]), np.array([[0.5]]), 100.0, max_events=10)


class TestRandomParameters(unittest.TestCase):
    def test_radius_and_sparsity(self) -> None:
        mu, excitation = mhp_random_parameters(20, mu=0.2, sparsity=0.5, radius=0.8, seed=3)
        np.testing.assert_array_equal(mu, np.full(20, 0.2))
        self.assertAlmostEqual(spectral_radius(excitation), 0.8, places=10)
        self.assertTrue(np.all(excitation >= 0))
        self.assertGreater(np.mean(excitation == 0.0), 0.3)

    def test_invalid_settings(self) -> None:
        with self.assertRaises(PreconditionError):
            mhp_random_parameters(0)
        with self.assertRaises(PreconditionError):
            mhp_random_parameters(3, sparsity=1.0)
        with self.assertRaises(PreconditionError):
            mhp_random_parameters(3, radius=1.0)


if __name__ == '__main__':
    unittest.main()
