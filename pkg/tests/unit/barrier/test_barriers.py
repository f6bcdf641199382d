# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import math
import unittest

import numpy as np

from barrier_fw.barrier import make_logdet_barrier, make_neglog_barrier
from barrier_fw.barrier.base_barrier import Barrier
from barrier_fw.barrier.logdet_barrier import LogdetBarrier, cholesky_factor
from barrier_fw.barrier.neglog_barrier import NeglogBarrier
from barrier_fw.exception import DomainViolationError


def _random_spd(rng: np.random.Generator, n: int) -> np.ndarray:
    factor = rng.normal(size=(n, n))
    return factor @ factor.T + n * np.eye(n)


def _random_symmetric(rng: np.random.Generator, n: int) -> np.ndarray:
    direction = rng.normal(size=(n, n))
    return 0.5 * (direction + direction.T)


class BarrierConsistencyMixin:
    """
    Finite-difference and homogeneity checks shared by the concrete barriers
    """
    barrier = None  # type: Barrier

    def sample_point(self) -> np.ndarray:
        raise NotImplementedError

    def sample_direction(self) -> np.ndarray:
        raise NotImplementedError

    def test_gradient_matches_central_difference(self) -> None:
        for _ in range(20):
            y, u = self.sample_point(), self.sample_direction()
            h = 1e-5 * (1.0 + np.max(np.abs(y)))
            numeric = (self.barrier.value(y + h * u) - self.barrier.value(y - h * u)) / (2.0 * h)
            analytic = self.barrier.pair(self.barrier.gradient(y), u)
            self.assertLessEqual(abs(numeric - analytic), 1e-5 * max(1.0, abs(analytic)))

    def test_hessian_matches_second_difference(self) -> None:
        for _ in range(20):
            y, u = self.sample_point(), self.sample_direction()
            h = 1e-4 * (1.0 + np.max(np.abs(y)))
            numeric = (self.barrier.value(y + h * u) - 2.0 * self.barrier.value(y)
                       + self.barrier.value(y - h * u)) / (h * h)
            analytic = self.barrier.hess_qform(y, u)
            self.assertLessEqual(abs(numeric - analytic), 1e-4 * max(1.0, abs(analytic)))

    def test_logarithmic_homogeneity(self) -> None:
        for t in self.rng.uniform(0.1, 10.0, size=20):
            y = self.sample_point()
            value = self.barrier.value(y)
            shifted = self.barrier.value(t * y)
            self.assertLessEqual(abs(shifted - value + self.barrier.theta * math.log(t)), 1e-9 * (1.0 + abs(value)))

    def test_self_pairing_identities(self) -> None:
        y = self.sample_point()
        self.assertAlmostEqual(self.barrier.pair(self.barrier.gradient(y), y), -self.barrier.theta, places=9)
        self.assertAlmostEqual(self.barrier.hess_qform(y, y), self.barrier.theta, places=9)


class TestNeglogBarrier(BarrierConsistencyMixin, unittest.TestCase):
    def setUp(self) -> None:
        self.rng = np.random.default_rng(3)
        self.barrier = make_neglog_barrier(4)

    def sample_point(self) -> np.ndarray:
        return self.rng.uniform(0.5, 5.0, size=4)

    def sample_direction(self) -> np.ndarray:
        return self.rng.normal(size=4)

    def test_values(self) -> None:
        barrier = NeglogBarrier(2)
        y = np.array([0.5, 0.5])
        self.assertAlmostEqual(barrier.value(y), 2.0 * math.log(2.0), places=12)
        np.testing.assert_allclose(barrier.gradient(y), [-2.0, -2.0])
        self.assertAlmostEqual(barrier.pair(barrier.gradient(y), y), -2.0, places=12)
        self.assertAlmostEqual(barrier.hess_qform(np.array([0.1, 7.0]), np.array([0.1, 7.0])), 2.0, places=12)
        self.assertAlmostEqual(barrier.local_norm(y, np.array([0.5, 0.0])), 1.0, places=12)

    def test_domain(self) -> None:
        barrier = NeglogBarrier(2)
        self.assertTrue(barrier.in_domain(np.array([1e-3, 2.0])))
        self.assertFalse(barrier.in_domain(np.array([0.0, 2.0])))
        self.assertFalse(barrier.in_domain(np.array([1.0, 2.0, 3.0])))
        with self.assertRaises(DomainViolationError):
            barrier.value(np.array([-1.0, 1.0]))
        with self.assertRaises(DomainViolationError):
            barrier.hess_qform(np.array([1.0, 1.0]), np.array([1.0]))
        with self.assertRaises(ValueError):
            NeglogBarrier(0)


class TestLogdetBarrier(BarrierConsistencyMixin, unittest.TestCase):
    def setUp(self) -> None:
        self.rng = np.random.default_rng(5)
        self.barrier = make_logdet_barrier(3)

    def sample_point(self) -> np.ndarray:
        return _random_spd(self.rng, 3)

    def sample_direction(self) -> np.ndarray:
        return _random_symmetric(self.rng, 3)

    def test_values(self) -> None:
        barrier = LogdetBarrier(2)
        self.assertEqual(barrier.value(np.eye(2)), 0.0)
        self.assertAlmostEqual(barrier.value(2.0 * np.eye(2)), -math.log(4.0), places=12)
        self.assertAlmostEqual(barrier.value(2.0 * np.eye(2)), barrier.value(np.eye(2)) - 2.0 * math.log(2.0),
                               places=12)
        np.testing.assert_allclose(barrier.gradient(2.0 * np.eye(2)), -0.5 * np.eye(2))
        self.assertEqual(barrier.theta, 2.0)

    def test_supplied_inverse_is_used(self) -> None:
        barrier = LogdetBarrier(2)
        y = np.array([[2.0, 1.0], [1.0, 2.0]])
        inverse = np.linalg.inv(y)
        np.testing.assert_allclose(barrier.gradient(y, inverse=inverse), barrier.gradient(y))
        u = np.array([[1.0, 0.0], [0.0, -1.0]])
        self.assertAlmostEqual(barrier.hess_qform(y, u, inverse=inverse), barrier.hess_qform(y, u), places=12)

    def test_domain(self) -> None:
        barrier = LogdetBarrier(2)
        self.assertTrue(barrier.in_domain(np.eye(2)))
        self.assertFalse(barrier.in_domain(np.array([[1.0, 1.0], [1.0, 1.0]])))
        self.assertFalse(barrier.in_domain(np.array([[1.0, 0.5], [0.0, 1.0]])))
        self.assertFalse(barrier.in_domain(-np.eye(2)))
        self.assertFalse(barrier.in_domain(np.eye(3)))
        self.assertIsNone(cholesky_factor(np.diag([1.0, 1e-20])))
        with self.assertRaises(DomainViolationError):
            barrier.value(np.zeros((2, 2)))


if __name__ == '__main__':
    unittest.main()
