# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import math
import unittest

import numpy as np

from barrier_fw.application.dopt import dopt_build, dopt_random
from barrier_fw.application.simplex_log import newton_linesearch, simplexlog_build
from barrier_fw.entity.step_kind import StepKind
from barrier_fw.exception import PreconditionError
from barrier_fw.solver.linesearch import (adaptive_stepsize,
                                          bisection_linesearch,
                                          golden_section_search)
from barrier_fw.solver.problem_instance import Direction
from tests.unit.fixtures.instances import (drop_instance, identity_neglog,
                                           random_rows, random_simplex_point,
                                           three_point_dopt)


def _fw_direction(atom_id: int) -> Direction:
    return Direction(kind=StepKind.FW, atom_id=atom_id, max_step=1.0)


class TestAdaptiveStepsize(unittest.TestCase):
    def test_three_point_value(self) -> None:
        self.assertAlmostEqual(adaptive_stepsize(2.0, math.sqrt(10.0), 1.0), 0.122515, places=6)

    def test_zero_curvature(self) -> None:
        self.assertEqual(adaptive_stepsize(1.0, 0.0, 0.7), 0.7)

    def test_step_stays_in_dikin_ellipsoid(self) -> None:
        rng = np.random.default_rng(1)
        for r, local_norm, max_step in rng.uniform(1e-6, 100.0, size=(500, 3)):
            alpha = adaptive_stepsize(r, local_norm, max_step)
            self.assertLessEqual(alpha, max_step)
            self.assertLessEqual(alpha * local_norm, r / (r + local_norm) * (1.0 + 1e-12))
            self.assertLess(alpha * local_norm, 1.0)

    def test_invalid_arguments(self) -> None:
        with self.assertRaises(PreconditionError):
            adaptive_stepsize(0.0, 1.0, 1.0)
        with self.assertRaises(PreconditionError):
            adaptive_stepsize(1.0, -1.0, 1.0)
        with self.assertRaises(PreconditionError):
            adaptive_stepsize(1.0, 1.0, 0.0)


class TestExactLinesearch(unittest.TestCase):
    def test_golden_section_on_parabola(self) -> None:
        self.assertAlmostEqual(golden_section_search(lambda alpha: (alpha - 0.3) ** 2, 0.0, 1.0, 1e-12), 0.3,
                               places=9)

    def test_dopt_closed_form_matches_oracle(self) -> None:
        instance = three_point_dopt()
        direction = _fw_direction(2)
        closed_form = instance.closed_form_linesearch(direction)
        self.assertAlmostEqual(closed_form, 1.0 / 3.0, places=15)
        oracle = golden_section_search(lambda alpha: instance.decrement_along(direction, alpha), 0.0, 0.99, 1e-12)
        # function-value comparisons resolve the minimizer to about sqrt(machine epsilon)
        self.assertAlmostEqual(closed_form, oracle, delta=1e-6)

    def test_dopt_closed_forms_match_oracle_on_random_states(self) -> None:
        rng = np.random.default_rng(2)
        for state in range(100):
            instance = dopt_build(dopt_random(12, 4, seed=state), rng.dirichlet(np.ones(12)))
            beta = instance.weights
            scores = instance.scores
            away_atom = int(np.argmin(scores))
            directions = (_fw_direction(int(np.argmax(scores))),
                          Direction(kind=StepKind.AWAY, atom_id=away_atom,
                                    max_step=beta[away_atom] / (1.0 - beta[away_atom])))
            for direction in directions:
                closed_form = min(instance.closed_form_linesearch(direction), direction.max_step)
                upper = 0.99 if direction.is_fw else direction.max_step
                oracle = golden_section_search(lambda alpha: instance.decrement_along(direction, alpha),
                                               0.0, upper, 1e-12)
                self.assertAlmostEqual(closed_form, oracle, delta=1e-8, msg='state {} {}'.format(state, direction))

    def test_bisection_shrinks_into_domain(self) -> None:
        # alpha = 1 makes M rank one, outside the domain
        instance = three_point_dopt()
        direction = _fw_direction(2)
        self.assertFalse(instance.in_domain_along(direction, 1.0))
        self.assertAlmostEqual(bisection_linesearch(instance, direction), 1.0 / 3.0, delta=1e-9)

    def test_bisection_matches_oracle_on_neglog_instance(self) -> None:
        rows = random_rows(25, 6, seed=9)
        for seed in range(10):
            instance = simplexlog_build(rows, random_simplex_point(6, seed=seed))
            direction = _fw_direction(int(np.argmin(instance.atom_gradients())))
            alpha = bisection_linesearch(instance, direction)
            oracle = golden_section_search(lambda step: instance.decrement_along(direction, step), 0.0, 1.0, 1e-12)
            self.assertAlmostEqual(alpha, oracle, delta=1e-6)
            self.assertAlmostEqual(newton_linesearch(instance._ratios(direction), 1.0), alpha, delta=1e-9)

    def test_boundary_optimum(self) -> None:
        instance = drop_instance()
        direction = Direction(kind=StepKind.AWAY, atom_id=0, max_step=1.0)
        self.assertLess(instance.slope_along(direction, 1.0), 0.0)
        self.assertEqual(bisection_linesearch(instance, direction), 1.0)
        self.assertEqual(instance.closed_form_linesearch(direction), 1.0)

    def test_non_descent_direction(self) -> None:
        instance = identity_neglog([0.5, 0.5])
        with self.assertRaises(PreconditionError):
            bisection_linesearch(instance, _fw_direction(0))


if __name__ == '__main__':
    unittest.main()
