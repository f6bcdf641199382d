# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import unittest
from unittest.mock import MagicMock, patch

from barrier_fw.entity import solver_config
from barrier_fw.entity.method import (AWAY_STEP_METHODS, EXACT_STEP_METHODS,
                                     FRANK_WOLFE_METHODS, Method, to_method)
from barrier_fw.entity.metrics_row import MetricsRow, MetricsRowSchema
from barrier_fw.entity.solver_config import (BaselineConfig, CheckLevel,
                                             SolverConfig, StepRule,
                                             to_check_level)
from barrier_fw.entity.trace_record import TraceRecord, TraceRecordSchema
from barrier_fw.exception import ConfigError, PreconditionError


class TestSolverConfig(unittest.TestCase):
    def test_labels(self) -> None:
        self.assertEqual(to_method(label=' afw-e '), Method.AFW_E)
        self.assertEqual(to_check_level(label='FULL'), CheckLevel.FULL)
        with self.assertRaises(ConfigError):
            to_method(label='SGD')
        with self.assertRaises(ConfigError):
            to_check_level(label='sometimes')

    def test_for_method(self) -> None:
        config = SolverConfig.for_method(Method.FW_A, epsilon=1e-6)
        self.assertEqual(config.step_rule, StepRule.ADAPTIVE)
        self.assertFalse(config.away_steps)
        self.assertEqual(config.epsilon, 1e-6)
        config = SolverConfig.for_method(Method.AFW_E)
        self.assertEqual(config.step_rule, StepRule.EXACT)
        self.assertTrue(config.away_steps)
        with self.assertRaises(ConfigError):
            SolverConfig.for_method(Method.MG)

    def test_for_method_covers_every_variant(self) -> None:
        for method in FRANK_WOLFE_METHODS:
            config = SolverConfig.for_method(method)
            self.assertEqual(config.away_steps, method in AWAY_STEP_METHODS, method)
            self.assertEqual(config.step_rule == StepRule.EXACT, method in EXACT_STEP_METHODS, method)

    def test_defaults_follow_config(self) -> None:
        current = MagicMock(DEFAULT_EPSILON=1e-6, DEFAULT_CHECK_LEVEL='off', DROP_THRESHOLD=1e-12)
        with patch.object(solver_config, 'get_config', return_value=current):
            config = SolverConfig.for_method(Method.AFW_A)
            explicit = SolverConfig(check_level=CheckLevel.FULL, drop_threshold=1e-10)
        self.assertEqual(config.epsilon, 1e-6)
        self.assertEqual(config.check_level, CheckLevel.OFF)
        self.assertEqual(config.drop_threshold, 1e-12)
        self.assertEqual(explicit.check_level, CheckLevel.FULL)
        self.assertEqual(explicit.drop_threshold, 1e-10)

        current.DEFAULT_CHECK_LEVEL = 'sometimes'
        with patch.object(solver_config, 'get_config', return_value=current):
            with self.assertRaises(ConfigError):
                SolverConfig()

    def test_validation(self) -> None:
        with self.assertRaises(PreconditionError):
            SolverConfig(epsilon=0.0)
        with self.assertRaises(PreconditionError):
            SolverConfig(max_iterations=0)
        with self.assertRaises(PreconditionError):
            BaselineConfig(method=Method.MG, smoothness=-1.0)

    def test_baseline_to_solver_config(self) -> None:
        config = BaselineConfig(method=Method.AFW_A, epsilon=1e-5, max_iterations=7,
                                time_budget_s=2.0).to_solver_config(check_level=CheckLevel.OFF)
        self.assertEqual(config, SolverConfig(step_rule=StepRule.ADAPTIVE, epsilon=1e-5, max_iterations=7,
                                              time_budget_s=2.0, check_level=CheckLevel.OFF))


class TestRecordSchemas(unittest.TestCase):
    def test_trace_record_dump(self) -> None:
        record = TraceRecord(k=3, objective=1.5, fw_gap=0.25, step_kind='AWAY', support_size=2, sparsity=2,
                             time_s=0.01, alpha=0.5)
        dumped = TraceRecordSchema().dump(record)
        self.assertEqual(dumped['k'], 3)
        self.assertEqual(dumped['step_kind'], 'AWAY')
        self.assertEqual(dumped['alpha'], 0.5)
        self.assertIsNone(dumped['r'])

    def test_metrics_row_round_trip(self) -> None:
        row = MetricsRow(method='MG', k=1, time_s=0.5, objective_gap=1e-3, fw_gap=2e-3, sparsity=4)
        self.assertEqual(MetricsRowSchema().load(MetricsRowSchema().dump(row)), row)


if __name__ == '__main__':
    unittest.main()
