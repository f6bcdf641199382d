# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import unittest
from unittest.mock import MagicMock, patch

from marshmallow import ValidationError

from barrier_fw.config import TestConfig
from barrier_fw.entity import experiment_config
from barrier_fw.entity.experiment_config import (DoptSpec,
                                                 ExperimentConfigSchema,
                                                 FileSpec, MhpSpec)
from barrier_fw.entity.method import Method


class TestExperimentConfigSchema(unittest.TestCase):
    def test_defaults(self) -> None:
        with patch.object(experiment_config, 'get_config', return_value=TestConfig):
            experiment = ExperimentConfigSchema().load({'solvers': ['AFW-E', 'MG', 'AFW-E'],
                                                        'dopt': {'m': 6, 'n': 2}})
        self.assertEqual(experiment.solvers, [Method.AFW_E, Method.MG])
        self.assertEqual(experiment.dopt, DoptSpec(m=6, n=2))
        self.assertIsNone(experiment.mhp)
        self.assertEqual(experiment.epsilon, 1e-9)
        self.assertEqual(experiment.max_iterations, 5000)
        self.assertEqual(experiment.check_level, 'cheap')
        self.assertEqual(experiment.name, 'experiment')
        self.assertIsNone(experiment.output_dir)

    def test_defaults_follow_config(self) -> None:
        current = MagicMock(DEFAULT_EPSILON=1e-6, DEFAULT_CHECK_LEVEL='full')
        with patch.object(experiment_config, 'get_config', return_value=current):
            experiment = ExperimentConfigSchema().load({'solvers': ['AFW-E'], 'dopt': {'m': 6, 'n': 2}})
            explicit = ExperimentConfigSchema().load({'solvers': ['AFW-E'], 'dopt': {'m': 6, 'n': 2},
                                                      'epsilon': 1e-4, 'check_level': 'off'})
        self.assertEqual(experiment.epsilon, 1e-6)
        self.assertEqual(experiment.check_level, 'full')
        self.assertEqual(explicit.epsilon, 1e-4)
        self.assertEqual(explicit.check_level, 'off')

    def test_mhp_and_file_specs(self) -> None:
        experiment = ExperimentConfigSchema().load({
            'name': 'hawkes',
            'solvers': ['AFW-A', 'RSGM-B'],
            'mhp': {'m': 4, 't': 100.0, 'dimension': 3, 'regularization': 0.5, 'start': 'vertex'},
            'time_budget_s': 30.0,
        })
        self.assertEqual(experiment.mhp, MhpSpec(m=4, t=100.0, dimension=3, regularization=0.5, start='vertex'))
        self.assertEqual(experiment.time_budget_s, 30.0)

        experiment = ExperimentConfigSchema().load({'solvers': ['FW-E'],
                                                    'file': {'kind': 'simplexlog', 'path': 'rows.csv'}})
        self.assertEqual(experiment.file, FileSpec(kind='simplexlog', path='rows.csv'))

    def test_exactly_one_instance(self) -> None:
        with self.assertRaises(ValidationError) as context:
            ExperimentConfigSchema().load({'solvers': ['MG']})
        self.assertIn('instance', context.exception.messages)
        with self.assertRaises(ValidationError):
            ExperimentConfigSchema().load({'solvers': ['MG'], 'dopt': {'m': 6, 'n': 2}, 'mhp': {'m': 2, 't': 10.0}})

    def test_invalid_values(self) -> None:
        invalid = [
            {'solvers': [], 'dopt': {'m': 6, 'n': 2}},
            {'solvers': ['SGD'], 'dopt': {'m': 6, 'n': 2}},
            {'solvers': ['MG'], 'dopt': {'m': 2, 'n': 2}},
            {'solvers': ['MG'], 'dopt': {'m': 6, 'n': 2, 'start': 'vertex'}},
            {'solvers': ['MG'], 'mhp': {'m': 2, 't': 10.0, 'dimension': 3}},
            {'solvers': ['MG'], 'mhp': {'m': 2, 't': 10.0, 'radius': 1.0}},
            {'solvers': ['MG'], 'file': {'kind': 'lp', 'path': 'a.csv'}},
            {'solvers': ['MG'], 'dopt': {'m': 6, 'n': 2}, 'epsilon': 0.0},
            {'solvers': ['MG'], 'dopt': {'m': 6, 'n': 2}, 'check_level': 'paranoid'},
        ]
        for data in invalid:
            with self.assertRaises(ValidationError, msg=str(data)):
                ExperimentConfigSchema().load(data)


if __name__ == '__main__':
    unittest.main()
