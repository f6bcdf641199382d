# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import os
import tempfile
import unittest
from unittest.mock import patch

import numpy as np
import pandas as pd
import yaml

from barrier_fw import config
from barrier_fw.entity.experiment_config import (DoptSpec, ExperimentConfig,
                                                 FileSpec, MhpSpec)
from barrier_fw.entity.method import Method
from barrier_fw.entity.step_kind import StopReason
from barrier_fw.exception import ConfigError, ConstructionError
from barrier_fw.harness.experiment import (LONG_FILE, METADATA_FILE,
                                           build_instance,
                                           load_experiment_config,
                                           resolve_output_dir, run_experiment)


class TestExperiment(unittest.TestCase):
    def setUp(self) -> None:
        self.directory = tempfile.TemporaryDirectory()
        self.addCleanup(self.directory.cleanup)
        environ = patch.dict(os.environ)
        environ.start()
        self.addCleanup(environ.stop)
        os.environ.pop(config.OUTPUT_DIR_ENV, None)

    def _path(self, *names: str) -> str:
        return os.path.join(self.directory.name, *names)

    def _dopt_experiment(self, **overrides: object) -> ExperimentConfig:
        settings = dict(name='small', solvers=[Method.AFW_E, Method.MG], dopt=DoptSpec(m=6, n=2, seed=3),
                        epsilon=1e-7, max_iterations=200, output_dir=self.directory.name)
        settings.update(overrides)
        return ExperimentConfig(**settings)

    def test_dopt_run_writes_outputs(self) -> None:
        result = run_experiment(self._dopt_experiment())

        self.assertEqual(result.output_dir, self._path('small'))
        self.assertTrue(result.reference.converged)
        self.assertEqual(result.faults, [])
        self.assertEqual(result.results['AFW-E'].stop_reason, StopReason.CONVERGED)
        self.assertLessEqual(result.results['MG'].final_objective, result.results['MG'].trace[0].objective)
        for name in ('metrics_afw_e.csv', 'metrics_mg.csv', 'trace_afw_e.csv', 'trace_mg.csv', LONG_FILE,
                     METADATA_FILE):
            self.assertTrue(os.path.isfile(self._path('small', name)), name)

        metrics = pd.read_csv(result.files['AFW-E'])
        self.assertEqual(list(metrics.columns), ['method', 'k', 'time_s', 'objective_gap', 'fw_gap', 'sparsity'])
        self.assertTrue(np.all(metrics['objective_gap'] >= -1e-7))
        self.assertLessEqual(metrics['fw_gap'].iloc[-1], 1e-7)

        with open(result.files['metadata']) as metadata_file:
            metadata = yaml.safe_load(metadata_file)
        self.assertEqual(metadata['name'], 'small')
        self.assertEqual(metadata['instance']['kind'], 'dopt')
        self.assertEqual(set(metadata['methods']), {'AFW-E', 'MG'})
        self.assertEqual(metadata['determinism_digest'], result.digest)
        self.assertNotIn('mhp', metadata)

    def test_runs_are_deterministic(self) -> None:
        first = run_experiment(self._dopt_experiment(solvers=[Method.AFW_A, Method.RSGM_F]))
        second = run_experiment(self._dopt_experiment(solvers=[Method.AFW_A, Method.RSGM_F]))
        self.assertEqual(first.digest, second.digest)

    def test_mhp_run_recovers_parameters(self) -> None:
        experiment = ExperimentConfig(name='hawkes',
                                      solvers=[Method.AFW_A, Method.RSGM_B],
                                      mhp=MhpSpec(m=2, t=200.0, mu=0.5, sparsity=0.5, seed=1, dimension=2,
                                                  start='vertex'),
                                      epsilon=1e-6,
                                      max_iterations=100,
                                      reference_max_iterations=5000,
                                      output_dir=self.directory.name)
        result = run_experiment(experiment)
        self.assertEqual(result.results['AFW-A'].trace[0].support_size, 1)
        with open(result.files['metadata']) as metadata_file:
            metadata = yaml.safe_load(metadata_file)
        recovered = metadata['mhp']
        self.assertEqual(recovered['dimension'], 2)
        self.assertEqual(len(recovered['recovered']['infectivity']), 2)
        self.assertGreater(recovered['recovered']['base_intensity'], 0.0)
        self.assertEqual(metadata['instance']['kind'], 'mhp')

    def test_output_dir_precedence(self) -> None:
        experiment = self._dopt_experiment(output_dir='from-config')
        self.assertEqual(resolve_output_dir(experiment), os.path.join('from-config', 'small'))
        os.environ[config.OUTPUT_DIR_ENV] = self.directory.name
        self.assertEqual(resolve_output_dir(experiment), self._path('small'))

    def test_build_errors(self) -> None:
        with self.assertRaises(ConstructionError):
            build_instance(self._dopt_experiment(dopt=None, file=FileSpec(kind='dopt', path=self._path('none.csv'))))
        with self.assertRaises(ConfigError):
            build_instance(self._dopt_experiment(dopt=DoptSpec(m=6, n=2, start='vertex')))

    def test_load_experiment_config(self) -> None:
        with open(self._path('good.yaml'), 'w') as f:
            f.write('name: tiny\nsolvers: [AFW-E, FW-E]\ndopt:\n  m: 5\n  n: 2\n')
        experiment = load_experiment_config(self._path('good.yaml'))
        self.assertEqual(experiment.name, 'tiny')
        self.assertEqual(experiment.solvers, [Method.AFW_E, Method.FW_E])

        with open(self._path('list.yaml'), 'w') as f:
            f.write('- AFW-E\n')
        with open(self._path('invalid.yaml'), 'w') as f:
            f.write('solvers: [AFW-E]\n')
        with open(self._path('broken.yaml'), 'w') as f:
            f.write('solvers: [AFW-E\n')
        for name in ('list.yaml', 'invalid.yaml', 'broken.yaml', 'missing.yaml'):
            with self.assertRaises(ConfigError, msg=name):
                load_experiment_config(self._path(name))

    def test_documented_configs_load(self) -> None:
        examples = os.path.join(os.path.dirname(__file__), os.pardir, os.pardir, os.pardir, 'docs', 'examples')
        loaded = {name: load_experiment_config(os.path.join(examples, name))
                  for name in sorted(os.listdir(examples)) if name.endswith('.yaml')}

        self.assertEqual(set(loaded), {'dopt_desk.yaml', 'mhp_desk.yaml', 'points_file.yaml'})
        self.assertEqual(loaded['dopt_desk.yaml'].dopt, DoptSpec(m=200, n=20, seed=7))
        self.assertEqual(loaded['mhp_desk.yaml'].mhp.start, 'vertex')
        self.assertEqual(loaded['points_file.yaml'].file.kind, 'dopt')
        self.assertEqual(loaded['points_file.yaml'].epsilon, 1e-8)


if __name__ == '__main__':
    unittest.main()
