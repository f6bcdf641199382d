# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import os
import tempfile
import unittest
from unittest.mock import MagicMock, patch

import pandas as pd
from click.testing import CliRunner

from barrier_fw import cli as cli_module
from barrier_fw import config
from barrier_fw.cli import (EXIT_ERROR, EXIT_INVARIANT_VIOLATION, EXIT_OK,
                            cli, main)
from barrier_fw.exception import ConstructionError


class TestCli(unittest.TestCase):
    def setUp(self) -> None:
        self.directory = tempfile.TemporaryDirectory()
        self.addCleanup(self.directory.cleanup)
        environ = patch.dict(os.environ)
        environ.start()
        self.addCleanup(environ.stop)
        os.environ.pop(config.OUTPUT_DIR_ENV, None)
        self.runner = CliRunner()

    def _path(self, name: str) -> str:
        return os.path.join(self.directory.name, name)

    def test_generators(self) -> None:
        result = self.runner.invoke(cli, ['gen-dopt', '--m', '8', '--n', '3', '--out', self._path('points.csv')])
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertEqual(pd.read_csv(self._path('points.csv'), header=None).shape, (8, 3))

        result = self.runner.invoke(cli, ['gen-mhp', '--m', '2', '--t', '50', '--seed', '3',
                                          '--out', self._path('arrivals.csv')])
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertEqual(list(pd.read_csv(self._path('arrivals.csv')).columns), ['time', 'dim'])

    def test_fstar_from_points(self) -> None:
        with open(self._path('points.csv'), 'w') as f:
            f.write('1,0\n0,1\n1,1\n')
        result = self.runner.invoke(cli, ['fstar', '--points', self._path('points.csv'), '--epsilon', '1e-9'])
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn('F*=1.09861228866811', result.output)
        self.assertIn('certified=True', result.output)

    def test_fstar_needs_one_source(self) -> None:
        result = self.runner.invoke(cli, ['fstar'])
        self.assertNotEqual(result.exit_code, 0)
        self.assertIn('Give either CONFIG_PATH or --points', result.output)

    def test_run_and_report(self) -> None:
        with open(self._path('experiment.yaml'), 'w') as f:
            f.write('name: cli\nsolvers: [AFW-E]\nepsilon: 1.0e-10\noutput_dir: {}\ndopt:\n  m: 8\n  n: 2\n'
                    .format(self.directory.name))
        result = self.runner.invoke(cli, ['run', self._path('experiment.yaml')])
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn('AFW-E', result.output)
        self.assertIn('converged', result.output)

        metrics_path = os.path.join(self.directory.name, 'cli', 'metrics_afw_e.csv')
        result = self.runner.invoke(cli, ['report', metrics_path])
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn('in the linear tail', result.output)

    def test_main_exit_codes(self) -> None:
        with open(self._path('experiment.yaml'), 'w') as f:
            f.write('solvers: [AFW-E]\ndopt:\n  m: 8\n  n: 2\n')
        argv = ['run', self._path('experiment.yaml')]
        with patch.object(cli_module, 'configure'):
            faulty = MagicMock()
            faulty.results = {}
            faulty.reference = MagicMock(fstar=1.0, converged=True)
            faulty.output_dir = self.directory.name
            faulty.faults = ['AFW-E: k=3: objective increased']
            with patch.object(cli_module, 'run_experiment', return_value=faulty):
                self.assertEqual(main(argv), EXIT_INVARIANT_VIOLATION)
            with patch.object(cli_module, 'run_experiment', side_effect=ConstructionError('no points')):
                self.assertEqual(main(argv), EXIT_ERROR)
            self.assertEqual(main(['run', self._path('missing.yaml')]), EXIT_ERROR)
            self.assertEqual(main(['gen-dopt', '--m', '4', '--n', '2', '--out', self._path('p.csv')]), EXIT_OK)


if __name__ == '__main__':
    unittest.main()
