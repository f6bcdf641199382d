# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import logging
import os
import sys
from typing import List, Optional

import click
import numpy as np
import pandas as pd

from barrier_fw import DEFAULT_CONFIG_MODULE_CLASS, config, configure, get_config
from barrier_fw.application.data_io import (read_points_csv,
                                            write_arrivals_csv,
                                            write_points_csv)
from barrier_fw.application.dopt import DoptInstance, dopt_random
from barrier_fw.application.hawkes import (hawkes_simulate,
                                           mhp_random_parameters)
from barrier_fw.exception import (BarrierFWError, InsufficientDataError,
                                  InvariantViolationError)
from barrier_fw.harness.experiment import (build_instance,
                                           load_experiment_config,
                                           run_experiment)
from barrier_fw.harness.metrics import linear_fit, linear_tail, slope_ratio_report
from barrier_fw.harness.reference import compute_reference_fstar

LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVARIANT_VIOLATION = 2


@click.group()
def cli() -> None:
    """
    Away-step Frank-Wolfe for barrier objectives over polytopes.
    """
    pass


@cli.command()
@click.argument('config_path', type=click.Path(exists=True, dir_okay=False))
def run(config_path: str) -> None:
    """
    Runs the experiment described by a YAML config file.
    """
    result = run_experiment(load_experiment_config(config_path))
    for method, solver_result in result.results.items():
        click.echo('{:8s} {:16s} k={:<7d} F={:.12g} G={:.3e}'.format(
            method, solver_result.stop_reason.value, solver_result.iterations, solver_result.final_objective,
            solver_result.final_gap))
    click.echo('F*={:.12g} (certified: {}) outputs in {}'.format(result.reference.fstar, result.reference.converged,
                                                                 result.output_dir))
    faults = result.faults
    if faults:
        raise InvariantViolationError('{} invariant violations, first: {}'.format(len(faults), faults[0]))


@cli.command('gen-dopt')
@click.option('--m', 'm', type=int, required=True, help='Number of points')
@click.option('--n', 'n', type=int, required=True, help='Point dimension')
@click.option('--scale', type=float, default=10.0, show_default=True, help='Variance of the entries')
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--out', 'out_path', type=click.Path(dir_okay=False), required=True)
def gen_dopt(m: int, n: int, scale: float, seed: int, out_path: str) -> None:
    """
    Writes m random Gaussian points in R^n, one per row.
    """
    write_points_csv(dopt_random(m, n, scale, seed), out_path)
    click.echo('Wrote {} points of dimension {} to {}'.format(m, n, out_path))


@cli.command('gen-mhp')
@click.option('--m', 'm', type=int, required=True, help='Number of dimensions')
@click.option('--t', 't', type=float, required=True, help='Observation horizon')
@click.option('--mu', type=float, default=0.1, show_default=True, help='Base intensity of every dimension')
@click.option('--sparsity', type=float, default=0.9, show_default=True, help='Share of zero infectivities')
@click.option('--radius', type=float, default=0.9, show_default=True, help='Spectral radius of the infectivity')
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--out', 'out_path', type=click.Path(dir_okay=False), required=True)
def gen_mhp(m: int, t: float, mu: float, sparsity: float, radius: float, seed: int, out_path: str) -> None:
    """
    Simulates a Hawkes process with random sparse infectivity and writes its arrivals.
    """
    base, excitation = mhp_random_parameters(m, mu=mu, sparsity=sparsity, radius=radius, seed=seed)
    arrivals = hawkes_simulate(base, excitation, t, seed=seed,
                               max_events=getattr(get_config(), config.HAWKES_MAX_EVENTS))
    write_arrivals_csv(arrivals, out_path)
    click.echo('Wrote {} arrivals in {} dimensions up to t={} to {}'.format(arrivals.size, m, t, out_path))


@cli.command()
@click.argument('config_path', required=False, type=click.Path(exists=True, dir_okay=False))
@click.option('--points', 'points_path', type=click.Path(exists=True, dir_okay=False),
              help='D-optimal design points instead of an experiment config')
@click.option('--epsilon', type=float, default=None, help='FW gap certifying the reference value')
def fstar(config_path: Optional[str], points_path: Optional[str], epsilon: Optional[float]) -> None:
    """
    Computes the certified reference optimal value of an instance.
    """
    if (config_path is None) == (points_path is None):
        raise click.UsageError('Give either CONFIG_PATH or --points')
    if config_path is not None:
        experiment = load_experiment_config(config_path)
        built = build_instance(experiment)
        instance, start = built.instance, built.start
        epsilon = epsilon if epsilon is not None else experiment.epsilon
    else:
        instance = DoptInstance(read_points_csv(points_path),
                                refactor_period=getattr(get_config(), config.DOPT_REFACTOR_PERIOD))
        start = None
        epsilon = epsilon if epsilon is not None else getattr(get_config(), config.DEFAULT_EPSILON)
    reference = compute_reference_fstar(instance, epsilon, x0=start)
    click.echo('F*={:.15g} certified={} fw_gap={:.3e} iterations={}'.format(
        reference.fstar, reference.converged, reference.fw_gap, reference.iterations))


@cli.command()
@click.argument('metrics_path', type=click.Path(exists=True, dir_okay=False))
def report(metrics_path: str) -> None:
    """
    Linear-convergence report of one metrics CSV: fit of ln(objective gap) over the
    tail and the slope ratio of ln(FW gap) to ln(objective gap).
    """
    frame = pd.read_csv(metrics_path)
    objective_gaps = frame['objective_gap'].to_numpy(dtype=float)
    fw_gaps = frame['fw_gap'].to_numpy(dtype=float)
    tail = linear_tail(objective_gaps)
    click.echo('{} rows, {} in the linear tail'.format(len(frame), tail.size))
    try:
        fit = linear_fit(frame['k'].to_numpy(dtype=float)[tail], np.log(objective_gaps[tail]))
        click.echo('ln(objective gap): slope={:.6g} intercept={:.6g} R^2={:.4f}'.format(
            fit.slope, fit.intercept, fit.r_squared))
        click.echo('slope ratio={:.4f}'.format(slope_ratio_report(objective_gaps, fw_gaps)))
    except InsufficientDataError as e:
        click.echo('No linear-convergence report: {}'.format(e))


def main(argv: Optional[List[str]] = None) -> int:
    """
    Console entry point: 0 on success, 2 on an invariant violation, 1 on any other error.
    """
    configure(config_module_class=os.getenv('BARRIER_FW_CONFIG_MODULE_CLASS') or DEFAULT_CONFIG_MODULE_CLASS)
    try:
        cli.main(args=argv, prog_name='barrier-fw', standalone_mode=False)
    except InvariantViolationError as e:
        LOGGER.error('Invariant violation: {}'.format(e))
        return EXIT_INVARIANT_VIOLATION
    except click.ClickException as e:
        e.show()
        return EXIT_ERROR
    except click.Abort:
        return EXIT_ERROR
    except BarrierFWError as e:
        LOGGER.error('{}: {}'.format(type(e).__name__, e))
        return EXIT_ERROR
    except Exception:
        LOGGER.exception('Unexpected error')
        return EXIT_ERROR
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
