# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import logging
import os
import platform
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional

import attr
import numpy as np
import pandas as pd
import scipy
import yaml
from marshmallow import ValidationError

from barrier_fw import __version__, config, get_config
from barrier_fw.application.data_io import (read_arrivals_csv,
                                            read_points_csv, read_rows_csv)
from barrier_fw.application.dopt import (DoptInstance, dopt_basis_start,
                                         dopt_random)
from barrier_fw.application.hawkes import (hawkes_simulate,
                                           mhp_random_parameters)
from barrier_fw.application.mhp import (MhpArrivals, MhpDimensionInstance,
                                        mhp_ingest)
from barrier_fw.application.simplex_log import SimplexLogInstance
from barrier_fw.entity.experiment_config import (DoptSpec, ExperimentConfig,
                                                 ExperimentConfigSchema,
                                                 FileSpec, MhpSpec)
from barrier_fw.entity.method import FRANK_WOLFE_METHODS, Method
from barrier_fw.entity.solver_config import (BaselineConfig, SolverConfig,
                                             to_check_level)
from barrier_fw.entity.step_kind import StopReason
from barrier_fw.exception import (BarrierFWError, ConfigError,
                                  ConstructionError, InvariantViolationError)
from barrier_fw.harness.metrics import (long_frame, metrics_frame,
                                        metrics_rows, trace_frame)
from barrier_fw.harness.reference import (ReferenceValue,
                                          compute_reference_fstar)
from barrier_fw.polytope.active_set import ActiveSet
from barrier_fw.solver import afw
from barrier_fw.solver.afw import SolverResult
from barrier_fw.solver.baselines import run_baseline
from barrier_fw.solver.problem_instance import ProblemInstance
from barrier_fw.solver.statsd_utilities import timer_with_counter
from barrier_fw.util import array_digest

LOGGER = logging.getLogger(__name__)

METADATA_FILE = 'run_metadata.yaml'
LONG_FILE = 'metrics_long.csv'


@attr.s(auto_attribs=True, kw_only=True)
class BuiltInstance:
    instance: ProblemInstance = attr.ib()
    start: ActiveSet = attr.ib()
    description: Dict[str, Any] = attr.ib(factory=dict)
    mhp: Optional[MhpDimensionInstance] = attr.ib(default=None)


@attr.s(auto_attribs=True, kw_only=True)
class ExperimentResult:
    output_dir: str = attr.ib()
    reference: ReferenceValue = attr.ib()
    results: Dict[str, SolverResult] = attr.ib()
    files: Dict[str, str] = attr.ib()
    digest: str = attr.ib()

    @property
    def faults(self) -> List[str]:
        """
        Invariant faults and monitor violations of all runs
        """
        found = []  # type: List[str]
        for method, result in self.results.items():
            if result.fault is not None:
                found.append('{}: {}'.format(method, result.fault))
            found.extend('{}: {}'.format(method, violation) for violation in result.violations)
        return found


def load_experiment_config(path: str) -> ExperimentConfig:
    """
    Reads and validates a YAML experiment config.

    :raises ConfigError: when the file is missing, not YAML or fails validation
    """
    try:
        with open(path) as config_file:
            data = yaml.safe_load(config_file)
    except (OSError, yaml.YAMLError) as e:
        raise ConfigError('Cannot read experiment config {}: {}'.format(path, e))
    if not isinstance(data, dict):
        raise ConfigError('Experiment config {} must be a mapping'.format(path))
    try:
        return ExperimentConfigSchema().load(data)
    except ValidationError as e:
        raise ConfigError('Invalid experiment config {}: {}'.format(path, e.messages))


def _start(instance: ProblemInstance, label: str, *,
           points: Optional[np.ndarray] = None,
           dimension_instance: Optional[MhpDimensionInstance] = None) -> ActiveSet:
    atom_set = instance.atom_set
    if label == 'basis':
        if points is None:
            raise ConfigError('The basis start is only defined for D-optimal design')
        return ActiveSet.from_weights(atom_set, dopt_basis_start(points))
    if label == 'vertex':
        if dimension_instance is None:
            raise ConfigError('The vertex start is only defined for Hawkes instances')
        return dimension_instance.vertex_start()
    return ActiveSet.uniform(atom_set)


def _dopt_instance(points: np.ndarray, start: str, description: Dict[str, Any]) -> BuiltInstance:
    refactor_period = getattr(get_config(), config.DOPT_REFACTOR_PERIOD)
    instance = DoptInstance(points, refactor_period=refactor_period)
    return BuiltInstance(instance=instance, start=_start(instance, start, points=points), description=description)


def _mhp_instance(arrivals: MhpArrivals, dimension: int, regularization: float, start: str,
                  description: Dict[str, Any]) -> BuiltInstance:
    dimension_instance = mhp_ingest(arrivals, regularization, dimensions=[dimension - 1])[0]
    description.update(events=arrivals.size, dimension_events=dimension_instance.event_count)
    instance = dimension_instance.instance
    return BuiltInstance(instance=instance,
                         start=_start(instance, start, dimension_instance=dimension_instance),
                         description=description,
                         mhp=dimension_instance)


def _generated_dopt(spec: DoptSpec) -> BuiltInstance:
    points = dopt_random(spec.m, spec.n, spec.scale, spec.seed)
    return _dopt_instance(points, spec.start, dict(kind='dopt', **attr.asdict(spec)))


def _generated_mhp(spec: MhpSpec) -> BuiltInstance:
    mu, excitation = mhp_random_parameters(spec.m, mu=spec.mu, sparsity=spec.sparsity, radius=spec.radius,
                                           seed=spec.seed)
    arrivals = hawkes_simulate(mu, excitation, spec.t, seed=spec.seed,
                               max_events=getattr(get_config(), config.HAWKES_MAX_EVENTS))
    return _mhp_instance(arrivals, spec.dimension, spec.regularization, spec.start,
                         dict(kind='mhp', **attr.asdict(spec)))


def _loaded(spec: FileSpec) -> BuiltInstance:
    description = attr.asdict(spec)
    if spec.kind == 'dopt':
        return _dopt_instance(read_points_csv(spec.path), spec.start, description)
    if spec.kind == 'mhp':
        arrivals = read_arrivals_csv(spec.path, horizon=spec.horizon)
        description['horizon'] = arrivals.horizon
        return _mhp_instance(arrivals, spec.dimension, spec.regularization, spec.start, description)
    instance = SimplexLogInstance(read_rows_csv(spec.path))
    return BuiltInstance(instance=instance, start=_start(instance, spec.start), description=description)


def build_instance(experiment: ExperimentConfig) -> BuiltInstance:
    """
    Generates or loads the instance named by the experiment config, together with
    its starting point.

    :raises ConstructionError: with the failing instance spec as context
    """
    try:
        if experiment.dopt is not None:
            built = _generated_dopt(experiment.dopt)
        elif experiment.mhp is not None:
            built = _generated_mhp(experiment.mhp)
        else:
            built = _loaded(experiment.file)
    except (BarrierFWError, OSError, ValueError) as e:
        if isinstance(e, (ConfigError, InvariantViolationError)):
            raise
        LOGGER.exception('Failed to build the instance of experiment {}'.format(experiment.name))
        raise ConstructionError('Cannot build instance for experiment {}: {}'.format(experiment.name, e))

    built.instance.reset(built.start)
    LOGGER.info('Built {} with {} atoms, theta={}'.format(built.instance.name, built.instance.atom_set.size,
                                                          built.instance.theta))
    return built


def run_method(built: BuiltInstance, method: Method, experiment: ExperimentConfig,
               reference: ReferenceValue) -> SolverResult:
    """
    One solver run on a private copy of the instance.
    """
    instance = built.instance.clone()
    if method in FRANK_WOLFE_METHODS:
        solver_config = SolverConfig.for_method(method,
                                                epsilon=experiment.epsilon,
                                                max_iterations=experiment.max_iterations,
                                                time_budget_s=experiment.time_budget_s,
                                                check_level=to_check_level(label=experiment.check_level),
                                                caratheodory=experiment.caratheodory,
                                                known_fstar=reference.fstar if reference.converged else None,
                                                fstar_slack=reference.epsilon)
        return afw.run(instance, solver_config, built.start, method=method.value)

    start = built.start
    if np.any(start.weights <= 0):
        # mirror-descent iterates keep the zero pattern of their start
        LOGGER.info('{} starts from the uniform point instead of a sparse start'.format(method.value))
        start = ActiveSet.uniform(instance.atom_set)
    baseline_config = BaselineConfig(method=method,
                                     smoothness=experiment.smoothness,
                                     epsilon=experiment.epsilon,
                                     max_iterations=experiment.max_iterations,
                                     time_budget_s=experiment.time_budget_s)
    return run_baseline(instance, baseline_config, start)


def resolve_output_dir(experiment: ExperimentConfig) -> str:
    """
    BARRIER_FW_OUTPUT_DIR, else the config file entry, else the configured default,
    with the experiment name appended.
    """
    base = os.environ.get(config.OUTPUT_DIR_ENV) or experiment.output_dir or getattr(get_config(), config.OUTPUT_DIR)
    return os.path.join(base, experiment.name)


def _file_name(prefix: str, method: str) -> str:
    return '{}_{}.csv'.format(prefix, method.replace('-', '_').lower())


def _package_versions() -> Dict[str, str]:
    return {'barrier-fw': __version__, 'numpy': np.__version__, 'scipy': scipy.__version__,
            'pandas': pd.__version__, 'python': platform.python_version()}


def _recovered_parameters(built: BuiltInstance, results: Dict[str, SolverResult]) -> Dict[str, Any]:
    best = min(results.values(), key=lambda result: result.final_objective)
    solution = best.solution.x
    mu, row = built.mhp.map_back(solution)
    mu_scaled, row_scaled = built.mhp.recover_parameters(solution)
    return {'method': best.method,
            'dimension': built.mhp.dimension + 1,
            'simplex_solution': [float(value) for value in solution],
            'mapped_back': {'base_intensity': float(mu), 'infectivity': [float(value) for value in row]},
            'recovered': {'base_intensity': float(mu_scaled), 'infectivity': [float(value) for value in row_scaled],
                          'penalized_negative_loglik': built.mhp.penalized_negative_loglik(mu_scaled, row_scaled)}}


@timer_with_counter
def run_experiment(experiment: ExperimentConfig) -> ExperimentResult:
    """
    Builds the instance, certifies a reference F*, runs every configured solver and
    writes per-method metric and trace CSVs, the long-format CSV and the run metadata.
    """
    if not experiment.solvers:
        raise ConfigError('Experiment {} has no solvers'.format(experiment.name))
    output_dir = resolve_output_dir(experiment)
    os.makedirs(output_dir, exist_ok=True)
    LOGGER.info('Running experiment {} with {} into {}'.format(
        experiment.name, ', '.join(method.value for method in experiment.solvers), output_dir))

    built = build_instance(experiment)
    reference = compute_reference_fstar(built.instance, experiment.epsilon, x0=built.start,
                                        max_iterations=experiment.reference_max_iterations)

    max_workers = max(1, int(getattr(get_config(), config.MAX_WORKERS)))
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        futures = [(method, executor.submit(run_method, built, method, experiment, reference))
                   for method in experiment.solvers]
        results = {method.value: future.result() for method, future in futures}

    files = {}  # type: Dict[str, str]
    frames = []  # type: List[pd.DataFrame]
    digests = []  # type: List[str]
    for method, result in results.items():
        frame = metrics_frame(metrics_rows(result, reference.fstar))
        metrics_path = os.path.join(output_dir, _file_name('metrics', method))
        frame.to_csv(metrics_path, index=False, float_format='%.17g')
        trace_frame(result.trace).to_csv(os.path.join(output_dir, _file_name('trace', method)), index=False,
                                         float_format='%.17g')
        digests.append(frame.drop(columns=['time_s']).to_csv(index=False, float_format='%.17g'))
        files[method] = metrics_path
        frames.append(frame)

    long_path = os.path.join(output_dir, LONG_FILE)
    long_frame(frames).to_csv(long_path, index=False, float_format='%.17g')
    files['long'] = long_path
    digest = array_digest(*digests)

    metadata = {
        'name': experiment.name,
        'instance': built.description,
        'fingerprint': built.instance.fingerprint(),
        'epsilon': experiment.epsilon,
        'max_iterations': experiment.max_iterations,
        'check_level': experiment.check_level,
        'reference': {'fstar': float(reference.fstar), 'converged': reference.converged,
                      'fw_gap': float(reference.fw_gap), 'iterations': reference.iterations},
        'methods': {method: {'stop_reason': result.stop_reason.value,
                             'iterations': result.iterations,
                             'final_objective': float(result.final_objective),
                             'final_gap': float(result.final_gap),
                             'violations': len(result.violations),
                             'fault': result.fault}
                    for method, result in results.items()},
        'determinism_digest': digest,
        'versions': _package_versions(),
    }
    if built.mhp is not None:
        metadata['mhp'] = _recovered_parameters(built, results)
    metadata_path = os.path.join(output_dir, METADATA_FILE)
    with open(metadata_path, 'w') as metadata_file:
        yaml.safe_dump(metadata, metadata_file, sort_keys=False)
    files['metadata'] = metadata_path

    faults = [method for method, result in results.items() if result.stop_reason == StopReason.INVARIANT_FAULT]
    if faults:
        LOGGER.warning('Invariant faults in {}'.format(', '.join(faults)))
    LOGGER.info('Experiment {} done; outputs in {}'.format(experiment.name, output_dir))
    return ExperimentResult(output_dir=output_dir, reference=reference, results=results, files=files, digest=digest)
