# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import logging
from typing import Optional

import attr
from beaker.cache import CacheManager
from beaker.util import parse_cache_config_options

from barrier_fw import config, get_config
from barrier_fw.config import Config
from barrier_fw.entity.solver_config import CheckLevel, SolverConfig, StepRule
from barrier_fw.entity.step_kind import StopReason
from barrier_fw.polytope.active_set import ActiveSet
from barrier_fw.solver import afw
from barrier_fw.solver.problem_instance import ProblemInstance
from barrier_fw.solver.statsd_utilities import timer_with_counter

LOGGER = logging.getLogger(__name__)

_REFERENCE_CACHE_REGION = 'reference_fstar'
_REFERENCE_CACHE_EXPIRY_SEC = Config.REFERENCE_CACHE_EXPIRY_SEC
_CACHE = CacheManager(**parse_cache_config_options({
    'cache.regions': _REFERENCE_CACHE_REGION,
    'cache.{}.type'.format(_REFERENCE_CACHE_REGION): 'memory',
    'cache.{}.expire'.format(_REFERENCE_CACHE_REGION): _REFERENCE_CACHE_EXPIRY_SEC}))


@attr.s(auto_attribs=True, kw_only=True, frozen=True)
class ReferenceValue:
    fstar: float = attr.ib()
    # False when the budget ran out before the FW gap certified fstar
    converged: bool = attr.ib()
    fw_gap: float = attr.ib()
    iterations: int = attr.ib()
    epsilon: float = attr.ib()


def _solve_reference(instance: ProblemInstance, epsilon: float, x0: Optional[ActiveSet],
                     max_iterations: int) -> ReferenceValue:
    # runs on a private copy so the caller's caches stay where they are
    instance = instance.clone()
    start = x0 if x0 is not None else ActiveSet.uniform(instance.atom_set)
    solver_config = SolverConfig(step_rule=StepRule.EXACT,
                                 epsilon=epsilon,
                                 max_iterations=max_iterations,
                                 check_level=CheckLevel.OFF)
    result = afw.run(instance, solver_config, start, method='AFW-E')
    converged = result.stop_reason == StopReason.CONVERGED
    best = min([record.objective for record in result.trace] + [result.final_objective])
    if not converged:
        LOGGER.warning('Reference run on {} stopped ({}) with FW gap {:.3e} > {:.1e}; using best F={:.12g}'
                       .format(instance.name, result.stop_reason.value, result.final_gap, epsilon, best))
    return ReferenceValue(fstar=best, converged=converged, fw_gap=result.final_gap,
                          iterations=result.iterations, epsilon=epsilon)


@timer_with_counter
def compute_reference_fstar(instance: ProblemInstance, epsilon: float, *,
                            x0: Optional[ActiveSet] = None,
                            max_iterations: Optional[int] = None,
                            use_cache: bool = True) -> ReferenceValue:
    """
    Reference optimal value: F at the first AFW-E iterate whose FW gap is below
    epsilon, so that F* <= fstar < F* + epsilon. Values are cached per instance
    fingerprint and epsilon.
    """
    if max_iterations is None:
        max_iterations = getattr(get_config(), config.REFERENCE_MAX_ITERATIONS)
    if not use_cache:
        return _solve_reference(instance, epsilon, x0, max_iterations)

    cache = _CACHE.get_cache_region(_REFERENCE_CACHE_REGION, _REFERENCE_CACHE_REGION)
    key = '{}:{!r}'.format(instance.fingerprint(), float(epsilon))
    reference = cache.get(key=key, createfunc=lambda: _solve_reference(instance, epsilon, x0, max_iterations))
    if not reference.converged:
        # retry later instead of serving an uncertified value
        cache.remove_value(key=key)
    LOGGER.info('Reference F* of {} = {:.12g} (certified: {})'.format(instance.name, reference.fstar,
                                                                       reference.converged))
    return reference
