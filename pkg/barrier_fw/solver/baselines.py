# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

"""
First-order baselines over the unit simplex: plain Frank-Wolfe, multiplicative
gradient (MG) and relatively-smooth gradient methods with fixed (RSGM-F) or
backtracked (RSGM-B) smoothness constant.
"""

import logging
import time
from typing import List, Optional, Tuple

import attr
import numpy as np
from scipy.optimize import brentq

from barrier_fw.entity.method import FRANK_WOLFE_METHODS, Method
from barrier_fw.entity.solver_config import BaselineConfig, SolverConfig
from barrier_fw.entity.step_kind import StopReason
from barrier_fw.entity.trace_record import TraceRecord
from barrier_fw.exception import (ConstructionError, DomainViolationError,
                                  InvariantViolationError, PreconditionError,
                                  SubproblemError)
from barrier_fw.polytope.active_set import ActiveSet
from barrier_fw.solver import afw
from barrier_fw.solver.afw import SolverResult
from barrier_fw.solver.problem_instance import ProblemInstance
from barrier_fw.solver.statsd_utilities import timer_with_counter
from barrier_fw.util import sparsity

LOGGER = logging.getLogger(__name__)

POSITIVITY_FLOOR = 1e-300
SMOOTHNESS_CAP = 1e12
SUBPROBLEM_XTOL = 1e-15
# Slack on the sufficient-decrease test, relative to max(1, |F(x)|)
DESCENT_SLACK = 1e-12


def fw_plain_run(instance: ProblemInstance, config: SolverConfig, x0: ActiveSet) -> SolverResult:
    """
    Frank-Wolfe without away steps: every iteration moves toward the LMO atom.
    """
    return afw.run(instance, attr.evolve(config, away_steps=False), x0)


def check_simplex_instance(instance: ProblemInstance) -> None:
    """
    :raises ConstructionError: unless the atoms are the unit simplex vertices and c = 0
    """
    if not instance.atom_set.is_simplex:
        raise ConstructionError('Mirror-descent baselines need the unit simplex as feasible set, {} has other atoms'
                                .format(instance.name))
    if instance.has_linear_term:
        raise ConstructionError('Mirror-descent baselines need c = 0, {} has a linear term'.format(instance.name))


def mg_step(instance: ProblemInstance, x: np.ndarray) -> np.ndarray:
    """
    x+ = x * (-grad F(x)) / theta. Stays on the simplex since <grad F(x), x> = -theta.

    :raises ConstructionError: unless the instance is a simplex instance without linear term
    """
    check_simplex_instance(instance)
    gradient = instance.gradient_at(x)
    return x * (-gradient) / instance.theta


def bregman_divergence(u: np.ndarray, x: np.ndarray) -> float:
    """
    D_h(u, x) for h(x) = -sum ln x
    """
    ratio = u / x
    return float(np.sum(ratio - 1.0 - np.log(ratio)))


def _solve_subproblem(gradient: np.ndarray, x: np.ndarray, smoothness: float) -> np.ndarray:
    """
    argmin over the simplex of <grad F(x), u> + L D_h(u, x). Stationarity gives
    u_i = L / (c_i + mu) with c = grad F(x) + L / x; mu is the unique root of
    sum u(mu) = 1 with c_i + mu > 0.
    """
    coefficients = gradient + smoothness / x
    shift = coefficients - coefficients.min()
    size = coefficients.size

    # s = mu + min c; sum u >= 2 at s = L/2 and sum u <= 1 at s = size * L
    def excess(s: float) -> float:
        return float(np.sum(smoothness / (shift + s))) - 1.0

    lo, hi = 0.5 * smoothness, size * smoothness
    if excess(hi) == 0.0:
        s = hi
    else:
        try:
            s = brentq(excess, lo, hi, xtol=SUBPROBLEM_XTOL * hi, rtol=4 * np.finfo(float).eps)
        except ValueError as e:
            raise SubproblemError('Could not bracket the RSGM multiplier: {}'.format(e))
    u = smoothness / (shift + s)
    if not np.all(np.isfinite(u)):
        raise SubproblemError('RSGM subproblem produced a non-finite point')
    u = np.maximum(u / u.sum(), POSITIVITY_FLOOR)
    return u / u.sum()


def rsgm_step(instance: ProblemInstance, x: np.ndarray, smoothness: float) -> np.ndarray:
    """
    One relatively-smooth gradient step with constant L.

    :raises PreconditionError: when x is not strictly positive or L is not positive
    """
    if not smoothness > 0:
        raise PreconditionError('Smoothness constant must be positive, got {}'.format(smoothness))
    if np.any(x <= 0):
        raise PreconditionError('RSGM needs a strictly positive point')
    return _solve_subproblem(instance.gradient_at(x), x, smoothness)


def rsgm_backtracking_step(instance: ProblemInstance, x: np.ndarray, smoothness: float, *,
                           objective: Optional[float] = None,
                           gradient: Optional[np.ndarray] = None) -> Tuple[np.ndarray, float]:
    """
    Relatively-smooth gradient step that doubles L until
    F(u) <= F(x) + <grad F(x), u - x> + L D_h(u, x), then proposes L / 2 for the next step.

    :raises SubproblemError: when L overflows the cap
    """
    if np.any(x <= 0):
        raise PreconditionError('RSGM needs a strictly positive point')
    if objective is None:
        objective = instance.value_at(x)
    if gradient is None:
        gradient = instance.gradient_at(x)
    slack = DESCENT_SLACK * max(1.0, abs(objective))

    while smoothness <= SMOOTHNESS_CAP:
        u = _solve_subproblem(gradient, x, smoothness)
        try:
            value = instance.value_at(u)
        except DomainViolationError:
            value = np.inf
        bound = objective + float(gradient @ (u - x)) + smoothness * bregman_divergence(u, x)
        if value <= bound + slack:
            return u, 0.5 * smoothness
        smoothness *= 2.0
    raise SubproblemError('Backtracking smoothness constant exceeded {}'.format(SMOOTHNESS_CAP))


def _simplex_gap(x: np.ndarray, gradient: np.ndarray) -> float:
    return max(float(gradient @ x - gradient.min()), 0.0)


@timer_with_counter
def run_baseline(instance: ProblemInstance, config: BaselineConfig, x0: ActiveSet) -> SolverResult:
    """
    Runs one of the baseline methods from x0. The Frank-Wolfe variants delegate to the
    Frank-Wolfe solver; MG and RSGM iterate on the dense weight vector.
    """
    method = config.method
    if method in FRANK_WOLFE_METHODS:
        return afw.run(instance, config.to_solver_config(), x0, method=method.value)

    check_simplex_instance(instance)
    x = np.array(x0.weights, dtype=float)
    if method in (Method.RSGM_F, Method.RSGM_B) and np.any(x <= 0):
        raise PreconditionError('{} needs a strictly positive starting point'.format(method.value))
    smoothness = config.smoothness if config.smoothness is not None else instance.default_smoothness
    LOGGER.info('Starting {} on {} with L={}'.format(method.value, instance.name, smoothness))

    started_at = time.perf_counter()
    trace = []  # type: List[TraceRecord]
    fault = None  # type: Optional[str]
    objective = instance.value_at(x)
    gradient = instance.gradient_at(x)
    gap = _simplex_gap(x, gradient)
    k = 0
    while True:
        if gap <= config.epsilon:
            stop_reason = StopReason.CONVERGED
            break
        if k >= config.max_iterations:
            stop_reason = StopReason.ITERATION_BUDGET
            break
        if config.time_budget_s is not None and time.perf_counter() - started_at >= config.time_budget_s:
            stop_reason = StopReason.TIME_BUDGET
            break
        try:
            if method == Method.MG:
                x_next = mg_step(instance, x)
            elif method == Method.RSGM_F:
                x_next = rsgm_step(instance, x, smoothness)
            else:
                x_next, smoothness = rsgm_backtracking_step(instance, x, smoothness,
                                                            objective=objective, gradient=gradient)
            objective_next = instance.value_at(x_next)
            gradient_next = instance.gradient_at(x_next)
        except (DomainViolationError, InvariantViolationError, SubproblemError) as e:
            LOGGER.exception('{} failed on {} at k={}'.format(method.value, instance.name, k))
            fault = str(e)
            stop_reason = StopReason.INVARIANT_FAULT
            break

        count = sparsity(x)
        trace.append(TraceRecord(k=k,
                                 objective=objective,
                                 objective_next=objective_next,
                                 fw_gap=gap,
                                 step_kind=method.value,
                                 support_size=count,
                                 sparsity=count,
                                 time_s=time.perf_counter() - started_at))
        x, objective, gradient = x_next, objective_next, gradient_next
        gap = _simplex_gap(x, gradient)
        k += 1
        if LOGGER.isEnabledFor(logging.DEBUG):
            LOGGER.debug('{} k={} F={:.12g} G={:.3e}'.format(method.value, k, objective, gap))

    LOGGER.info('{} on {} stopped after {} iterations ({}): F={:.12g} G={:.3e}'.format(
        method.value, instance.name, k, stop_reason.value, objective, gap))
    return SolverResult(method=method.value,
                        solution=ActiveSet(atom_set=instance.atom_set, weights=x),
                        trace=trace,
                        stop_reason=stop_reason,
                        final_objective=objective,
                        final_gap=gap,
                        fault=fault,
                        elapsed_s=time.perf_counter() - started_at)
