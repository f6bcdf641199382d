# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import logging
import time
from typing import List, Optional, Tuple

import attr
import numpy as np

from barrier_fw.entity.solver_config import CheckLevel, SolverConfig, StepRule
from barrier_fw.entity.step_kind import StepKind, StopReason
from barrier_fw.entity.trace_record import TraceRecord
from barrier_fw.exception import (DomainViolationError,
                                  InvariantViolationError, NumericalFaultError,
                                  PreconditionError)
from barrier_fw.polytope.active_set import (ActiveSet, away_weight_update,
                                            fw_weight_update)
from barrier_fw.polytope.caratheodory import caratheodory_reduce
from barrier_fw.polytope.oracles import away_vertex, fw_vertex
from barrier_fw.solver.linesearch import (adaptive_stepsize,
                                          bisection_linesearch)
from barrier_fw.solver.monitor import invariant_monitor, oracle_tie_audit
from barrier_fw.solver.problem_instance import Direction, ProblemInstance
from barrier_fw.solver.statsd_utilities import timer_with_counter
from barrier_fw.util import sparsity

LOGGER = logging.getLogger(__name__)

# A FW gap below -GAP_TOLERANCE * max(1, |<grad F, x>|) means gradient and LMO disagree
GAP_TOLERANCE = 1e-10


@attr.s(auto_attribs=True, kw_only=True)
class Candidate:
    atom_id: int = attr.ib()
    gap: float = attr.ib()


@attr.s(auto_attribs=True, kw_only=True)
class SolverState:
    instance: ProblemInstance = attr.ib()
    active: ActiveSet = attr.ib()
    objective: float = attr.ib()
    k: int = attr.ib(default=0)
    # per-atom pairings <grad F(x^k), a>, filled by prepare()
    gradients: Optional[np.ndarray] = attr.ib(default=None)
    fw_atom: Optional[int] = attr.ib(default=None)
    gap: Optional[float] = attr.ib(default=None)
    started_at: float = attr.ib(factory=time.perf_counter)
    # time spent outside the iteration itself, excluded from the trace clock
    overhead_s: float = attr.ib(default=0.0)

    def elapsed(self) -> float:
        return time.perf_counter() - self.started_at - self.overhead_s


@attr.s(auto_attribs=True, kw_only=True)
class SolverResult:
    method: str = attr.ib()
    solution: ActiveSet = attr.ib()
    trace: List[TraceRecord] = attr.ib()
    stop_reason: StopReason = attr.ib()
    final_objective: float = attr.ib()
    final_gap: float = attr.ib()
    violations: List[str] = attr.ib(factory=list)
    fault: Optional[str] = attr.ib(default=None)
    # solver clock at the final iterate
    elapsed_s: float = attr.ib(default=0.0)

    @property
    def iterations(self) -> int:
        return len(self.trace)


def start(instance: ProblemInstance, x0: ActiveSet) -> SolverState:
    """
    Initial solver state at x0.

    :raises DomainViolationError: when A x0 lies outside the barrier domain
    """
    instance.reset(x0)
    return prepare(SolverState(instance=instance, active=x0, objective=instance.objective()))


def prepare(state: SolverState) -> SolverState:
    """
    Gradient, LMO atom and FW gap at the current iterate.
    """
    gradients = state.instance.atom_gradients()
    fw_atom = fw_vertex(gradients)
    state = attr.evolve(state, gradients=gradients, fw_atom=fw_atom)
    return attr.evolve(state, gap=fw_gap(state, fw_atom))


def _current_pairing(state: SolverState) -> float:
    """
    <grad F(x^k), x^k> = sum_a beta_a <grad F(x^k), a>
    """
    support = state.active.support
    return float(state.gradients[support] @ state.active.weights[support])


def fw_gap(state: SolverState, v: int) -> float:
    """
    G = <-grad F(x^k), v - x^k>

    :raises NumericalFaultError: when G is negative beyond rounding
    """
    if state.gradients is None:
        state = attr.evolve(state, gradients=state.instance.atom_gradients())
    current = _current_pairing(state)
    gap = current - float(state.gradients[v])
    if gap < -GAP_TOLERANCE * max(1.0, abs(current)):
        raise NumericalFaultError('Negative FW gap {} at k={}: gradient and LMO disagree'.format(gap, state.k))
    return max(gap, 0.0)


def away_gap(state: SolverState, a: int) -> float:
    """
    G~ = <-grad F(x^k), x^k - a>
    """
    return float(state.gradients[a]) - _current_pairing(state)


def choose_direction(state: SolverState, fw_candidate: Candidate,
                     away_candidate: Optional[Candidate]) -> Direction:
    """
    The FW direction when the support is a singleton, no away atom was computed or
    G > G~; the away direction otherwise, ties included.
    """
    if away_candidate is None or state.active.support_size == 1 or fw_candidate.gap > away_candidate.gap:
        return Direction(kind=StepKind.FW, atom_id=fw_candidate.atom_id, max_step=1.0)
    beta = state.active.weight(away_candidate.atom_id)
    return Direction(kind=StepKind.AWAY, atom_id=away_candidate.atom_id, max_step=beta / (1.0 - beta))


def exact_linesearch(state: SolverState, direction: Direction) -> float:
    """
    argmin of F(x + alpha d) over (0, max_step]; a closed form when the instance has
    one, bisection on the slope otherwise.
    """
    alpha = state.instance.closed_form_linesearch(direction)
    if alpha is None:
        return bisection_linesearch(state.instance, direction)
    alpha = min(alpha, direction.max_step)
    if not alpha > 0.0:
        raise NumericalFaultError('Closed-form line-search returned a non-positive step {}'.format(alpha))
    return alpha


def iterate(state: SolverState, config: SolverConfig) -> Tuple[SolverState, TraceRecord]:
    """
    One iteration: away atom, direction, step size, weight update (with drop
    detection), optional Caratheodory reduction and the move of the instance.

    :raises PreconditionError: when called on a converged state
    :raises NumericalFaultError: on a non-descent direction
    :raises DomainViolationError: when the step leaves the barrier domain
    """
    if state.gap is None:
        state = prepare(state)
    if state.gap <= config.epsilon:
        raise PreconditionError('FW gap {} is already below epsilon'.format(state.gap))

    instance = state.instance
    active = state.active
    fw_candidate = Candidate(atom_id=state.fw_atom, gap=state.gap)
    away_candidate = None  # type: Optional[Candidate]
    if config.away_steps and active.support_size > 1:
        away_atom = away_vertex(active, state.gradients)
        away_candidate = Candidate(atom_id=away_atom, gap=away_gap(state, away_atom))

    direction = choose_direction(state, fw_candidate, away_candidate)
    r = fw_candidate.gap if direction.is_fw else away_candidate.gap
    if not r > 0.0:
        raise NumericalFaultError('Non-descent direction at k={}: r={}'.format(state.k, r))
    local_norm = instance.local_norm(direction)

    if config.step_rule == StepRule.ADAPTIVE:
        alpha = adaptive_stepsize(r, local_norm, direction.max_step)
    else:
        alpha = exact_linesearch(state, direction)

    if direction.is_fw:
        next_active = fw_weight_update(active, direction.atom_id, alpha, drop_threshold=config.drop_threshold)
        step_kind = StepKind.FW
    else:
        next_active = away_weight_update(active, direction.atom_id, alpha, drop_threshold=config.drop_threshold)
        step_kind = StepKind.DROP if next_active.dropped is not None else StepKind.AWAY
    if config.caratheodory:
        next_active = caratheodory_reduce(next_active, drop_threshold=config.drop_threshold)

    instance.apply_step(direction, alpha, weights=next_active.weights)
    objective_next = instance.objective()
    if config.check_level == CheckLevel.FULL:
        next_active.verify()
        instance.verify()

    record = TraceRecord(k=state.k,
                         objective=state.objective,
                         objective_next=objective_next,
                         fw_gap=state.gap,
                         away_gap=away_candidate.gap if away_candidate is not None else None,
                         r=r,
                         local_norm=local_norm,
                         alpha=alpha,
                         alpha_max=direction.max_step,
                         step_kind=step_kind.value,
                         support_size=active.support_size,
                         sparsity=sparsity(active.x),
                         time_s=state.elapsed())
    if LOGGER.isEnabledFor(logging.DEBUG):
        LOGGER.debug('k={} F={:.12g} G={:.3e} {} atom={} alpha={:.6g} support={}'.format(
            state.k, state.objective, state.gap, step_kind.value, direction.atom_id, alpha,
            next_active.support_size))

    next_state = attr.evolve(state, active=next_active, objective=objective_next, k=state.k + 1,
                             gradients=None, fw_atom=None, gap=None)
    return prepare(next_state), record


@timer_with_counter
def run(instance: ProblemInstance, config: SolverConfig, x0: ActiveSet, *,
        method: Optional[str] = None) -> SolverResult:
    """
    Runs the (away-step) Frank-Wolfe method from x0 until the FW gap drops to epsilon,
    the iteration or time budget is exhausted, or an invariant fault occurs.

    :raises DomainViolationError: when A x0 lies outside the barrier domain
    """
    if method is None:
        method = '{}-{}'.format('AFW' if config.away_steps else 'FW',
                                'E' if config.step_rule == StepRule.EXACT else 'A')
    LOGGER.info('Starting {} on {} ({} atoms, start support {})'.format(
        method, instance.name, instance.atom_set.size, x0.support_size))
    state = start(instance, x0)
    trace = []  # type: List[TraceRecord]
    violations = []  # type: List[str]
    fault = None  # type: Optional[str]
    adaptive = config.step_rule == StepRule.ADAPTIVE
    audit_rng = np.random.default_rng(config.seed) if config.check_level == CheckLevel.FULL else None

    while True:
        if state.gap <= config.epsilon:
            stop_reason = StopReason.CONVERGED
            break
        if state.k >= config.max_iterations:
            stop_reason = StopReason.ITERATION_BUDGET
            break
        if config.time_budget_s is not None and state.elapsed() >= config.time_budget_s:
            stop_reason = StopReason.TIME_BUDGET
            break
        if audit_rng is not None:
            audit_started = time.perf_counter()
            found = oracle_tie_audit(state.k, state.gradients, state.active, state.fw_atom, audit_rng)
            state.overhead_s += time.perf_counter() - audit_started
            if found:
                violations.extend(found)
                fault = found[0]
                stop_reason = StopReason.INVARIANT_FAULT
                break
        try:
            state, record = iterate(state, config)
        except (InvariantViolationError, DomainViolationError) as e:
            LOGGER.exception('Invariant fault in {} at k={}'.format(method, state.k))
            fault = str(e)
            stop_reason = StopReason.INVARIANT_FAULT
            break
        trace.append(record)

        if config.check_level != CheckLevel.OFF:
            monitor_started = time.perf_counter()
            found = invariant_monitor(record, instance, config.known_fstar,
                                      fstar_slack=config.fstar_slack, adaptive=adaptive)
            state.overhead_s += time.perf_counter() - monitor_started
            violations.extend(found)
            if found and config.check_level == CheckLevel.FULL:
                fault = found[0]
                stop_reason = StopReason.INVARIANT_FAULT
                break

    LOGGER.info('{} on {} stopped after {} iterations ({}): F={:.12g} G={:.3e} support={}'.format(
        method, instance.name, state.k, stop_reason.value, state.objective, state.gap, state.active.support_size))
    return SolverResult(method=method,
                        solution=state.active,
                        trace=trace,
                        stop_reason=stop_reason,
                        final_objective=state.objective,
                        final_gap=state.gap,
                        violations=violations,
                        fault=fault,
                        elapsed_s=state.elapsed())
