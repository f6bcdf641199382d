# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import logging
import math
from typing import List, Optional, Sequence

import attr
import numpy as np

from barrier_fw.entity.step_kind import StepKind
from barrier_fw.entity.trace_record import TraceRecord
from barrier_fw.polytope.active_set import ActiveSet
from barrier_fw.polytope.oracles import away_vertex
from barrier_fw.solver.problem_instance import ProblemInstance

LOGGER = logging.getLogger(__name__)

RELATIVE_TOLERANCE = 1e-8
TAIL_FRACTION = 0.1


def _slack(value: float) -> float:
    return RELATIVE_TOLERANCE * max(1.0, abs(value))


def invariant_monitor(record: TraceRecord,
                      instance: ProblemInstance,
                      known_fstar: Optional[float] = None,
                      *,
                      fstar_slack: float = 0.0,
                      adaptive: bool = False) -> List[str]:
    """
    Checks the per-iteration inequalities every step of the solver satisfies:

    (a) D <= max{r, sqrt(theta)} + theta + B
    (b) F decreases
    (c) alpha D < 1 (adaptive steps only; exact steps may leave the Dikin ellipsoid)
    (d) r >= G >= 0
    (e) with a known optimal value F*, G >= F - F* and, for Frank-Wolfe directions,
        r <= max{2 delta, 2 (delta + sqrt(delta)) D}

    fstar_slack is the certified accuracy of known_fstar; it widens the checks in (e).

    :return: descriptions of the violated checks, empty when all hold
    """
    violations = []  # type: List[str]
    k = record.k
    r = record.r if record.r is not None else record.fw_gap
    gap = record.fw_gap

    if record.local_norm is not None:
        bound = max(r, math.sqrt(instance.theta)) + instance.theta + instance.linear_variation
        if record.local_norm > bound + _slack(bound):
            violations.append('k={}: D={} exceeds max(r, sqrt(theta)) + theta + B = {}'
                              .format(k, record.local_norm, bound))

    if record.objective_next is not None and record.objective_next > record.objective + _slack(record.objective):
        violations.append('k={}: objective increased from {} to {}'
                          .format(k, record.objective, record.objective_next))

    if adaptive and record.alpha is not None and record.local_norm is not None \
            and record.alpha * record.local_norm >= 1.0:
        violations.append('k={}: alpha * D = {} is not below 1'.format(k, record.alpha * record.local_norm))

    if gap < 0.0 or r < gap - _slack(gap):
        violations.append('k={}: expected r >= G >= 0, got r={} G={}'.format(k, r, gap))

    if known_fstar is not None:
        delta = record.objective - known_fstar
        if gap < delta - fstar_slack - _slack(delta):
            violations.append('k={}: FW gap {} is below the objective gap {}'.format(k, gap, delta))
        if record.step_kind == StepKind.FW.value and record.local_norm is not None:
            bounded = max(delta, 0.0) + fstar_slack
            bound = max(2.0 * bounded, 2.0 * (bounded + math.sqrt(bounded)) * record.local_norm)
            if r > bound + RELATIVE_TOLERANCE:
                violations.append('k={}: r={} exceeds the objective-gap bound {}'.format(k, r, bound))

    for violation in violations:
        LOGGER.warning('Invariant violation on {}: {}'.format(instance.name, violation))
    return violations


def oracle_tie_audit(k: int, pairings: np.ndarray, active: ActiveSet, fw_atom: int,
                     rng: np.random.Generator) -> List[str]:
    """
    Re-runs both oracles over a random relabelling of the atoms. The relabelled choice
    may only differ from the solver's on an exact tie, and then it must have the
    higher id.

    :return: descriptions of the violated checks, empty when all hold
    """
    violations = []  # type: List[str]
    order = rng.permutation(pairings.size)
    rival = int(order[np.argmin(pairings[order])])
    if pairings[rival] < pairings[fw_atom] or (rival != fw_atom and rival < fw_atom):
        violations.append('k={}: LMO chose atom {} ({}) over atom {} ({})'
                          .format(k, fw_atom, pairings[fw_atom], rival, pairings[rival]))

    away_atom = away_vertex(active, pairings)
    support = rng.permutation(active.support)
    rival = int(support[np.argmax(pairings[support])])
    if pairings[rival] > pairings[away_atom] or (rival != away_atom and rival < away_atom):
        violations.append('k={}: away oracle chose atom {} ({}) over atom {} ({})'
                          .format(k, away_atom, pairings[away_atom], rival, pairings[rival]))

    for violation in violations:
        LOGGER.warning('Oracle tie audit: {}'.format(violation))
    return violations


def drop_step_audit(trace: Sequence[TraceRecord], initial_support: int, q: int) -> List[str]:
    """
    Counts drop steps: the first k iterations contain at most floor((|S_0| + k - q) / 2) of them.
    """
    violations = []  # type: List[str]
    drops = 0
    for k, record in enumerate(trace, start=1):
        if record.step_kind == StepKind.DROP.value:
            drops += 1
        allowed = (initial_support + k - q) // 2
        if drops > allowed:
            violations.append('{} drop steps in the first {} iterations exceed {}'.format(drops, k, allowed))
    return violations


@attr.s(auto_attribs=True, kw_only=True, frozen=True)
class FaceIdentification:
    # first iteration after which the support size never grows
    nonincreasing_from: int = attr.ib()
    # support size unchanged over the last tail of the run
    stable_tail: bool = attr.ib()
    final_support: int = attr.ib()
    iterations: int = attr.ib()


def face_identification(trace: Sequence[TraceRecord], final_support: int,
                        tail_fraction: float = TAIL_FRACTION) -> FaceIdentification:
    sizes = [record.support_size for record in trace] + [final_support]
    nonincreasing_from = 0
    for k in range(1, len(sizes)):
        if sizes[k] > sizes[k - 1]:
            nonincreasing_from = k
    tail = max(1, int(math.ceil(tail_fraction * len(trace))))
    stable_tail = len(set(sizes[-(tail + 1):])) == 1
    return FaceIdentification(nonincreasing_from=nonincreasing_from,
                              stable_tail=stable_tail,
                              final_support=final_support,
                              iterations=len(trace))
