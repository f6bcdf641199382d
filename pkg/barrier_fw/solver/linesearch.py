# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import logging
import math
from typing import Callable

from barrier_fw.exception import NumericalFaultError, PreconditionError
from barrier_fw.solver.problem_instance import Direction, ProblemInstance

LOGGER = logging.getLogger(__name__)

BRACKET_WIDTH = 1e-12
MAX_DOMAIN_HALVINGS = 200
INVERSE_GOLDEN_RATIO = (math.sqrt(5.0) - 1.0) / 2.0


def adaptive_stepsize(r: float, local_norm: float, max_step: float) -> float:
    """
    min{r / (D (r + D)), max_step}, or max_step when D = 0. The result satisfies
    alpha * D < 1, so the step stays inside the Dikin ellipsoid.
    """
    if not r > 0.0:
        raise PreconditionError('Adaptive step needs r > 0, got {}'.format(r))
    if local_norm < 0.0 or not max_step > 0.0:
        raise PreconditionError('Adaptive step needs D >= 0 and a positive max step, got D={}, max={}'
                                .format(local_norm, max_step))
    if local_norm == 0.0:
        return max_step
    return min(r / (local_norm * (r + local_norm)), max_step)


def bisection_linesearch(instance: ProblemInstance, direction: Direction) -> float:
    """
    Smallest minimizer of alpha -> F(x + alpha d) on (0, max_step], located by
    bisection on the slope. Steps leaving the domain count as having positive slope.
    """
    max_step = direction.max_step
    if instance.slope_along(direction, 0.0) >= 0.0:
        raise PreconditionError('Line-search direction is not a descent direction')
    if instance.in_domain_along(direction, max_step):
        if instance.slope_along(direction, max_step) <= 0.0:
            return max_step
        hi = max_step
    else:
        # shrink until the step stays in the domain; the boundary lies below twice that
        inside = max_step
        for _ in range(MAX_DOMAIN_HALVINGS):
            inside *= 0.5
            if instance.in_domain_along(direction, inside):
                break
        else:
            raise NumericalFaultError('No step along the direction stays in the domain')
        hi = min(2.0 * inside, max_step)

    lo = 0.0
    width = BRACKET_WIDTH * max_step
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if not instance.in_domain_along(direction, mid) or instance.slope_along(direction, mid) >= 0.0:
            hi = mid
        else:
            lo = mid

    mid = 0.5 * (lo + hi)
    alpha = mid if instance.in_domain_along(direction, mid) else lo
    if not alpha > 0.0:
        raise NumericalFaultError('Line-search collapsed to a zero step')
    return alpha


def golden_section_search(fun: Callable[[float], float], lo: float, hi: float, tol: float = 1e-10) -> float:
    """
    Minimizer of a unimodal function on [lo, hi] by golden-section interval reduction.
    """
    a, b = lo, hi
    c = b - INVERSE_GOLDEN_RATIO * (b - a)
    d = a + INVERSE_GOLDEN_RATIO * (b - a)
    fc, fd = fun(c), fun(d)
    while abs(b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INVERSE_GOLDEN_RATIO * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVERSE_GOLDEN_RATIO * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)
