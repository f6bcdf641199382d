# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

"""
The self-concordance reference functions

    omega(t)  = t - ln(1 + t),   t > -1
    omega*(t) = -t - ln(1 - t),  t < 1

together with the quadratic upper bound of omega* and the quadratic and linear lower
bounds of omega used in the convergence analysis of the solver.
"""

import math

import attr

from barrier_fw.exception import DomainViolationError


@attr.s(auto_attribs=True, kw_only=True, frozen=True)
class OmegaValue:
    t: float = attr.ib()
    value: float = attr.ib()


def omega(t: float) -> float:
    if not t > -1.0:
        raise DomainViolationError('omega is defined for t > -1, got {}'.format(t))
    return t - math.log1p(t)


def omega_star(t: float) -> float:
    if not t < 1.0:
        raise DomainViolationError('omega* is defined for t < 1, got {}'.format(t))
    return -t - math.log1p(-t)


def omega_star_ub(t: float) -> float:
    """
    t^2 / (2 (1 - t)), an upper bound of omega* on [0, 1).
    """
    if not 0.0 <= t < 1.0:
        raise DomainViolationError('Upper bound of omega* is defined on [0, 1), got {}'.format(t))
    return t * t / (2.0 * (1.0 - t))


def omega_star_ub_inverse(s: float) -> float:
    if not s >= 0.0:
        raise DomainViolationError('Inverse upper bound is defined for s >= 0, got {}'.format(s))
    return math.sqrt(s * s + 2.0 * s) - s


def h_curve(t: float) -> float:
    """
    2 ub(t) - omega*(t); lies between ub(t) and 2 ub(t) on [0, 1).
    """
    return 2.0 * omega_star_ub(t) - omega_star(t)


def mu_beta(beta: float) -> float:
    """
    omega(t) >= mu_beta * t^2 for t in (0, beta].
    """
    if not beta > 0.0:
        raise DomainViolationError('beta must be positive, got {}'.format(beta))
    return omega(beta) / (beta * beta)


def varrho_beta(beta: float) -> float:
    """
    omega(t) >= varrho_beta * t for t >= beta.
    """
    if not beta > 0.0:
        raise DomainViolationError('beta must be positive, got {}'.format(beta))
    return omega(beta) / beta


def omega_value(t: float) -> OmegaValue:
    return OmegaValue(t=t, value=omega(t))


def omega_star_value(t: float) -> OmegaValue:
    return OmegaValue(t=t, value=omega_star(t))
