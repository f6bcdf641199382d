# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import logging
from typing import Any

import attr
import numpy as np

from barrier_fw.barrier.base_barrier import Barrier
from barrier_fw.barrier.omega import (OmegaValue, omega_star_value,
                                      omega_value)
from barrier_fw.exception import DomainViolationError

LOGGER = logging.getLogger(__name__)

SANDWICH_SLACK = 1e-10


def check_lhscb_identities(barrier: Barrier, y: np.ndarray, tol: float, **kwargs: Any) -> bool:
    """
    Checks the identities every theta-LHSCB satisfies at an interior point y:
    <grad f(y), y> = -theta, <hess f(y) y, y> = theta and their pairing-form sum.
    Returns False on violation instead of raising.
    """
    theta = barrier.theta
    pairing = barrier.pair(barrier.gradient(y, **kwargs), y)
    qform = barrier.hess_qform(y, y, **kwargs)

    violations = []
    if abs(pairing + theta) > tol * theta:
        violations.append('<grad f(y), y> = {} differs from -theta = {}'.format(pairing, -theta))
    if abs(qform - theta) > tol * theta:
        violations.append('|y|_y^2 = {} differs from theta = {}'.format(qform, theta))
    if abs(qform + pairing) > tol * theta:
        violations.append('hess f(y) y + grad f(y) paired with y is {}'.format(qform + pairing))

    for violation in violations:
        LOGGER.warning('Barrier identity violated for {}: {}'.format(barrier, violation))
    return not violations


@attr.s(auto_attribs=True, kw_only=True, frozen=True)
class CurvatureBounds:
    distance: float = attr.ib()
    lower: OmegaValue = attr.ib()
    bregman: float = attr.ib()
    upper: OmegaValue = attr.ib()

    @property
    def holds(self) -> bool:
        slack = SANDWICH_SLACK * max(1.0, abs(self.bregman))
        return self.lower.value - slack <= self.bregman <= self.upper.value + slack


def curvature_sandwich(barrier: Barrier, y: np.ndarray, y_next: np.ndarray) -> CurvatureBounds:
    """
    Bregman gap f(y') - f(y) - <grad f(y), y' - y> bracketed by omega and omega* of the
    local distance |y' - y|_y. Requires the distance to be below one.
    """
    step = y_next - y
    distance = barrier.local_norm(y, step)
    if distance >= 1.0:
        raise DomainViolationError('Local distance {} leaves the unit Dikin ellipsoid'.format(distance))
    bregman = barrier.value(y_next) - barrier.value(y) - barrier.pair(barrier.gradient(y), step)
    return CurvatureBounds(distance=distance,
                           lower=omega_value(distance),
                           bregman=bregman,
                           upper=omega_star_value(distance))
