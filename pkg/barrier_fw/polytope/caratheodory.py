# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import logging
from typing import Optional

import numpy as np
import scipy.linalg

from barrier_fw.exception import InvariantViolationError
from barrier_fw.polytope.active_set import (DROP_THRESHOLD, ITERATE_TOLERANCE,
                                            ActiveSet)

LOGGER = logging.getLogger(__name__)


def caratheodory_reduce(active: ActiveSet, p: Optional[int] = None, *,
                        drop_threshold: float = DROP_THRESHOLD) -> ActiveSet:
    """
    Rewrites the iterate with at most p + 1 atoms. Each round takes an affine
    dependence lambda among the support atoms (sum lambda = 0, sum lambda_i a_i = 0),
    oriented so that its largest entry in magnitude is positive, and moves the weights
    along -lambda until the first weight reaches zero.

    :param active: active set to reduce
    :param p: ambient dimension, defaults to the atom dimension
    :return: the input when the support is already small enough, else a new active set
    """
    p = active.atom_set.dimension if p is None else p
    if active.support_size <= p + 1:
        return active

    atom_set = active.atom_set
    weights = np.array(active.weights)
    support = np.flatnonzero(weights)
    while support.size > p + 1:
        system = np.vstack([atom_set.rows(support).T, np.ones(support.size)])
        null_space = scipy.linalg.null_space(system)
        if null_space.shape[1] == 0:
            LOGGER.warning('Support of {} atoms is affinely independent; p={} is below the atom dimension'
                           .format(support.size, p))
            break
        dependence = null_space[:, 0]
        if dependence[np.argmax(np.abs(dependence))] < 0:
            dependence = -dependence
        positive = dependence > 0
        ratios = np.full(support.size, np.inf)
        ratios[positive] = weights[support][positive] / dependence[positive]
        leaving = int(np.argmin(ratios))

        reduced = weights[support] - ratios[leaving] * dependence
        reduced[leaving] = 0.0
        reduced[reduced <= drop_threshold] = 0.0
        weights[support] = reduced
        weights /= weights.sum()
        support = np.flatnonzero(weights)

    reduced_set = ActiveSet(atom_set=atom_set, weights=weights)
    error = np.max(np.abs(reduced_set.x - active.x))
    if error > ITERATE_TOLERANCE * max(1.0, np.max(np.abs(active.x))):
        raise InvariantViolationError('Caratheodory reduction moved the iterate by {}'.format(error))
    if LOGGER.isEnabledFor(logging.DEBUG):
        LOGGER.debug('Reduced support from {} to {} atoms'.format(active.support_size, reduced_set.support_size))
    return reduced_set
