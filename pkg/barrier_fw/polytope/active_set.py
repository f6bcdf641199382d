# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import logging
from typing import Dict, Optional

import numpy as np

from barrier_fw.exception import (InfeasibleStartError,
                                  InvariantViolationError, PreconditionError)
from barrier_fw.polytope.atom_set import AtomSet

LOGGER = logging.getLogger(__name__)

DROP_THRESHOLD = 1e-14
SUM_TOLERANCE = 1e-12
START_SUM_TOLERANCE = 1e-9
ITERATE_TOLERANCE = 1e-10
# Relative slack accepted on the maximal away step
MAX_STEP_SLACK = 1e-12


class ActiveSet:
    """
    The iterate as a convex combination of atoms. Weights are stored densely over
    all atom ids; the support is the set of ids with non-zero weight. Instances are
    never modified in place: the weight updates return new active sets.
    """
    def __init__(self, *,
                 atom_set: AtomSet,
                 weights: np.ndarray,
                 x: Optional[np.ndarray] = None,
                 dropped: Optional[int] = None) -> None:
        self._atom_set = atom_set
        self._weights = weights
        self._weights.setflags(write=False)
        self._support = np.flatnonzero(weights)
        self._x = atom_set.combine(weights) if x is None else x
        self._x.setflags(write=False)
        self.dropped = dropped

    @classmethod
    def from_weights(cls, atom_set: AtomSet, weights: np.ndarray, *,
                     drop_threshold: float = DROP_THRESHOLD) -> 'ActiveSet':
        weights = np.array(weights, dtype=float)
        if weights.shape != (atom_set.size,):
            raise InfeasibleStartError('Expected {} weights, got shape {}'.format(atom_set.size, weights.shape))
        if not np.all(np.isfinite(weights)) or np.any(weights < 0):
            raise InfeasibleStartError('Starting weights must be finite and nonnegative')
        total = weights.sum()
        if abs(total - 1.0) > START_SUM_TOLERANCE:
            raise InfeasibleStartError('Starting weights sum to {}, expected 1'.format(total))
        weights[weights <= drop_threshold] = 0.0
        if not np.any(weights):
            raise InfeasibleStartError('Starting weights have empty support')
        return cls(atom_set=atom_set, weights=weights / weights.sum())

    @classmethod
    def vertex(cls, atom_set: AtomSet, atom_id: int) -> 'ActiveSet':
        weights = np.zeros(atom_set.size)
        weights[atom_id] = 1.0
        return cls(atom_set=atom_set, weights=weights)

    @classmethod
    def uniform(cls, atom_set: AtomSet) -> 'ActiveSet':
        return cls(atom_set=atom_set, weights=np.full(atom_set.size, 1.0 / atom_set.size))

    @property
    def atom_set(self) -> AtomSet:
        return self._atom_set

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def support(self) -> np.ndarray:
        return self._support

    @property
    def support_size(self) -> int:
        return int(self._support.size)

    @property
    def x(self) -> np.ndarray:
        return self._x

    def weight(self, atom_id: int) -> float:
        return float(self._weights[atom_id])

    def contains(self, atom_id: int) -> bool:
        return bool(self._weights[atom_id] != 0.0)

    def as_dict(self) -> Dict[int, float]:
        return {int(atom_id): float(self._weights[atom_id]) for atom_id in self._support}

    def verify(self, *, tolerance: float = ITERATE_TOLERANCE) -> None:
        """
        Re-checks the representation: nonnegative weights summing to one and a
        cached iterate equal to the weighted atom sum.
        """
        if np.any(self._weights < 0):
            raise InvariantViolationError('Negative atom weight {}'.format(self._weights.min()))
        total = self._weights.sum()
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise InvariantViolationError('Atom weights sum to {}'.format(total))
        expected = self._atom_set.combine(self._weights)
        error = np.max(np.abs(expected - self._x))
        if error > tolerance * max(1.0, np.max(np.abs(expected))):
            raise InvariantViolationError('Cached iterate is off the weighted atom sum by {}'.format(error))

    def __repr__(self) -> str:
        return 'ActiveSet(support={})'.format(self.as_dict())


def _finish(active: ActiveSet, weights: np.ndarray, x: np.ndarray, drop_threshold: float,
            dropped: Optional[int] = None) -> ActiveSet:
    small = (weights != 0.0) & (weights <= drop_threshold)
    if np.any(small):
        if dropped is None:
            dropped = int(np.flatnonzero(small)[0])
        weights[small] = 0.0
    if dropped is not None:
        weights /= weights.sum()
        return ActiveSet(atom_set=active.atom_set, weights=weights, dropped=dropped)
    total = weights.sum()
    return ActiveSet(atom_set=active.atom_set, weights=weights / total, x=x / total)


def fw_weight_update(active: ActiveSet, v: int, alpha: float, *,
                     drop_threshold: float = DROP_THRESHOLD) -> ActiveSet:
    """
    Moves a share alpha of the mass onto atom v: beta_v <- (1 - alpha) beta_v + alpha
    and beta_a <- (1 - alpha) beta_a otherwise. A full step collapses the support to v.
    """
    if not 0.0 < alpha <= 1.0:
        raise PreconditionError('Frank-Wolfe step size must lie in (0, 1], got {}'.format(alpha))
    atom_set = active.atom_set
    if alpha == 1.0:
        return ActiveSet.vertex(atom_set, v)

    weights = (1.0 - alpha) * active.weights
    weights[v] += alpha
    x = (1.0 - alpha) * active.x + alpha * atom_set.atom(v)
    return _finish(active, weights, x, drop_threshold)


def away_weight_update(active: ActiveSet, a: int, alpha: float, *,
                       drop_threshold: float = DROP_THRESHOLD) -> ActiveSet:
    """
    Moves mass away from atom a: beta_a <- (1 + alpha) beta_a - alpha and
    beta_b <- (1 + alpha) beta_b otherwise. At the maximal step
    beta_a / (1 - beta_a) the atom leaves the support (drop step).
    """
    if not active.contains(a):
        raise PreconditionError('Away atom {} is not in the support'.format(a))
    if active.support_size < 2:
        raise PreconditionError('Away step is undefined on a singleton support')
    beta = active.weight(a)
    alpha_max = beta / (1.0 - beta)
    if not alpha > 0.0:
        raise PreconditionError('Away step size must be positive, got {}'.format(alpha))
    if alpha > alpha_max * (1.0 + MAX_STEP_SLACK):
        raise PreconditionError('Away step size {} exceeds the maximal step {}'.format(alpha, alpha_max))

    weights = (1.0 + alpha) * active.weights
    if alpha >= alpha_max:
        weights[a] = 0.0
        return _finish(active, weights, active.x, drop_threshold, dropped=a)
    weights[a] = (1.0 + alpha) * beta - alpha
    x = (1.0 + alpha) * active.x - alpha * active.atom_set.atom(a)
    return _finish(active, weights, x, drop_threshold)
