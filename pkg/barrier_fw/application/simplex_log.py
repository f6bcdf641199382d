# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import logging
import math
from typing import Optional

import numpy as np
from overrides import overrides

from barrier_fw.barrier.neglog_barrier import NeglogBarrier
from barrier_fw.exception import (ConstructionError, DomainViolationError,
                                  NumericalFaultError)
from barrier_fw.polytope.active_set import ActiveSet
from barrier_fw.polytope.atom_set import AtomSet
from barrier_fw.solver.problem_instance import Direction, ProblemInstance
from barrier_fw.util import array_digest, as_float_array

LOGGER = logging.getLogger(__name__)

# u is recomputed from the weights after this many incremental updates
REFRESH_PERIOD = 50
MAX_NEWTON_STEPS = 200
NEWTON_TOLERANCE = 1e-15


class SimplexLogInstance(ProblemInstance):
    """
    F(x) = -sum_i ln(r_i^T x) over the unit simplex for a nonnegative data matrix with
    rows r_i. Covers log-optimal investment, PET reconstruction and the rescaled
    Hawkes likelihood. theta = m, the number of rows.
    """
    def __init__(self, rows: np.ndarray, *, name: str = 'simplexlog') -> None:
        try:
            rows = as_float_array(rows, ndim=2, name='rows')
        except ValueError as e:
            raise ConstructionError(str(e))
        if rows.shape[0] == 0 or rows.shape[1] == 0:
            raise ConstructionError('Data matrix must be non-empty, got shape {}'.format(rows.shape))
        if np.any(rows < 0):
            raise ConstructionError('Data matrix must be nonnegative')
        zero_rows = np.flatnonzero(~np.any(rows > 0, axis=1))
        if zero_rows.size:
            raise ConstructionError('Data matrix has all-zero rows {}'.format(zero_rows[:10].tolist()))
        m, p = rows.shape
        # a column positive in every row is a single atom with A a inside the domain
        q = 1 if np.any(np.all(rows > 0, axis=0)) else None
        super().__init__(atom_set=AtomSet.simplex(p), barrier=NeglogBarrier(m), q=q, name=name)
        rows.setflags(write=False)
        self.rows = rows
        self._u = None  # type: Optional[np.ndarray]
        self._updates_since_refresh = 0

    @property
    def u(self) -> np.ndarray:
        return self._u

    def _image(self, weights: np.ndarray) -> np.ndarray:
        support = np.flatnonzero(weights)
        return self.rows[:, support] @ weights[support]

    def _require_domain(self, u: np.ndarray) -> np.ndarray:
        if not np.all(u > 0):
            raise DomainViolationError('A x of {} has non-positive entries'.format(self.name))
        return u

    @overrides
    def _rebuild(self) -> None:
        self._u = self._require_domain(self._image(self.weights))
        self._updates_since_refresh = 0

    def _image_step(self, direction: Direction) -> np.ndarray:
        column = self.rows[:, direction.atom_id]
        return column - self._u if direction.is_fw else self._u - column

    def _ratios(self, direction: Direction) -> np.ndarray:
        return self._image_step(direction) / self._u

    @overrides
    def objective(self) -> float:
        return float(-np.sum(np.log(self._u)))

    @overrides
    def atom_gradients(self) -> np.ndarray:
        return -(self.rows.T @ (1.0 / self._u))

    @overrides
    def local_norm(self, direction: Direction) -> float:
        ratios = self._ratios(direction)
        return math.sqrt(float(ratios @ ratios))

    @overrides
    def in_domain_along(self, direction: Direction, alpha: float) -> bool:
        return bool(np.all(1.0 + alpha * self._ratios(direction) > 0))

    @overrides
    def decrement_along(self, direction: Direction, alpha: float) -> float:
        scaled = alpha * self._ratios(direction)
        if not np.all(1.0 + scaled > 0):
            raise DomainViolationError('Step {} leaves the positive orthant'.format(alpha))
        return float(-np.sum(np.log1p(scaled)))

    @overrides
    def slope_along(self, direction: Direction, alpha: float) -> float:
        ratios = self._ratios(direction)
        return float(-np.sum(ratios / (1.0 + alpha * ratios)))

    @overrides
    def closed_form_linesearch(self, direction: Direction) -> Optional[float]:
        return newton_linesearch(self._ratios(direction), direction.max_step)

    @overrides
    def apply_step(self, direction: Direction, alpha: float, *, weights: Optional[np.ndarray] = None) -> None:
        step = self._image_step(direction)
        self._weights = np.array(weights if weights is not None else self._step_weights(direction, alpha))
        self._updates_since_refresh += 1
        if self._updates_since_refresh >= REFRESH_PERIOD:
            self._rebuild()
            return
        self._u = self._require_domain(self._u + alpha * step)

    @overrides
    def value_at(self, weights: np.ndarray) -> float:
        u = self._require_domain(self._image(np.asarray(weights, dtype=float)))
        return float(-np.sum(np.log(u)))

    @overrides
    def gradient_at(self, weights: np.ndarray) -> np.ndarray:
        u = self._require_domain(self._image(np.asarray(weights, dtype=float)))
        return -(self.rows.T @ (1.0 / u))

    @overrides
    def fingerprint(self) -> str:
        return array_digest(type(self).__name__, self.rows)


def newton_linesearch(ratios: np.ndarray, max_step: float) -> float:
    """
    Minimizer over (0, max_step] of phi(alpha) = -sum_i ln(1 + alpha rho_i), where
    rho_i = (A d)_i / u_i. phi is convex, so Newton steps on phi' are kept inside a
    shrinking bracket and replaced by bisection whenever they leave it.

    :raises NumericalFaultError: when the direction is not a descent direction
    """
    def slope(alpha: float) -> float:
        return float(-np.sum(ratios / (1.0 + alpha * ratios)))

    def curvature(alpha: float) -> float:
        scaled = ratios / (1.0 + alpha * ratios)
        return float(scaled @ scaled)

    initial_slope = slope(0.0)
    if not initial_slope < 0:
        raise NumericalFaultError('Line-search direction is not a descent direction (slope {})'.format(initial_slope))
    negative = ratios < 0
    boundary = float(np.min(-1.0 / ratios[negative])) if np.any(negative) else math.inf
    if max_step < boundary and slope(max_step) <= 0:
        return max_step

    lo, hi = 0.0, min(max_step, boundary)
    alpha = min(-initial_slope / curvature(0.0), 0.5 * hi)
    for _ in range(MAX_NEWTON_STEPS):
        current = slope(alpha)
        if current < 0:
            lo = alpha
        else:
            hi = alpha
        if current == 0 or hi - lo <= NEWTON_TOLERANCE * max(1.0, hi):
            break
        candidate = alpha - current / curvature(alpha)
        alpha = candidate if lo < candidate < hi else 0.5 * (lo + hi)
    else:
        LOGGER.warning('Newton line-search stopped after {} steps with bracket width {}'.format(
            MAX_NEWTON_STEPS, hi - lo))
    return alpha


def simplexlog_build(rows: np.ndarray, weights: Optional[np.ndarray] = None, *,
                     name: str = 'simplexlog') -> SimplexLogInstance:
    """
    Simplex log-barrier instance positioned at the given weights (uniform by default).

    :raises ConstructionError: on negative entries or an all-zero row
    :raises DomainViolationError: when the start gives a non-positive A x
    """
    instance = SimplexLogInstance(rows, name=name)
    if weights is None:
        start = ActiveSet.uniform(instance.atom_set)
    else:
        start = ActiveSet.from_weights(instance.atom_set, weights)
    instance.reset(start)
    return instance
