# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

"""
D-optimal design: minimize F(x) = -ln det(sum_i x_i a_i a_i^T) over the unit simplex.

The instance keeps M(x)^-1 and the scores g_i = a_i^T M^-1 a_i up to date with
rank-one corrections, so an iteration costs O(mn) for the score refresh plus O(n^2)
for the inverse. Gradients are -g, theta = n, and sum_i x_i g_i = n at every point.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np
import scipy.linalg
from overrides import overrides

from barrier_fw.barrier.logdet_barrier import LogdetBarrier, cholesky_factor
from barrier_fw.entity.step_kind import StepKind
from barrier_fw.exception import (ConstructionError, DomainViolationError,
                                  InvariantViolationError, PreconditionError)
from barrier_fw.polytope.active_set import ActiveSet
from barrier_fw.polytope.atom_set import AtomSet
from barrier_fw.solver.problem_instance import Direction, ProblemInstance
from barrier_fw.util import array_digest, as_float_array

LOGGER = logging.getLogger(__name__)

REFACTOR_PERIOD = 50
# conditioning alarms forcing a refactorization
NEGATIVE_SCORE_ALARM = -1e-8
SCORE_IDENTITY_ALARM = 1e-6
SCORE_IDENTITY_TOLERANCE = 1e-8
# rank-one denominators below this are treated as a singular update
SINGULAR_DENOMINATOR = 1e-12
MAX_REGENERATIONS = 100


class DoptInstance(ProblemInstance):
    def __init__(self, points: np.ndarray, *,
                 refactor_period: int = REFACTOR_PERIOD,
                 name: str = 'dopt') -> None:
        try:
            points = as_float_array(points, ndim=2, name='points')
        except ValueError as e:
            raise ConstructionError(str(e))
        m, n = points.shape
        if m < n + 1:
            raise ConstructionError('D-optimal design needs m >= n + 1 points, got m={} n={}'.format(m, n))
        if np.linalg.matrix_rank(points) < n:
            raise ConstructionError('Design points do not span R^{}'.format(n))
        if refactor_period < 1:
            raise ConstructionError('Refactorization period must be positive, got {}'.format(refactor_period))
        super().__init__(atom_set=AtomSet.simplex(m), barrier=LogdetBarrier(n), q=n, name=name)
        points.setflags(write=False)
        self.points = points
        self.n = n
        self.refactor_period = refactor_period
        self.refactorizations = 0
        self._inverse = None  # type: Optional[np.ndarray]
        self._scores = None  # type: Optional[np.ndarray]
        self._logdet = 0.0
        self._updates_since_refactor = 0

    @property
    @overrides
    def default_smoothness(self) -> float:
        # -ln det(sum x_i a_i a_i^T) is 1-smooth relative to -sum ln x_i
        return 1.0

    @property
    def inverse(self) -> np.ndarray:
        return self._inverse

    @property
    def scores(self) -> np.ndarray:
        return self._scores

    def moment(self, weights: np.ndarray) -> np.ndarray:
        """
        M(x) = sum_i x_i a_i a_i^T
        """
        support = np.flatnonzero(weights)
        points = self.points[support]
        return (points.T * weights[support]) @ points

    def _factorize(self, weights: np.ndarray) -> np.ndarray:
        factor = cholesky_factor(self.moment(weights))
        if factor is None:
            raise DomainViolationError('M(x) of {} is singular'.format(self.name))
        return factor

    def _scores_from(self, inverse: np.ndarray) -> np.ndarray:
        return np.einsum('ij,jk,ik->i', self.points, inverse, self.points)

    def refactor(self) -> None:
        """
        Recomputes M^-1, ln det M and the scores from the current weights.

        :raises DomainViolationError: when M(x) is numerically singular
        """
        factor = self._factorize(self.weights)
        self._inverse = scipy.linalg.cho_solve((factor, True), np.eye(self.n), check_finite=False)
        self._logdet = float(2.0 * np.sum(np.log(np.diag(factor))))
        self._scores = self._scores_from(self._inverse)
        self._updates_since_refactor = 0
        self.refactorizations += 1

    @overrides
    def _rebuild(self) -> None:
        self.refactor()

    def identity_error(self) -> float:
        """
        |sum_i x_i g_i - n|
        """
        support = np.flatnonzero(self.weights)
        return abs(float(self.weights[support] @ self._scores[support]) - self.n)

    @overrides
    def objective(self) -> float:
        return -self._logdet

    @overrides
    def atom_gradients(self) -> np.ndarray:
        return -self._scores

    @overrides
    def local_norm(self, direction: Direction) -> float:
        return dopt_qform(float(self._scores[direction.atom_id]), self.n)

    @overrides
    def closed_form_linesearch(self, direction: Direction) -> Optional[float]:
        score = float(self._scores[direction.atom_id])
        if direction.is_fw:
            return dopt_linesearch_fw(score, self.n)
        return dopt_linesearch_away(score, self.n, direction.max_step)

    def _factors(self, direction: Direction, alpha: float) -> Tuple[float, float]:
        """
        (outer, rank_one) with det(M + alpha A d) = outer^(n-1) * rank_one * det M
        """
        score = float(self._scores[direction.atom_id])
        if direction.is_fw:
            return 1.0 - alpha, 1.0 - alpha + alpha * score
        return 1.0 + alpha, 1.0 + alpha - alpha * score

    @overrides
    def in_domain_along(self, direction: Direction, alpha: float) -> bool:
        outer, rank_one = self._factors(direction, alpha)
        if self.n > 1 and not outer > 0.0:
            return False
        return rank_one > 0.0

    @overrides
    def decrement_along(self, direction: Direction, alpha: float) -> float:
        if not self.in_domain_along(direction, alpha):
            raise DomainViolationError('Step {} leaves the positive-definite cone'.format(alpha))
        score = float(self._scores[direction.atom_id])
        sign = 1.0 if direction.is_fw else -1.0
        rank_one_log = math.log1p(sign * alpha * (score - 1.0))
        if self.n == 1:
            return -rank_one_log
        return -((self.n - 1) * math.log1p(-sign * alpha) + rank_one_log)

    @overrides
    def slope_along(self, direction: Direction, alpha: float) -> float:
        score = float(self._scores[direction.atom_id])
        outer, rank_one = self._factors(direction, alpha)
        spread = (self.n - 1) / outer if self.n > 1 else 0.0
        if direction.is_fw:
            return spread - (score - 1.0) / rank_one
        return -spread + (score - 1.0) / rank_one

    @overrides
    def apply_step(self, direction: Direction, alpha: float, *, weights: Optional[np.ndarray] = None) -> None:
        if not alpha > 0.0:
            raise PreconditionError('Step size must be positive, got {}'.format(alpha))
        self._weights = np.array(weights if weights is not None else self._step_weights(direction, alpha))
        outer, rank_one = self._factors(direction, alpha)
        if outer <= SINGULAR_DENOMINATOR or rank_one <= SINGULAR_DENOMINATOR:
            LOGGER.warning('Near-singular rank-one update on {} (factors {:.3e}, {:.3e}); refactorizing'
                           .format(self.name, outer, rank_one))
            self.refactor()
            return

        atom_id = direction.atom_id
        solved = self._inverse @ self.points[atom_id]
        cross = self.points @ solved
        sign = -1.0 if direction.is_fw else 1.0
        correction = alpha / rank_one
        # Sherman-Morrison on M' = outer * (M + sign alpha / outer a a^T)
        self._inverse = (self._inverse + sign * correction * np.outer(solved, solved)) / outer
        self._inverse = 0.5 * (self._inverse + self._inverse.T)
        self._scores = (self._scores + sign * correction * cross * cross) / outer
        self._logdet += (self.n - 1) * math.log(outer) + math.log(rank_one)
        self._updates_since_refactor += 1

        if self._updates_since_refactor >= self.refactor_period:
            self.refactor()
        elif np.min(self._scores) < NEGATIVE_SCORE_ALARM or self.identity_error() > SCORE_IDENTITY_ALARM:
            LOGGER.warning('Conditioning alarm on {} after {} updates; refactorizing'.format(
                self.name, self._updates_since_refactor))
            self.refactor()

    @overrides
    def value_at(self, weights: np.ndarray) -> float:
        factor = self._factorize(np.asarray(weights, dtype=float))
        return float(-2.0 * np.sum(np.log(np.diag(factor))))

    @overrides
    def gradient_at(self, weights: np.ndarray) -> np.ndarray:
        factor = self._factorize(np.asarray(weights, dtype=float))
        inverse = scipy.linalg.cho_solve((factor, True), np.eye(self.n), check_finite=False)
        return -self._scores_from(inverse)

    @overrides
    def verify(self, *, tolerance: float = 1e-8) -> None:
        super().verify(tolerance=tolerance)
        if self.identity_error() > SCORE_IDENTITY_TOLERANCE * self.n:
            raise InvariantViolationError('Score identity off by {} on {}'.format(self.identity_error(), self.name))

    @overrides
    def fingerprint(self) -> str:
        return array_digest(type(self).__name__, self.points)


def dopt_build(points: np.ndarray, weights: Optional[np.ndarray] = None, *,
               refactor_period: int = REFACTOR_PERIOD, name: str = 'dopt') -> DoptInstance:
    """
    D-optimal design instance positioned at the given weights (uniform by default).

    :raises ConstructionError: when the points are too few or do not span R^n
    :raises DomainViolationError: when M(x0) is singular
    """
    instance = DoptInstance(points, refactor_period=refactor_period, name=name)
    if weights is None:
        start = ActiveSet.uniform(instance.atom_set)
    else:
        start = ActiveSet.from_weights(instance.atom_set, weights)
    instance.reset(start)
    return instance


def dopt_scores(instance: DoptInstance) -> np.ndarray:
    """
    g_i = a_i^T M^-1 a_i at the current point.

    :raises InvariantViolationError: when the cached scores violate sum_i x_i g_i = n
    """
    error = instance.identity_error()
    if error > SCORE_IDENTITY_TOLERANCE * instance.n:
        raise InvariantViolationError('Stale score cache on {}: identity off by {}'.format(instance.name, error))
    return np.array(instance.scores)


def dopt_qform(score: float, n: int) -> float:
    """
    Local norm of A d for d = e_i - x or d = x - e_i: D^2 = g^2 - 2g + n
    """
    return math.sqrt(max(score * score - 2.0 * score + n, 0.0))


def dopt_linesearch_fw(score: float, n: int) -> float:
    """
    Maximizer of det((1 - alpha) M + alpha a a^T) = (1 - alpha)^(n-1) (1 - alpha + alpha g) det M.

    :raises PreconditionError: when g <= n, the atom does not improve
    """
    if not score > n:
        raise PreconditionError('FW line-search toward atom with score {} <= n = {}'.format(score, n))
    alpha = (score / n - 1.0) / (score - 1.0)
    return min(alpha, 1.0)


def dopt_linesearch_away(score: float, n: int, max_step: float) -> float:
    """
    Maximizer over (0, max_step] of det((1 + alpha) M - alpha a a^T)
    = (1 + alpha)^(n-1) (1 + alpha - alpha g) det M.

    :raises PreconditionError: when g >= n
    """
    if not score < n:
        raise PreconditionError('Away line-search from atom with score {} >= n = {}'.format(score, n))
    if not max_step > 0:
        raise PreconditionError('Maximal away step must be positive, got {}'.format(max_step))
    # for g <= 1 the determinant grows along the whole ray
    if score <= 1.0:
        return max_step
    return min((n - score) / (n * (score - 1.0)), max_step)


def dopt_apply_step(instance: DoptInstance, atom_id: int, alpha: float, kind: StepKind) -> DoptInstance:
    """
    M <- (1 - alpha) M + alpha a a^T for a FW step, M <- (1 + alpha) M - alpha a a^T
    for an away step, with M^-1 and the scores updated in place.
    """
    if kind == StepKind.FW:
        direction = Direction(kind=StepKind.FW, atom_id=atom_id, max_step=1.0)
    else:
        beta = float(instance.weights[atom_id])
        if beta <= 0.0 or beta >= 1.0:
            raise PreconditionError('Away step from atom {} with weight {}'.format(atom_id, beta))
        direction = Direction(kind=StepKind.AWAY, atom_id=atom_id, max_step=beta / (1.0 - beta))
    instance.apply_step(direction, alpha)
    return instance


def dopt_random(m: int, n: int, scale: float = 10.0, seed: int = 0) -> np.ndarray:
    """
    m points drawn from N(0, scale I_n), redrawn from a fresh seed stream until they
    span R^n.
    """
    if m < n + 1:
        raise PreconditionError('D-optimal design needs m >= n + 1 points, got m={} n={}'.format(m, n))
    if not scale > 0:
        raise PreconditionError('Covariance scale must be positive, got {}'.format(scale))
    rng = np.random.default_rng(seed)
    for attempt in range(MAX_REGENERATIONS):
        points = rng.normal(scale=math.sqrt(scale), size=(m, n))
        if np.linalg.matrix_rank(points) == n:
            return points
        LOGGER.warning('Rank-deficient D-opt sample for seed {}; redrawing'.format(seed))
        rng = np.random.default_rng([seed, attempt + 1])
    raise InvariantViolationError('Could not draw {} spanning points in R^{}'.format(m, n))


def dopt_basis_start(points: np.ndarray) -> np.ndarray:
    """
    Weights 1/n on n linearly independent points picked by pivoted QR, the smallest
    support giving a non-singular M.
    """
    points = np.asarray(points, dtype=float)
    n = points.shape[1]
    _, _, pivots = scipy.linalg.qr(points.T, mode='economic', pivoting=True)
    weights = np.zeros(points.shape[0])
    weights[pivots[:n]] = 1.0 / n
    return weights
