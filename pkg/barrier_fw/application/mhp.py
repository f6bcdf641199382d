# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

"""
Maximum-likelihood inference for multivariate Hawkes processes with the kernel
exp(-(t - t_i)). The likelihood separates along dimensions; for dimension k the
l1-penalized problem over (mu_k, a_k) >= 0 is rescaled onto the simplex of R^(m+1)
and solved as a simplex log-barrier instance with rows (1/t, w_i).
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import attr
import numpy as np

from barrier_fw.application.simplex_log import SimplexLogInstance
from barrier_fw.exception import DomainViolationError, PreconditionError
from barrier_fw.polytope.active_set import ActiveSet

LOGGER = logging.getLogger(__name__)


def _float_vector(value: Sequence[float]) -> np.ndarray:
    return np.asarray(value, dtype=float).reshape(-1)


def _int_vector(value: Sequence[int]) -> np.ndarray:
    return np.asarray(value, dtype=int).reshape(-1)


@attr.s(auto_attribs=True, kw_only=True, frozen=True)
class MhpArrivals:
    """
    Arrival points (t_i, h_i) on [0, horizon), sorted by time. Dimensions are 0-based.
    """
    horizon: float = attr.ib()
    times: np.ndarray = attr.ib(converter=_float_vector)
    dims: np.ndarray = attr.ib(converter=_int_vector)
    m: int = attr.ib()

    def __attrs_post_init__(self) -> None:
        if not self.horizon > 0:
            raise PreconditionError('Horizon must be positive, got {}'.format(self.horizon))
        if self.m < 1:
            raise PreconditionError('Need at least one dimension, got {}'.format(self.m))
        if self.times.shape != self.dims.shape:
            raise PreconditionError('Got {} arrival times but {} dimension labels'.format(
                self.times.size, self.dims.size))
        if self.times.size == 0:
            return
        if not np.all(np.isfinite(self.times)) or self.times[0] < 0 or self.times[-1] >= self.horizon:
            raise PreconditionError('Arrival times must lie in [0, {})'.format(self.horizon))
        if np.any(np.diff(self.times) < 0):
            raise PreconditionError('Arrival times must be sorted')
        if self.dims.min() < 0 or self.dims.max() >= self.m:
            raise PreconditionError('Dimension labels must lie in [0, {})'.format(self.m))

    @property
    def size(self) -> int:
        return int(self.times.size)

    @property
    def counts(self) -> np.ndarray:
        return np.bincount(self.dims, minlength=self.m)


@attr.s(auto_attribs=True, kw_only=True)
class MhpDimensionInstance:
    """
    The rescaled likelihood problem of one dimension k. raw_weights holds w_bar_i for
    the events on k; the simplex instance has rows (1/t, w_bar_i / (v + lambda)).
    """
    dimension: int = attr.ib()
    raw_weights: np.ndarray = attr.ib()
    v: np.ndarray = attr.ib()
    regularization: float = attr.ib()
    horizon: float = attr.ib()
    instance: SimplexLogInstance = attr.ib()

    @property
    def event_count(self) -> int:
        return int(self.raw_weights.shape[0])

    @property
    def weights(self) -> np.ndarray:
        return self.raw_weights / (self.v + self.regularization)

    def vertex_start(self) -> ActiveSet:
        """
        (mu, a) = (1, 0): a single atom, feasible since every row starts with 1/t > 0
        """
        return ActiveSet.vertex(self.instance.atom_set, 0)

    def penalized_negative_loglik(self, mu: float, a: np.ndarray) -> float:
        """
        -sum_i ln(mu + w_bar_i^T a) + t mu + v^T a + lambda |a|_1 for (mu, a) >= 0

        :raises DomainViolationError: when some event intensity is not positive
        """
        a = np.asarray(a, dtype=float)
        intensities = mu + self.raw_weights @ a
        if not np.all(intensities > 0):
            raise DomainViolationError('Non-positive event intensity for dimension {}'.format(self.dimension))
        return float(-np.sum(np.log(intensities)) + self.horizon * mu + self.v @ a + self.regularization * a.sum())

    def map_back(self, solution: np.ndarray) -> Tuple[float, np.ndarray]:
        solution = np.asarray(solution, dtype=float)
        return mhp_map_back(solution[0], solution[1:], self.horizon, self.v, self.regularization)

    def recover_parameters(self, solution: np.ndarray) -> Tuple[float, np.ndarray]:
        solution = np.asarray(solution, dtype=float)
        return mhp_recover_parameters(solution[0], solution[1:], self.horizon, self.v, self.regularization,
                                      self.event_count)


def event_weights(arrivals: MhpArrivals) -> np.ndarray:
    """
    w_bar_i = sum over earlier events j on each dimension l of exp(-(t_i - t_j)), one row
    per event. Events at the same instant do not excite each other. Uses the running
    sums S_l(t') = exp(-(t' - t)) (S_l(t) + events on l at t).
    """
    weights = np.zeros((arrivals.size, arrivals.m))
    if arrivals.size == 0:
        return weights
    running = np.zeros(arrivals.m)
    previous = arrivals.times[0]
    start = 0
    while start < arrivals.size:
        current = arrivals.times[start]
        end = start
        while end < arrivals.size and arrivals.times[end] == current:
            end += 1
        running *= math.exp(-(current - previous))
        weights[start:end] = running
        np.add.at(running, arrivals.dims[start:end], 1.0)
        previous = current
        start = end
    return weights


def compensator_weights(arrivals: MhpArrivals) -> np.ndarray:
    """
    v_l = sum over events i on l of 1 - exp(-(t - t_i))
    """
    return np.bincount(arrivals.dims, weights=-np.expm1(-(arrivals.horizon - arrivals.times)),
                       minlength=arrivals.m)


def mhp_ingest(arrivals: MhpArrivals, regularization: float = 0.0, *,
               dimensions: Optional[Sequence[int]] = None) -> List[MhpDimensionInstance]:
    """
    Per-dimension rescaled likelihood instances, for all dimensions by default.

    :param dimensions: 0-based dimensions to build instances for
    :raises PreconditionError: on a negative regularization or a dimension without events
    """
    if regularization < 0:
        raise PreconditionError('Regularization must be nonnegative, got {}'.format(regularization))
    counts = arrivals.counts
    empty = np.flatnonzero(counts == 0)
    if empty.size:
        raise PreconditionError('Dimensions {} have no arrival points'.format((empty + 1).tolist()))
    if dimensions is None:
        dimensions = range(arrivals.m)

    raw = event_weights(arrivals)
    v = compensator_weights(arrivals)
    scale = v + regularization
    instances = []  # type: List[MhpDimensionInstance]
    for k in dimensions:
        if not 0 <= k < arrivals.m:
            raise PreconditionError('Dimension {} out of range [0, {})'.format(k, arrivals.m))
        raw_k = raw[arrivals.dims == k]
        rows = np.hstack([np.full((raw_k.shape[0], 1), 1.0 / arrivals.horizon), raw_k / scale])
        instance = SimplexLogInstance(rows, name='mhp-dim{}'.format(k + 1))
        instances.append(MhpDimensionInstance(dimension=k,
                                              raw_weights=raw_k,
                                              v=v,
                                              regularization=regularization,
                                              horizon=arrivals.horizon,
                                              instance=instance))
        LOGGER.info('Ingested dimension {}: {} events, {} simplex atoms'.format(
            k + 1, raw_k.shape[0], rows.shape[1]))
    return instances


def mhp_map_back(mu_star: float, a_star: np.ndarray, horizon: float, v: np.ndarray,
                 regularization: float = 0.0) -> Tuple[float, np.ndarray]:
    """
    (mu* / t, a* / (v + lambda e)) for a point (mu*, a*) of the rescaled simplex problem
    """
    return mu_star / horizon, np.asarray(a_star, dtype=float) / (np.asarray(v, dtype=float) + regularization)


def mhp_recover_parameters(mu_star: float, a_star: np.ndarray, horizon: float, v: np.ndarray,
                           regularization: float, event_count: int) -> Tuple[float, np.ndarray]:
    """
    Base intensity and infectivity row minimizing the penalized negative
    log-likelihood. The objective is logarithmically homogeneous in (mu, a), so its
    minimizer is the mapped-back simplex solution scaled by the number of events.
    """
    mu, a = mhp_map_back(mu_star, a_star, horizon, v, regularization)
    return event_count * mu, event_count * a
