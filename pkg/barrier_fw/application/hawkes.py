# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from barrier_fw.application.mhp import MhpArrivals
from barrier_fw.exception import PreconditionError, SimulationError

LOGGER = logging.getLogger(__name__)

HAWKES_MAX_EVENTS = 5000000
STABILITY_MARGIN = 1.0


def spectral_radius(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(matrix)))) if matrix.size else 0.0


def hawkes_simulate(mu: np.ndarray, excitation: np.ndarray, horizon: float, seed: int = 0, *,
                    max_events: Optional[int] = None) -> MhpArrivals:
    """
    Simulates lambda_k(t) = mu_k + sum_i A[h_i, k] exp(-(t - t_i)) on [0, horizon) by
    Ogata thinning. Between events the intensity only decays, so the total intensity
    right after the last accepted point bounds it until the next one.

    :param mu: nonnegative base intensities
    :param excitation: nonnegative matrix A, A[h, k] is the jump of lambda_k after an event on h
    :raises PreconditionError: on negative parameters or spectral radius of A >= 1
    :raises SimulationError: when more than max_events points are generated
    """
    mu = np.asarray(mu, dtype=float).reshape(-1)
    excitation = np.asarray(excitation, dtype=float)
    m = mu.size
    if excitation.shape != (m, m):
        raise PreconditionError('Excitation matrix must be {0}x{0}, got {1}'.format(m, excitation.shape))
    if np.any(mu < 0) or np.any(excitation < 0):
        raise PreconditionError('Hawkes parameters must be nonnegative')
    if spectral_radius(excitation) >= STABILITY_MARGIN:
        raise PreconditionError('Excitation matrix has spectral radius {} >= 1'.format(spectral_radius(excitation)))
    if not horizon > 0:
        raise PreconditionError('Horizon must be positive, got {}'.format(horizon))
    if max_events is None:
        max_events = HAWKES_MAX_EVENTS

    rng = np.random.default_rng(seed)
    excited = np.zeros(m)
    base_rate = float(mu.sum())
    times = []  # type: List[float]
    dims = []  # type: List[int]
    now = 0.0
    while True:
        bound = base_rate + float(excited.sum())
        if bound <= 0:
            break
        wait = rng.exponential(1.0 / bound)
        now += wait
        if now >= horizon:
            break
        excited *= math.exp(-wait)
        cumulative = np.cumsum(mu + excited)
        draw = rng.uniform() * bound
        if draw >= cumulative[-1]:
            continue
        k = min(int(np.searchsorted(cumulative, draw, side='right')), m - 1)
        times.append(now)
        dims.append(k)
        excited += excitation[k]
        if len(times) > max_events:
            raise SimulationError('Hawkes simulation exceeded {} events before t={}'.format(max_events, now))

    LOGGER.info('Simulated {} Hawkes events on {} dimensions up to t={}'.format(len(times), m, horizon))
    return MhpArrivals(horizon=horizon, times=times, dims=dims, m=m)


def mhp_random_parameters(m: int, *, mu: float = 0.1, sparsity: float = 0.9, radius: float = 0.9,
                          low: float = 0.1, high: float = 0.5, seed: int = 0) -> Tuple[np.ndarray, np.ndarray]:
    """
    Constant base intensities and a sparse excitation matrix: entries drawn from
    U[low, high], a share `sparsity` of them zeroed, then scaled to the given spectral
    radius.
    """
    if m < 1:
        raise PreconditionError('Need at least one dimension, got {}'.format(m))
    if not 0.0 <= sparsity < 1.0 or not 0.0 < radius < 1.0 or not mu > 0 or not 0.0 < low <= high:
        raise PreconditionError('Invalid Hawkes generator settings: sparsity={}, radius={}, mu={}, range=[{}, {}]'
                                .format(sparsity, radius, mu, low, high))
    rng = np.random.default_rng(seed)
    excitation = rng.uniform(low, high, size=(m, m))
    excitation[rng.uniform(size=(m, m)) < sparsity] = 0.0
    current = spectral_radius(excitation)
    if current > 0:
        excitation *= radius / current
    return np.full(m, mu), excitation
