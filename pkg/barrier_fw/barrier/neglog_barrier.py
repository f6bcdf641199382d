# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

from typing import Any

import numpy as np
from overrides import overrides

from barrier_fw.barrier.base_barrier import Barrier
from barrier_fw.exception import DomainViolationError


class NeglogBarrier(Barrier):
    """
    f(y) = -sum_i ln(y_i) on the positive orthant of R^m, theta = m.
    """
    def __init__(self, m: int) -> None:
        if m < 1:
            raise ValueError('Orthant dimension must be positive, got {}'.format(m))
        super().__init__(theta=m, shape=(m,))

    @overrides
    def in_domain(self, y: np.ndarray) -> bool:
        return bool(np.shape(y) == self.shape and np.all(np.isfinite(y)) and np.all(y > 0))

    def _require_domain(self, y: np.ndarray) -> None:
        if not self.in_domain(y):
            raise DomainViolationError('Point is outside the positive orthant')

    @overrides
    def value(self, y: np.ndarray, **kwargs: Any) -> float:
        self._require_domain(y)
        return float(-np.sum(np.log(y)))

    @overrides
    def gradient(self, y: np.ndarray, **kwargs: Any) -> np.ndarray:
        self._require_domain(y)
        return -1.0 / y

    @overrides
    def hess_qform(self, y: np.ndarray, u: np.ndarray, **kwargs: Any) -> float:
        self._require_domain(y)
        self._check_shape(u, 'direction')
        ratio = u / y
        return float(np.dot(ratio, ratio))
