# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

from typing import Any, Optional

import numpy as np
import scipy.linalg
from overrides import overrides

from barrier_fw.barrier.base_barrier import Barrier
from barrier_fw.exception import DomainViolationError

# Relative pivot margin: squared Cholesky pivots must exceed this times trace(M)/n
PIVOT_MARGIN = 1e-14
SYMMETRY_TOLERANCE = 1e-10


def cholesky_factor(matrix: np.ndarray) -> Optional[np.ndarray]:
    """
    Lower Cholesky factor of a symmetric matrix, or None if the matrix is not
    positive definite with the pivot margin.
    """
    n = matrix.shape[0]
    scale = np.trace(matrix) / n
    if not np.isfinite(scale) or scale <= 0:
        return None
    try:
        factor = scipy.linalg.cholesky(matrix, lower=True, check_finite=False)
    except np.linalg.LinAlgError:
        return None
    pivots = np.diag(factor) ** 2
    if not np.all(np.isfinite(pivots)) or np.min(pivots) <= PIVOT_MARGIN * scale:
        return None
    return factor


class LogdetBarrier(Barrier):
    """
    f(M) = -ln det M on the cone of symmetric positive-definite n x n matrices,
    theta = n. The gradient -M^-1 is paired with directions through the Frobenius
    inner product.

    Callers that maintain M^-1 themselves pass it as `inverse`; otherwise it is
    computed from a Cholesky factorization on every call.
    """
    def __init__(self, n: int) -> None:
        if n < 1:
            raise ValueError('Matrix order must be positive, got {}'.format(n))
        super().__init__(theta=n, shape=(n, n))

    @overrides
    def in_domain(self, y: np.ndarray) -> bool:
        if np.shape(y) != self.shape or not np.all(np.isfinite(y)):
            return False
        if np.max(np.abs(y - y.T)) > SYMMETRY_TOLERANCE * max(1.0, np.max(np.abs(y))):
            return False
        return cholesky_factor(y) is not None

    def _factor(self, y: np.ndarray) -> np.ndarray:
        self._check_shape(y)
        factor = cholesky_factor(0.5 * (y + y.T))
        if factor is None:
            raise DomainViolationError('Matrix is not positive definite')
        return factor

    def _inverse(self, y: np.ndarray, inverse: Optional[np.ndarray]) -> np.ndarray:
        if inverse is not None:
            return inverse
        factor = self._factor(y)
        return scipy.linalg.cho_solve((factor, True), np.eye(self.shape[0]), check_finite=False)

    @overrides
    def value(self, y: np.ndarray, **kwargs: Any) -> float:
        factor = self._factor(y)
        return float(-2.0 * np.sum(np.log(np.diag(factor))))

    @overrides
    def gradient(self, y: np.ndarray, *, inverse: Optional[np.ndarray] = None, **kwargs: Any) -> np.ndarray:
        return -self._inverse(y, inverse)

    @overrides
    def hess_qform(self, y: np.ndarray, u: np.ndarray, *,
                   inverse: Optional[np.ndarray] = None, **kwargs: Any) -> float:
        self._check_shape(u, 'direction')
        product = self._inverse(y, inverse) @ u
        # trace((M^-1 U)^2)
        return float(np.sum(product * product.T))
