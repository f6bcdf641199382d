# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

from abc import ABCMeta, abstractmethod
from typing import Any, Tuple

import numpy as np

from barrier_fw.exception import DomainViolationError


class Barrier(metaclass=ABCMeta):
    """
    A theta-logarithmically-homogeneous self-concordant barrier on the interior of a
    regular cone. The Hessian is only exposed as a quadratic form; gradients are
    covectors paired with points through pair().

    Barrier objects are immutable after construction and can be evaluated
    concurrently.
    """
    def __init__(self, *, theta: float, shape: Tuple[int, ...]) -> None:
        self._theta = float(theta)
        self._shape = shape

    @property
    def theta(self) -> float:
        return self._theta

    @property
    def shape(self) -> Tuple[int, ...]:
        return self._shape

    @abstractmethod
    def value(self, y: np.ndarray, **kwargs: Any) -> float:
        pass

    @abstractmethod
    def gradient(self, y: np.ndarray, **kwargs: Any) -> np.ndarray:
        pass

    @abstractmethod
    def hess_qform(self, y: np.ndarray, u: np.ndarray, **kwargs: Any) -> float:
        pass

    @abstractmethod
    def in_domain(self, y: np.ndarray) -> bool:
        pass

    def pair(self, g: np.ndarray, u: np.ndarray) -> float:
        return float(np.vdot(g, u))

    def local_norm(self, y: np.ndarray, u: np.ndarray, **kwargs: Any) -> float:
        return float(np.sqrt(max(self.hess_qform(y, u, **kwargs), 0.0)))

    def _check_shape(self, y: np.ndarray, name: str = 'point') -> None:
        if np.shape(y) != self._shape:
            raise DomainViolationError('{} has shape {}, barrier expects {}'.format(name, np.shape(y), self._shape))

    def __repr__(self) -> str:
        return '{}(theta={}, shape={})'.format(type(self).__name__, self._theta, self._shape)
