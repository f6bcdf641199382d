# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import copy
import logging
from abc import ABCMeta, abstractmethod
from typing import Optional

import attr
import numpy as np
from overrides import overrides

from barrier_fw.barrier.base_barrier import Barrier
from barrier_fw.entity.step_kind import StepKind
from barrier_fw.exception import (ConstructionError, DomainViolationError,
                                  InvariantViolationError)
from barrier_fw.polytope.active_set import ActiveSet
from barrier_fw.polytope.atom_set import AtomSet
from barrier_fw.util import array_digest, as_float_array

LOGGER = logging.getLogger(__name__)


@attr.s(auto_attribs=True, kw_only=True, frozen=True)
class Direction:
    """
    A Frank-Wolfe direction d = v - x toward atom v (max step 1), or an away
    direction d = x - a from atom a (max step beta_a / (1 - beta_a)).
    """
    kind: StepKind = attr.ib()
    atom_id: int = attr.ib()
    max_step: float = attr.ib()

    @property
    def is_fw(self) -> bool:
        return self.kind == StepKind.FW

    def vector(self, active: ActiveSet) -> np.ndarray:
        atom = active.atom_set.atom(self.atom_id)
        return atom - active.x if self.is_fw else active.x - atom


class ProblemInstance(metaclass=ABCMeta):
    """
    F(x) = f(Ax) + <c, x> over conv(atoms), evaluated at a current point whose atom
    weights the instance tracks. Subclasses keep whatever caches make the per-iteration
    queries cheap; instances are mutable and owned by a single run. Use clone() to
    give every run its own copy.
    """
    def __init__(self, *,
                 atom_set: AtomSet,
                 barrier: Barrier,
                 linear_term: Optional[np.ndarray] = None,
                 q: Optional[int] = None,
                 name: str = 'instance') -> None:
        self.atom_set = atom_set
        self.barrier = barrier
        if linear_term is None:
            linear_term = np.zeros(atom_set.size)
        linear_term = np.asarray(linear_term, dtype=float)
        if linear_term.shape != (atom_set.size,):
            raise ConstructionError('Linear term needs one entry per atom, got shape {}'.format(linear_term.shape))
        self.linear_term = linear_term
        self.q = q
        self.name = name
        self._weights = None  # type: Optional[np.ndarray]

    @property
    def theta(self) -> float:
        return self.barrier.theta

    @property
    def linear_variation(self) -> float:
        """
        B = max_a <c, a> - min_a <c, a>
        """
        return float(self.linear_term.max() - self.linear_term.min())

    @property
    def default_smoothness(self) -> float:
        """
        Relative-smoothness constant used by the mirror-descent baselines when none is
        configured. F is theta-smooth relative to -sum ln x on the simplex.
        """
        return float(self.theta)

    @property
    def has_linear_term(self) -> bool:
        return bool(np.any(self.linear_term != 0.0))

    @property
    def weights(self) -> np.ndarray:
        if self._weights is None:
            raise InvariantViolationError('Instance {} has no current point; call reset() first'.format(self.name))
        return self._weights

    def reset(self, active: ActiveSet) -> None:
        """
        Moves the instance to the point of the given active set and rebuilds all caches.

        :raises DomainViolationError: when A x lies outside the barrier domain
        """
        if active.atom_set.size != self.atom_set.size:
            raise ConstructionError('Active set does not belong to the atom set of {}'.format(self.name))
        self._weights = np.array(active.weights, dtype=float)
        self._rebuild()

    def _linear_value(self) -> float:
        return float(self.linear_term @ self.weights)

    def _linear_step(self, direction: Direction) -> float:
        """
        <c, d>
        """
        target = self.linear_term[direction.atom_id]
        current = self._linear_value()
        return target - current if direction.is_fw else current - target

    def _step_weights(self, direction: Direction, alpha: float) -> np.ndarray:
        weights = np.array(self.weights)
        if direction.is_fw:
            weights *= 1.0 - alpha
            weights[direction.atom_id] += alpha
        else:
            weights *= 1.0 + alpha
            weights[direction.atom_id] -= alpha
            if weights[direction.atom_id] < 0:
                weights[direction.atom_id] = 0.0
        return weights

    def clone(self) -> 'ProblemInstance':
        return copy.deepcopy(self)

    @abstractmethod
    def _rebuild(self) -> None:
        pass

    @abstractmethod
    def objective(self) -> float:
        pass

    @abstractmethod
    def atom_gradients(self) -> np.ndarray:
        """
        <grad F(x), a> for every atom a at the current point
        """
        pass

    @abstractmethod
    def local_norm(self, direction: Direction) -> float:
        """
        D = |A d|_y at the current point
        """
        pass

    @abstractmethod
    def in_domain_along(self, direction: Direction, alpha: float) -> bool:
        pass

    def objective_along(self, direction: Direction, alpha: float) -> float:
        return self.objective() + self.decrement_along(direction, alpha)

    @abstractmethod
    def decrement_along(self, direction: Direction, alpha: float) -> float:
        """
        F(x + alpha d) - F(x)

        :raises DomainViolationError: when the step leaves the domain
        """
        pass

    @abstractmethod
    def slope_along(self, direction: Direction, alpha: float) -> float:
        """
        d/dalpha F(x + alpha d)
        """
        pass

    @abstractmethod
    def apply_step(self, direction: Direction, alpha: float, *, weights: Optional[np.ndarray] = None) -> None:
        """
        Moves the current point to x + alpha d. When the caller tracks the resulting
        atom weights it passes them, otherwise they are derived from the step.
        """
        pass

    @abstractmethod
    def value_at(self, weights: np.ndarray) -> float:
        """
        F at an arbitrary point given by atom weights, without touching the caches
        """
        pass

    @abstractmethod
    def gradient_at(self, weights: np.ndarray) -> np.ndarray:
        """
        Per-atom gradient pairings at an arbitrary point, without touching the caches
        """
        pass

    @abstractmethod
    def fingerprint(self) -> str:
        pass

    def closed_form_linesearch(self, direction: Direction) -> Optional[float]:
        """
        Exact step size along the direction when the instance knows a closed form
        """
        return None

    def verify(self, *, tolerance: float = 1e-8) -> None:
        """
        Rebuilds the caches from the current weights and compares them with the
        incrementally maintained ones.
        """
        objective = self.objective()
        gradients = self.atom_gradients()
        fresh_objective = self.value_at(self.weights)
        fresh_gradients = self.gradient_at(self.weights)
        scale = max(1.0, np.max(np.abs(fresh_gradients)))
        if abs(objective - fresh_objective) > tolerance * max(1.0, abs(fresh_objective)) \
                or np.max(np.abs(gradients - fresh_gradients)) > tolerance * scale:
            raise InvariantViolationError('Cached state of {} drifted from a fresh evaluation'.format(self.name))

    def __repr__(self) -> str:
        return '{}(name={}, atoms={}, theta={})'.format(type(self).__name__, self.name, self.atom_set.size,
                                                        self.theta)


class AtomImageInstance(ProblemInstance):
    """
    Instance given by the explicit image A a of every atom under an arbitrary barrier.
    """
    def __init__(self, *,
                 atom_set: AtomSet,
                 barrier: Barrier,
                 images: np.ndarray,
                 linear_term: Optional[np.ndarray] = None,
                 q: Optional[int] = None,
                 name: str = 'atom-image') -> None:
        super().__init__(atom_set=atom_set, barrier=barrier, linear_term=linear_term, q=q, name=name)
        images = as_float_array(images, ndim=1 + len(barrier.shape), name='images')
        if images.shape != (atom_set.size,) + barrier.shape:
            raise ConstructionError('Expected atom images of shape {}, got {}'.format(
                (atom_set.size,) + barrier.shape, images.shape))
        self.images = images
        self._y = None  # type: Optional[np.ndarray]
        self._gradient = None  # type: Optional[np.ndarray]
        self._value = 0.0

    def _image(self, weights: np.ndarray) -> np.ndarray:
        return np.tensordot(weights, self.images, axes=1)

    def _pairings(self, gradient: np.ndarray) -> np.ndarray:
        return np.tensordot(self.images, gradient, axes=gradient.ndim) + self.linear_term

    @overrides
    def _rebuild(self) -> None:
        y = self._image(self.weights)
        if not self.barrier.in_domain(y):
            raise DomainViolationError('A x of {} lies outside the barrier domain'.format(self.name))
        self._y = y
        self._value = self.barrier.value(y)
        self._gradient = self.barrier.gradient(y)

    def _image_step(self, direction: Direction) -> np.ndarray:
        image = self.images[direction.atom_id]
        return image - self._y if direction.is_fw else self._y - image

    @overrides
    def objective(self) -> float:
        return self._value + self._linear_value()

    @overrides
    def atom_gradients(self) -> np.ndarray:
        return self._pairings(self._gradient)

    @overrides
    def local_norm(self, direction: Direction) -> float:
        return self.barrier.local_norm(self._y, self._image_step(direction))

    @overrides
    def in_domain_along(self, direction: Direction, alpha: float) -> bool:
        return self.barrier.in_domain(self._y + alpha * self._image_step(direction))

    @overrides
    def decrement_along(self, direction: Direction, alpha: float) -> float:
        y = self._y + alpha * self._image_step(direction)
        return self.barrier.value(y) - self._value + alpha * self._linear_step(direction)

    @overrides
    def slope_along(self, direction: Direction, alpha: float) -> float:
        step = self._image_step(direction)
        gradient = self.barrier.gradient(self._y + alpha * step)
        return self.barrier.pair(gradient, step) + self._linear_step(direction)

    @overrides
    def apply_step(self, direction: Direction, alpha: float, *, weights: Optional[np.ndarray] = None) -> None:
        self._weights = np.array(weights if weights is not None else self._step_weights(direction, alpha))
        self._rebuild()

    @overrides
    def value_at(self, weights: np.ndarray) -> float:
        return self.barrier.value(self._image(weights)) + float(self.linear_term @ weights)

    @overrides
    def gradient_at(self, weights: np.ndarray) -> np.ndarray:
        return self._pairings(self.barrier.gradient(self._image(weights)))

    @overrides
    def fingerprint(self) -> str:
        return array_digest(type(self).__name__, self.atom_set.atoms, self.images, self.linear_term)
