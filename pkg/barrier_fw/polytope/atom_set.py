# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import logging
from typing import Optional

import numpy as np
import pandas as pd

from barrier_fw.exception import ConstructionError
from barrier_fw.util import as_float_array

LOGGER = logging.getLogger(__name__)


class AtomSet:
    """
    Explicit atoms of the polytope X = conv(atoms). Atom ids are row indices.
    Immutable and shareable between runs.

    The unit simplex is kept implicit: its atoms are only materialized on request,
    so simplex instances with many atoms never allocate a p x p identity.
    """
    def __init__(self, atoms: Optional[np.ndarray] = None, *, simplex_size: Optional[int] = None) -> None:
        if simplex_size is not None:
            if simplex_size < 1:
                raise ConstructionError('Simplex needs at least one vertex, got {}'.format(simplex_size))
            self._atoms = None  # type: Optional[np.ndarray]
            self._size = simplex_size
            self._dimension = simplex_size
            self._is_simplex = True
            return

        try:
            atoms = as_float_array(atoms, ndim=2, name='atoms')
        except ValueError as e:
            raise ConstructionError(str(e))
        if atoms.shape[0] == 0 or atoms.shape[1] == 0:
            raise ConstructionError('Atom set must be non-empty, got shape {}'.format(atoms.shape))
        if np.unique(atoms, axis=0).shape[0] != atoms.shape[0]:
            raise ConstructionError('Atoms must be pairwise distinct')
        atoms.setflags(write=False)
        self._atoms = atoms
        self._size, self._dimension = atoms.shape
        self._is_simplex = self._size == self._dimension and np.array_equal(atoms, np.eye(self._size))

    @classmethod
    def simplex(cls, p: int) -> 'AtomSet':
        """
        Unit vectors e_1..e_p, the vertices of the unit simplex
        """
        return cls(simplex_size=p)

    @classmethod
    def from_csv(cls, path: str) -> 'AtomSet':
        """
        One atom per row, columns are coordinates, no header
        """
        frame = pd.read_csv(path, header=None, dtype=float)
        LOGGER.info('Loaded {} atoms of dimension {} from {}'.format(frame.shape[0], frame.shape[1], path))
        return cls(frame.to_numpy())

    @property
    def atoms(self) -> np.ndarray:
        if self._atoms is None:
            return self.rows(np.arange(self._size))
        return self._atoms

    @property
    def size(self) -> int:
        return self._size

    @property
    def dimension(self) -> int:
        return self._dimension

    @property
    def is_simplex(self) -> bool:
        return self._is_simplex

    def atom(self, atom_id: int) -> np.ndarray:
        if self._atoms is None:
            vertex = np.zeros(self._dimension)
            vertex[atom_id] = 1.0
            return vertex
        return self._atoms[atom_id]

    def rows(self, atom_ids: np.ndarray) -> np.ndarray:
        """
        The atoms with the given ids stacked as rows
        """
        atom_ids = np.asarray(atom_ids, dtype=int)
        if self._atoms is None:
            rows = np.zeros((atom_ids.size, self._dimension))
            rows[np.arange(atom_ids.size), atom_ids] = 1.0
            return rows
        return self._atoms[atom_ids]

    def pairings(self, grad: np.ndarray) -> np.ndarray:
        """
        <grad, a> for every atom a
        """
        if self._is_simplex:
            return np.asarray(grad, dtype=float).copy()
        return self._atoms @ grad

    def combine(self, weights: np.ndarray) -> np.ndarray:
        """
        sum_a weights[a] * a, computed over the non-zero weights only
        """
        if self._is_simplex:
            return np.asarray(weights, dtype=float).copy()
        support = np.flatnonzero(weights)
        return weights[support] @ self._atoms[support]

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return 'AtomSet(size={}, dimension={}, simplex={})'.format(self.size, self.dimension, self._is_simplex)
