# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import numpy as np

from barrier_fw.polytope.active_set import ActiveSet
from barrier_fw.polytope.atom_set import AtomSet

# Both oracles break ties by the lowest atom id: np.argmin / np.argmax return the
# first extremal index and supports are kept sorted.


def fw_vertex(pairings: np.ndarray) -> int:
    """
    Atom id minimizing the given per-atom pairings <grad, a>
    """
    return int(np.argmin(pairings))


def away_vertex(active: ActiveSet, pairings: np.ndarray) -> int:
    """
    Support atom id maximizing the given per-atom pairings <grad, a>
    """
    support = active.support
    return int(support[np.argmax(pairings[support])])


def lmo(atom_set: AtomSet, grad: np.ndarray) -> int:
    """
    Linear minimization oracle over the explicit atoms
    """
    return fw_vertex(atom_set.pairings(grad))


def away_select(active: ActiveSet, grad: np.ndarray) -> int:
    """
    Away oracle: the active atom with the largest pairing against grad
    """
    return away_vertex(active, active.atom_set.pairings(grad))
