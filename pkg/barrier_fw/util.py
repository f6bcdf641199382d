# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import hashlib
from typing import Any

import numpy as np

# Smallest entry counted as non-zero, relative to max(1, |x|_inf)
MACHINE_ACCURACY = 2.22e-16


def as_float_array(value: Any, *, ndim: int, name: str) -> np.ndarray:
    array = np.array(value, dtype=float)
    if array.ndim != ndim:
        raise ValueError('{} must have {} dimension(s), got shape {}'.format(name, ndim, array.shape))
    if not np.all(np.isfinite(array)):
        raise ValueError('{} contains non-finite entries'.format(name))
    return array


def array_digest(*arrays: Any) -> str:
    """
    Stable SHA-256 fingerprint of a sequence of arrays and scalars. Used as cache key
    for certified reference values and as determinism hash of metric files.
    """
    digest = hashlib.sha256()
    for value in arrays:
        if isinstance(value, (bytes, str)):
            digest.update(value.encode('utf-8') if isinstance(value, str) else value)
            continue
        array = np.ascontiguousarray(np.asarray(value, dtype=float))
        digest.update(str(array.shape).encode('utf-8'))
        digest.update(array.tobytes())
    return digest.hexdigest()


def sparsity(x: np.ndarray) -> int:
    """
    Number of entries greater than the machine accuracy relative to max(1, |x|_inf)
    """
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return 0
    threshold = MACHINE_ACCURACY * max(1.0, float(np.max(np.abs(x))))
    return int(np.count_nonzero(x > threshold))
