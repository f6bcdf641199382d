# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import logging
from typing import Optional

import numpy as np
import pandas as pd

from barrier_fw.application.mhp import MhpArrivals, MhpDimensionInstance
from barrier_fw.exception import ConstructionError

LOGGER = logging.getLogger(__name__)

ARRIVAL_COLUMNS = ['time', 'dim']


def read_points_csv(path: str) -> np.ndarray:
    """
    One point per row, no header
    """
    frame = pd.read_csv(path, header=None, dtype=float)
    LOGGER.info('Loaded {} points of dimension {} from {}'.format(frame.shape[0], frame.shape[1], path))
    return frame.to_numpy()


def write_points_csv(points: np.ndarray, path: str) -> None:
    pd.DataFrame(np.asarray(points, dtype=float)).to_csv(path, header=False, index=False, float_format='%.17g')
    LOGGER.info('Wrote {} points to {}'.format(len(points), path))


def read_arrivals_csv(path: str, *, horizon: Optional[float] = None, m: Optional[int] = None) -> MhpArrivals:
    """
    Arrival points from a CSV with header time,dim where dims are 1-based.

    :param horizon: end of the observation window, defaults to the next integer after the last event
    :param m: number of dimensions, defaults to the largest label
    """
    frame = pd.read_csv(path)
    missing = [column for column in ARRIVAL_COLUMNS if column not in frame.columns]
    if missing:
        raise ConstructionError('Arrival file {} lacks columns {}'.format(path, missing))
    frame = frame.sort_values('time', kind='mergesort')
    times = frame['time'].to_numpy(dtype=float)
    dims = frame['dim'].to_numpy(dtype=int) - 1
    if horizon is None:
        horizon = float(np.floor(times.max()) + 1.0) if times.size else 1.0
    if m is None:
        m = int(dims.max()) + 1 if dims.size else 1
    LOGGER.info('Loaded {} arrivals on {} dimensions from {}'.format(times.size, m, path))
    return MhpArrivals(horizon=horizon, times=times, dims=dims, m=m)


def write_arrivals_csv(arrivals: MhpArrivals, path: str) -> None:
    frame = pd.DataFrame({'time': arrivals.times, 'dim': arrivals.dims + 1})
    frame.to_csv(path, index=False, float_format='%.17g')
    LOGGER.info('Wrote {} arrivals to {}'.format(arrivals.size, path))


def write_instance_rows_csv(dimension_instance: MhpDimensionInstance, path: str) -> None:
    """
    Exports the rows (1/t, w_i) of the rescaled simplex problem, one per event
    """
    rows = dimension_instance.instance.rows
    columns = ['mu'] + ['a{}'.format(j + 1) for j in range(rows.shape[1] - 1)]
    pd.DataFrame(rows, columns=columns).to_csv(path, index=False, float_format='%.17g')
    LOGGER.info('Wrote {} instance rows for dimension {} to {}'.format(
        rows.shape[0], dimension_instance.dimension + 1, path))


def read_rows_csv(path: str) -> np.ndarray:
    """
    Data matrix of a simplex log-barrier instance, written with a header row
    """
    return pd.read_csv(path).to_numpy(dtype=float)
