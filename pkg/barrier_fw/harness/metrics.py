# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import logging
from typing import List, Sequence

import attr
import numpy as np
import pandas as pd
from scipy import stats

from barrier_fw.entity.metrics_row import MetricsRow, MetricsRowSchema
from barrier_fw.entity.trace_record import TraceRecord, TraceRecordSchema
from barrier_fw.exception import InsufficientDataError
from barrier_fw.solver.afw import SolverResult
from barrier_fw.util import sparsity

LOGGER = logging.getLogger(__name__)

# objective gaps inside this window count as the linear-convergence regime
TAIL_LOW = 1e-8
TAIL_HIGH = 1e-2
MIN_TAIL_POINTS = 10

METRIC_COLUMNS = ['method', 'k', 'time_s', 'objective_gap', 'fw_gap', 'sparsity']
LONG_COLUMNS = ['method', 'metric', 'k', 'time_s', 'value']
TRACE_COLUMNS = {
    'k': 'k',
    'objective': 'F',
    'fw_gap': 'G',
    'away_gap': 'Gtilde',
    'r': 'r',
    'local_norm': 'D',
    'alpha': 'alpha',
    'alpha_max': 'alphabar',
    'step_kind': 'step_kind',
    'support_size': 'support_size',
    'time_s': 'time_s',
}


@attr.s(auto_attribs=True, kw_only=True, frozen=True)
class LinearFit:
    slope: float = attr.ib()
    intercept: float = attr.ib()
    r_squared: float = attr.ib()
    points: int = attr.ib()


def metrics_rows(result: SolverResult, fstar: float) -> List[MetricsRow]:
    """
    One row per iterate of the run, the final iterate included. The objective gap is
    measured against the reference value fstar.
    """
    rows = [MetricsRow(method=result.method,
                       k=record.k,
                       time_s=record.time_s,
                       objective_gap=record.objective - fstar,
                       fw_gap=record.fw_gap,
                       sparsity=record.sparsity)
            for record in result.trace]
    rows.append(MetricsRow(method=result.method,
                           k=result.iterations,
                           time_s=result.elapsed_s,
                           objective_gap=result.final_objective - fstar,
                           fw_gap=result.final_gap,
                           sparsity=sparsity(result.solution.x)))
    return rows


def metrics_frame(rows: Sequence[MetricsRow]) -> pd.DataFrame:
    return pd.DataFrame(MetricsRowSchema().dump(list(rows), many=True), columns=METRIC_COLUMNS)


def trace_frame(trace: Sequence[TraceRecord]) -> pd.DataFrame:
    frame = pd.DataFrame(TraceRecordSchema().dump(list(trace), many=True), columns=list(TRACE_COLUMNS))
    return frame.rename(columns=TRACE_COLUMNS)


def long_frame(frames: Sequence[pd.DataFrame]) -> pd.DataFrame:
    """
    Stacks per-method metric frames into (method, metric, k, time_s, value) rows
    """
    if not frames:
        return pd.DataFrame(columns=LONG_COLUMNS)
    combined = pd.concat(frames, ignore_index=True)
    long = combined.melt(id_vars=['method', 'k', 'time_s'],
                         value_vars=['objective_gap', 'fw_gap', 'sparsity'],
                         var_name='metric', value_name='value')
    return long[LONG_COLUMNS]


def linear_fit(ks: Sequence[float], values: Sequence[float]) -> LinearFit:
    """
    Least-squares line through (k, value).

    :raises InsufficientDataError: with fewer than two distinct k
    """
    ks = np.asarray(ks, dtype=float)
    values = np.asarray(values, dtype=float)
    if ks.size < 2 or np.unique(ks).size < 2:
        raise InsufficientDataError('Need at least two distinct points for a linear fit, got {}'.format(ks.size))
    fit = stats.linregress(ks, values)
    return LinearFit(slope=float(fit.slope), intercept=float(fit.intercept), r_squared=float(fit.rvalue ** 2),
                     points=int(ks.size))


def linear_tail(objective_gaps: Sequence[float], *, low: float = TAIL_LOW, high: float = TAIL_HIGH) -> np.ndarray:
    """
    Iteration indices whose objective gap lies in [low, high]
    """
    gaps = np.asarray(objective_gaps, dtype=float)
    return np.flatnonzero((gaps >= low) & (gaps <= high))


def slope_ratio_report(objective_gaps: Sequence[float], fw_gaps: Sequence[float]) -> float:
    """
    Ratio of the least-squares slopes of ln G_k and ln delta_k against k over the
    linear-convergence tail. Theory predicts about 1/2 for the away-step method.

    :raises InsufficientDataError: when the tail has fewer than ten usable iterations
    """
    objective_gaps = np.asarray(objective_gaps, dtype=float)
    fw_gaps = np.asarray(fw_gaps, dtype=float)
    if objective_gaps.shape != fw_gaps.shape:
        raise InsufficientDataError('Objective and FW gap traces differ in length')
    tail = linear_tail(objective_gaps)
    tail = tail[fw_gaps[tail] > 0]
    if tail.size < MIN_TAIL_POINTS:
        raise InsufficientDataError('Only {} iterations in the linear tail, need {}'.format(
            tail.size, MIN_TAIL_POINTS))
    objective_fit = linear_fit(tail, np.log(objective_gaps[tail]))
    gap_fit = linear_fit(tail, np.log(fw_gaps[tail]))
    if not objective_fit.slope < 0:
        raise InsufficientDataError('Objective gap does not decrease over the tail (slope {})'.format(
            objective_fit.slope))
    ratio = gap_fit.slope / objective_fit.slope
    LOGGER.info('Slope ratio {:.4f} over {} tail iterations (R^2 {:.4f})'.format(
        ratio, tail.size, objective_fit.r_squared))
    return ratio
