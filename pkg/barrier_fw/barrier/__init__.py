# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

from barrier_fw.barrier.base_barrier import Barrier
from barrier_fw.barrier.logdet_barrier import LogdetBarrier
from barrier_fw.barrier.neglog_barrier import NeglogBarrier


def make_logdet_barrier(n: int) -> Barrier:
    """
    -ln det on symmetric positive-definite n x n matrices, theta = n
    """
    return LogdetBarrier(n)


def make_neglog_barrier(m: int) -> Barrier:
    """
    -sum ln y_i on the positive orthant of R^m, theta = m
    """
    return NeglogBarrier(m)
