# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

from enum import Enum


class StepKind(Enum):
    FW = 'FW'
    AWAY = 'AWAY'
    DROP = 'DROP'


class StopReason(Enum):
    CONVERGED = 'converged'
    ITERATION_BUDGET = 'iteration budget'
    TIME_BUDGET = 'time budget'
    INVARIANT_FAULT = 'invariant fault'
