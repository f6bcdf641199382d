# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

from enum import Enum
from typing import FrozenSet

from barrier_fw.exception import ConfigError


class Method(Enum):
    AFW_E = 'AFW-E'
    AFW_A = 'AFW-A'
    FW_E = 'FW-E'
    FW_A = 'FW-A'
    RSGM_F = 'RSGM-F'
    RSGM_B = 'RSGM-B'
    MG = 'MG'


FRANK_WOLFE_METHODS = frozenset({Method.AFW_E, Method.AFW_A, Method.FW_E, Method.FW_A})  # type: FrozenSet[Method]
AWAY_STEP_METHODS = frozenset({Method.AFW_E, Method.AFW_A})  # type: FrozenSet[Method]
EXACT_STEP_METHODS = frozenset({Method.AFW_E, Method.FW_E})  # type: FrozenSet[Method]


def to_method(*, label: str) -> Method:
    try:
        return Method(label.strip().upper())
    except ValueError:
        raise ConfigError('Unknown method {}; expected one of {}'.format(
            label, ', '.join(method.value for method in Method)))
