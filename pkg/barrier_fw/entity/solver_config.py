# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

from enum import Enum
from typing import Any, Optional

import attr

from barrier_fw import config, get_config
from barrier_fw.entity.method import (AWAY_STEP_METHODS, EXACT_STEP_METHODS,
                                     FRANK_WOLFE_METHODS, Method)
from barrier_fw.exception import ConfigError, PreconditionError


class StepRule(Enum):
    EXACT = 'exact'
    ADAPTIVE = 'adaptive'


class CheckLevel(Enum):
    OFF = 'off'
    CHEAP = 'cheap'
    FULL = 'full'


def to_check_level(*, label: str) -> CheckLevel:
    try:
        return CheckLevel(label.strip().lower())
    except ValueError:
        raise ConfigError('Unknown invariant check level {}'.format(label))


def _positive(instance: Any, attribute: Any, value: Optional[float]) -> None:
    if value is not None and not value > 0:
        raise PreconditionError('{} must be positive, got {}'.format(attribute.name, value))


def _at_least_one(instance: Any, attribute: Any, value: int) -> None:
    if value < 1:
        raise PreconditionError('{} must be at least 1, got {}'.format(attribute.name, value))


def _default_epsilon() -> float:
    return float(getattr(get_config(), config.DEFAULT_EPSILON))


def _default_check_level() -> CheckLevel:
    return to_check_level(label=getattr(get_config(), config.DEFAULT_CHECK_LEVEL))


def _default_drop_threshold() -> float:
    return float(getattr(get_config(), config.DROP_THRESHOLD))


@attr.s(auto_attribs=True, kw_only=True, frozen=True)
class SolverConfig:
    """
    Settings of one Frank-Wolfe run. Tolerance, invariant check level and drop
    threshold default to the current barrier_fw config.
    """
    step_rule: StepRule = attr.ib(default=StepRule.EXACT)
    epsilon: float = attr.ib(factory=_default_epsilon, validator=_positive)
    max_iterations: int = attr.ib(default=10000, validator=_at_least_one)
    check_level: CheckLevel = attr.ib(factory=_default_check_level)
    caratheodory: bool = attr.ib(default=False)
    # seeds the randomized oracle tie audit of full checks
    seed: int = attr.ib(default=0)
    # plain Frank-Wolfe when disabled
    away_steps: bool = attr.ib(default=True)
    time_budget_s: Optional[float] = attr.ib(default=None, validator=_positive)
    drop_threshold: float = attr.ib(factory=_default_drop_threshold, validator=_positive)
    known_fstar: Optional[float] = attr.ib(default=None)
    fstar_slack: float = attr.ib(default=0.0)

    @classmethod
    def for_method(cls, method: Method, **kwargs: Any) -> 'SolverConfig':
        if method not in FRANK_WOLFE_METHODS:
            raise ConfigError('{} is not a Frank-Wolfe method'.format(method.value))
        step_rule = StepRule.EXACT if method in EXACT_STEP_METHODS else StepRule.ADAPTIVE
        return cls(step_rule=step_rule, away_steps=method in AWAY_STEP_METHODS, **kwargs)


@attr.s(auto_attribs=True, kw_only=True, frozen=True)
class BaselineConfig:
    method: Method = attr.ib()
    # relative-smoothness constant; the instance default is used when absent
    smoothness: Optional[float] = attr.ib(default=None, validator=_positive)
    epsilon: float = attr.ib(default=1e-9, validator=_positive)
    max_iterations: int = attr.ib(default=10000, validator=_at_least_one)
    time_budget_s: Optional[float] = attr.ib(default=None, validator=_positive)

    def to_solver_config(self, **kwargs: Any) -> SolverConfig:
        return SolverConfig.for_method(self.method,
                                       epsilon=self.epsilon,
                                       max_iterations=self.max_iterations,
                                       time_budget_s=self.time_budget_s,
                                       **kwargs)
