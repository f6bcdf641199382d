# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0


class BarrierFWError(Exception):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class DomainViolationError(BarrierFWError, ValueError):
    """
    An argument lies outside the domain of a function, or a point outside the barrier domain.
    """
    pass


class PreconditionError(BarrierFWError, ValueError):
    pass


class InfeasibleStartError(BarrierFWError):
    pass


class ConstructionError(BarrierFWError):
    pass


class InvariantViolationError(BarrierFWError):
    pass


class NumericalFaultError(InvariantViolationError):
    pass


class SubproblemError(BarrierFWError):
    pass


class SimulationError(BarrierFWError):
    pass


class InsufficientDataError(BarrierFWError):
    pass


class ConfigError(BarrierFWError):
    pass
