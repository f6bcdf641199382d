# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

from typing import Optional

import attr
from marshmallow3_annotations.ext.attrs import AttrsSchema


@attr.s(auto_attribs=True, kw_only=True)
class TraceRecord:
    """
    One solver iteration. Objective, gap and support size describe the iterate the
    step starts from; objective_next is the objective after the step.
    """
    k: int = attr.ib()
    objective: float = attr.ib()
    fw_gap: float = attr.ib()
    step_kind: str = attr.ib()
    support_size: int = attr.ib()
    sparsity: int = attr.ib()
    time_s: float = attr.ib()
    objective_next: Optional[float] = attr.ib(default=None)
    away_gap: Optional[float] = attr.ib(default=None)
    r: Optional[float] = attr.ib(default=None)
    local_norm: Optional[float] = attr.ib(default=None)
    alpha: Optional[float] = attr.ib(default=None)
    alpha_max: Optional[float] = attr.ib(default=None)


class TraceRecordSchema(AttrsSchema):
    class Meta:
        target = TraceRecord
        register_as_scheme = True
