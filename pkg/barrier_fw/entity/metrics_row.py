# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import attr
from marshmallow3_annotations.ext.attrs import AttrsSchema


@attr.s(auto_attribs=True, kw_only=True)
class MetricsRow:
    method: str = attr.ib()
    k: int = attr.ib()
    time_s: float = attr.ib()
    objective_gap: float = attr.ib()
    fw_gap: float = attr.ib()
    sparsity: int = attr.ib()


class MetricsRowSchema(AttrsSchema):
    class Meta:
        target = MetricsRow
        register_as_scheme = True
