# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

from typing import Any, Dict, List, Optional

import attr
from marshmallow import (Schema, ValidationError, fields, post_load, validate,
                         validates_schema)

from barrier_fw import config, get_config
from barrier_fw.entity.method import Method


@attr.s(auto_attribs=True, kw_only=True)
class DoptSpec:
    m: int = attr.ib()
    n: int = attr.ib()
    scale: float = attr.ib(default=10.0)
    seed: int = attr.ib(default=0)
    # 'uniform' or 'basis'
    start: str = attr.ib(default='uniform')


@attr.s(auto_attribs=True, kw_only=True)
class MhpSpec:
    m: int = attr.ib()
    t: float = attr.ib()
    mu: float = attr.ib(default=0.1)
    sparsity: float = attr.ib(default=0.9)
    radius: float = attr.ib(default=0.9)
    seed: int = attr.ib(default=0)
    dimension: int = attr.ib(default=1)
    regularization: float = attr.ib(default=0.0)
    # 'uniform' or 'vertex'
    start: str = attr.ib(default='uniform')


@attr.s(auto_attribs=True, kw_only=True)
class FileSpec:
    # 'dopt' (points), 'mhp' (arrivals) or 'simplexlog' (rows)
    kind: str = attr.ib()
    path: str = attr.ib()
    horizon: Optional[float] = attr.ib(default=None)
    dimension: int = attr.ib(default=1)
    regularization: float = attr.ib(default=0.0)
    start: str = attr.ib(default='uniform')


@attr.s(auto_attribs=True, kw_only=True)
class ExperimentConfig:
    solvers: List[Method] = attr.ib()
    dopt: Optional[DoptSpec] = attr.ib(default=None)
    mhp: Optional[MhpSpec] = attr.ib(default=None)
    file: Optional[FileSpec] = attr.ib(default=None)
    epsilon: float = attr.ib(factory=lambda: float(getattr(get_config(), config.DEFAULT_EPSILON)))
    max_iterations: int = attr.ib(default=5000)
    time_budget_s: Optional[float] = attr.ib(default=None)
    reference_max_iterations: Optional[int] = attr.ib(default=None)
    check_level: str = attr.ib(factory=lambda: str(getattr(get_config(), config.DEFAULT_CHECK_LEVEL)))
    caratheodory: bool = attr.ib(default=False)
    smoothness: Optional[float] = attr.ib(default=None)
    output_dir: Optional[str] = attr.ib(default=None)
    name: str = attr.ib(default='experiment')


def _positive(value: float) -> None:
    if not value > 0:
        raise ValidationError('Must be positive.')


def _probability(value: float) -> None:
    if not 0.0 <= value < 1.0:
        raise ValidationError('Must lie in [0, 1).')


class DoptSpecSchema(Schema):
    m = fields.Integer(required=True, validate=validate.Range(min=2))
    n = fields.Integer(required=True, validate=validate.Range(min=1))
    scale = fields.Float(missing=10.0, validate=_positive)
    seed = fields.Integer(missing=0)
    start = fields.String(missing='uniform', validate=validate.OneOf(['uniform', 'basis']))

    @validates_schema
    def validate_size(self, data: Dict[str, Any], **kwargs: Any) -> None:
        if data['m'] < data['n'] + 1:
            raise ValidationError('D-optimal design needs m >= n + 1 points.', 'm')

    @post_load
    def make_spec(self, data: Dict[str, Any], **kwargs: Any) -> DoptSpec:
        return DoptSpec(**data)


class MhpSpecSchema(Schema):
    m = fields.Integer(required=True, validate=validate.Range(min=1))
    t = fields.Float(required=True, validate=_positive)
    mu = fields.Float(missing=0.1, validate=_positive)
    sparsity = fields.Float(missing=0.9, validate=_probability)
    radius = fields.Float(missing=0.9, validate=_probability)
    seed = fields.Integer(missing=0)
    dimension = fields.Integer(missing=1, validate=validate.Range(min=1))
    regularization = fields.Float(missing=0.0, validate=validate.Range(min=0.0))
    start = fields.String(missing='uniform', validate=validate.OneOf(['uniform', 'vertex']))

    @validates_schema
    def validate_dimension(self, data: Dict[str, Any], **kwargs: Any) -> None:
        if data['dimension'] > data['m']:
            raise ValidationError('Dimension index exceeds the number of dimensions.', 'dimension')

    @post_load
    def make_spec(self, data: Dict[str, Any], **kwargs: Any) -> MhpSpec:
        return MhpSpec(**data)


class FileSpecSchema(Schema):
    kind = fields.String(required=True, validate=validate.OneOf(['dopt', 'mhp', 'simplexlog']))
    path = fields.String(required=True)
    horizon = fields.Float(missing=None, allow_none=True, validate=_positive)
    dimension = fields.Integer(missing=1, validate=validate.Range(min=1))
    regularization = fields.Float(missing=0.0, validate=validate.Range(min=0.0))
    start = fields.String(missing='uniform', validate=validate.OneOf(['uniform', 'basis', 'vertex']))

    @post_load
    def make_spec(self, data: Dict[str, Any], **kwargs: Any) -> FileSpec:
        return FileSpec(**data)


class ExperimentConfigSchema(Schema):
    name = fields.String(missing='experiment')
    dopt = fields.Nested(DoptSpecSchema, missing=None, allow_none=True)
    mhp = fields.Nested(MhpSpecSchema, missing=None, allow_none=True)
    file = fields.Nested(FileSpecSchema, missing=None, allow_none=True)
    solvers = fields.List(fields.String(validate=validate.OneOf([method.value for method in Method])),
                          required=True,
                          validate=validate.Length(min=1, error='At least one solver is required.'))
    # epsilon and check_level default to the current barrier_fw config
    epsilon = fields.Float(validate=_positive)
    max_iterations = fields.Integer(missing=5000, validate=validate.Range(min=1))
    time_budget_s = fields.Float(missing=None, allow_none=True, validate=_positive)
    reference_max_iterations = fields.Integer(missing=None, allow_none=True, validate=validate.Range(min=1))
    check_level = fields.String(validate=validate.OneOf(['off', 'cheap', 'full']))
    caratheodory = fields.Boolean(missing=False)
    smoothness = fields.Float(missing=None, allow_none=True, validate=_positive)
    output_dir = fields.String(missing=None, allow_none=True)

    @validates_schema
    def validate_instance(self, data: Dict[str, Any], **kwargs: Any) -> None:
        given = [key for key in ('dopt', 'mhp', 'file') if data.get(key) is not None]
        if len(given) != 1:
            raise ValidationError('Exactly one instance spec (dopt, mhp or file) is required, got {}.'
                                  .format(given or 'none'), 'instance')

    @post_load
    def make_config(self, data: Dict[str, Any], **kwargs: Any) -> ExperimentConfig:
        solvers = []  # type: List[Method]
        for label in data.pop('solvers'):
            method = Method(label)
            if method not in solvers:
                solvers.append(method)
        return ExperimentConfig(solvers=solvers, **data)
