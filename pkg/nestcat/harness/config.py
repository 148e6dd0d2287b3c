"""
Code descriptions and experiment configs.

Both are INI text (flat keys under section headers) validated by pydantic.
Generator rows are comma-separated hex coefficients in ascending index order,
one row per line. Factor indices refer to ``factor_xn_minus_1`` output order.

    [field]            m, primitive_poly (hex, optional)
    [outer]            n and g/f/h index lists, or rs_k for a plain RS outer code
    [subcodes]         c1, c2 and optionally c as explicit rows
    [inner]            kind = identity | repetition | cyclic | rows | pair
                       n, poly, rows, rows1/rows2
    [concat]           l, nu
    [experiment]       problem, p, w or d, trials, seed, strategy, output
"""

import configparser
import logging
from pathlib import Path
from typing import Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..core.concat import ConcatenatedNestedCode, InnerPair, concatenate
from ..core.core_types import Problem, Strategy
from ..core.errors import ConfigError, NestcatError
from ..core.finite_field import GF2, FieldParams, parse_poly
from ..core.linear_code import LinearCode, identity_code, repetition_code
from ..core.nested_cyclic import FactorSplit, NestedCyclicCode, build_nested
from ..core.rs_codes import rs_build

logger = logging.getLogger(__name__)

Rows = list[list[int]]


def _split_ints(value):
    if isinstance(value, str):
        return [int(tok) for tok in value.replace(" ", "").split(",") if tok]
    return value


def _split_rows(value):
    if isinstance(value, str):
        rows = []
        for line in value.strip().splitlines():
            line = line.strip().replace(" ", "")
            if line:
                rows.append([int(tok, 16) for tok in line.split(",") if tok])
        return rows
    return value


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class FieldSection(_Section):
    m: int = Field(1, ge=1, le=16)
    primitive_poly: Optional[int] = None

    @field_validator("primitive_poly", mode="before")
    @classmethod
    def parse_hex(cls, value):
        return int(value, 16) if isinstance(value, str) else value


class OuterSection(_Section):
    n: int = Field(ge=1)
    g: Optional[list[int]] = None
    f: Optional[list[int]] = None
    h: Optional[list[int]] = None
    rs_k: Optional[int] = Field(None, ge=1)

    @field_validator("g", "f", "h", mode="before")
    @classmethod
    def parse_indices(cls, value):
        return _split_ints(value)

    @model_validator(mode="after")
    def _one_recipe(self):
        nested = [x is not None for x in (self.g, self.f, self.h)]
        if any(nested) and not all(nested):
            raise ValueError("nested recipe needs all of g, f and h")
        if all(nested) == (self.rs_k is not None):
            raise ValueError("give either g/f/h or rs_k")
        return self

    @property
    def nested(self) -> bool:
        return self.rs_k is None


class SubcodesSection(_Section):
    c: Optional[Rows] = None
    c1: Rows
    c2: Rows

    @field_validator("c", "c1", "c2", mode="before")
    @classmethod
    def parse_rows(cls, value):
        return _split_rows(value)


class InnerSection(_Section):
    kind: Literal["identity", "repetition", "cyclic", "rows", "pair"]
    n: Optional[int] = Field(None, ge=1)
    poly: Optional[str] = None
    rows: Optional[Rows] = None
    rows1: Optional[Rows] = None
    rows2: Optional[Rows] = None

    @field_validator("rows", "rows1", "rows2", mode="before")
    @classmethod
    def parse_rows(cls, value):
        return _split_rows(value)

    @model_validator(mode="after")
    def _complete(self):
        needs = {
            "identity": ("n",),
            "repetition": ("n",),
            "cyclic": ("n", "poly"),
            "rows": ("rows",),
            "pair": ("rows1", "rows2"),
        }[self.kind]
        missing = [key for key in needs if getattr(self, key) is None]
        if missing:
            raise ValueError(f"inner kind {self.kind!r} needs {', '.join(missing)}")
        return self


class ConcatSection(_Section):
    l: int = Field(ge=1)
    nu: int = Field(1, ge=1)


class ExperimentSection(_Section):
    problem: Problem
    p: float = Field(ge=0.0, lt=0.5)
    w: Optional[float] = Field(None, gt=0.0, le=0.5)
    d: Optional[float] = Field(None, gt=0.0, le=0.5)
    trials: int = Field(1, ge=1)
    seed: int = Field(0, ge=0, lt=2**64)
    strategy: Strategy = Strategy.JOINT
    output: Optional[str] = None

    @model_validator(mode="after")
    def _constraint(self):
        if self.problem is Problem.CCSI and self.w is None:
            raise ValueError("ccsi experiments need w")
        if self.problem is Problem.SCSI and self.d is None:
            raise ValueError("scsi experiments need d")
        return self


class CodeDescription(_Section):
    field: FieldSection = Field(default_factory=FieldSection)
    outer: Optional[OuterSection] = None
    subcodes: Optional[SubcodesSection] = None
    inner: Optional[InnerSection] = None
    concat: Optional[ConcatSection] = None

    @model_validator(mode="after")
    def _something_to_build(self):
        if self.outer is None and self.subcodes is None:
            raise ValueError("description needs an [outer] or [subcodes] section")
        if (self.inner is None) != (self.concat is None):
            raise ValueError("[inner] and [concat] go together")
        if self.concat is not None and self.outer is None:
            raise ValueError("[concat] needs an [outer] section")
        return self


class ExperimentConfig(_Section):
    code: CodeDescription
    experiment: ExperimentSection

    @model_validator(mode="after")
    def _runnable(self):
        if self.code.outer is None or not self.code.outer.nested or self.code.concat is None:
            raise ValueError("experiments need a nested [outer] recipe with [inner] and [concat]")
        if self.code.inner.kind == "pair":
            raise ValueError("experiments take a single inner code")
        return self


_CODE_SECTIONS = ("field", "outer", "subcodes", "inner", "concat")


def _read_ini(source: Union[str, Path]) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        if isinstance(source, Path):
            with source.open() as fh:
                parser.read_file(fh)
        else:
            parser.read_string(source)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read code description: {exc}") from exc
    return parser


def _sections(parser: configparser.ConfigParser, allowed: tuple[str, ...]) -> dict:
    unknown = [s for s in parser.sections() if s not in allowed]
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(unknown)}")
    return {name: dict(parser[name]) for name in parser.sections()}


def load_code_description(source: Union[str, Path]) -> CodeDescription:
    parser = _read_ini(source)
    data = _sections(parser, _CODE_SECTIONS + ("experiment",))
    data.pop("experiment", None)
    try:
        return CodeDescription.model_validate(data)
    except (ValidationError, ValueError) as exc:
        raise ConfigError(f"invalid code description: {exc}") from exc


def load_experiment(source: Union[str, Path]) -> ExperimentConfig:
    parser = _read_ini(source)
    data = _sections(parser, _CODE_SECTIONS + ("experiment",))
    experiment = data.pop("experiment", None)
    if experiment is None:
        raise ConfigError("experiment config needs an [experiment] section")
    try:
        return ExperimentConfig.model_validate({"code": data, "experiment": experiment})
    except (ValidationError, ValueError) as exc:
        raise ConfigError(f"invalid experiment config: {exc}") from exc


def build_field(desc: CodeDescription) -> FieldParams:
    return FieldParams(desc.field.m, desc.field.primitive_poly or 0)


def build_outer(desc: CodeDescription) -> Union[NestedCyclicCode, LinearCode]:
    params = build_field(desc)
    outer = desc.outer
    if outer.nested:
        return build_nested(outer.n, params, FactorSplit.of(outer.g, outer.f, outer.h))
    return rs_build(outer.n, outer.rs_k, params).linear


def _rows_code(params: FieldParams, rows: Rows, name: str) -> LinearCode:
    try:
        matrix = np.array(rows, dtype=np.int64)
    except ValueError as exc:
        raise ConfigError(f"{name}: rows have different lengths") from exc
    if matrix.ndim != 2 or np.any(matrix >= params.q):
        raise ConfigError(f"{name}: rows must be equal-length vectors over {params}")
    return LinearCode(params, matrix, name=name)


def build_inner(desc: CodeDescription, check: bool = True) -> Union[LinearCode, InnerPair]:
    inner = desc.inner
    if inner.kind == "identity":
        return identity_code(inner.n)
    if inner.kind == "repetition":
        return repetition_code(inner.n)
    if inner.kind == "cyclic":
        return LinearCode.cyclic(GF2, inner.n, parse_poly(inner.poly, GF2), name=f"cyclic({inner.n})")
    if inner.kind == "rows":
        return _rows_code(GF2, inner.rows, "inner")
    return InnerPair(_rows_code(GF2, inner.rows1, "inner1"), _rows_code(GF2, inner.rows2, "inner2"), check=check)


def build_subcodes(desc: CodeDescription) -> tuple[Optional[LinearCode], LinearCode, LinearCode]:
    params = build_field(desc)
    sub = desc.subcodes
    c = _rows_code(params, sub.c, "C") if sub.c is not None else None
    return c, _rows_code(params, sub.c1, "C1"), _rows_code(params, sub.c2, "C2")


def build_concat(desc: CodeDescription, check_inner: bool = True) -> Optional[ConcatenatedNestedCode]:
    if desc.concat is None:
        return None
    return concatenate(build_outer(desc), build_inner(desc, check=check_inner), desc.concat.l, check_inner=check_inner)


def describe_error(exc: NestcatError) -> str:
    return f"{type(exc).__name__}: {exc}"


# Named desk-scale instances used by the docs and the test suite.
DESK_RECIPES: dict[str, str] = {
    "hamming7-rep3": """
[field]
m = 1

[outer]
n = 7
g = 1
f = 0
h = 2

[inner]
kind = repetition
n = 3

[concat]
l = 7
""",
    "rs7-cyclic7": """
[field]
m = 3

[outer]
n = 7
g = 1, 2
f = 0
h = 3, 4, 5, 6

[inner]
kind = cyclic
n = 7
poly = 1,0,1,1,1

[concat]
l = 7
""",
    "rs7-inner-pair": """
[field]
m = 3

[outer]
n = 7
rs_k = 5

[inner]
kind = pair
rows1 = 1,0,1,1,1,0,0
rows2 =
    0,1,0,1,1,1,0
    0,0,1,0,1,1,1

[concat]
l = 7
""",
}


def desk_description(name: str) -> CodeDescription:
    if name not in DESK_RECIPES:
        raise ConfigError(f"unknown desk recipe {name!r}; known: {', '.join(sorted(DESK_RECIPES))}")
    return load_code_description(DESK_RECIPES[name])
