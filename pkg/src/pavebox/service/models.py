"""Pydantic request/response models for the paving service.

The PaveResponse mirrors the JSON paving document exactly (endpoints as
17-significant-digit decimal strings), plus a live duration_ms field;
writing a response to disk goes through the canonical writer which nulls
the duration for byte-stable files.
"""

from __future__ import annotations

import math
import re
from typing import Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator, model_validator

EPS_POW_RE = re.compile(r"^2\^(-?\d+)$")


def parse_eps(value: Union[str, float, int]) -> float:
    """Accept a float or the 2^-k notation; returns the exact binary value."""
    if isinstance(value, str):
        m = EPS_POW_RE.match(value.strip())
        if m:
            return 2.0 ** int(m.group(1))
        try:
            return float(value)
        except ValueError:
            raise ValueError(f"bad eps {value!r} (use a float or 2^-k)") from None
    return float(value)


class VarSpec(BaseModel):
    name: str
    lo: float
    hi: float

    @model_validator(mode="after")
    def _ordered(self) -> "VarSpec":
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("domain bounds must be finite")
        if self.lo > self.hi:
            raise ValueError(f"empty domain for {self.name!r}")
        return self


class ProblemModel(BaseModel):
    vars: List[VarSpec]
    constraints: List[str]
    project: Optional[Tuple[str, str]] = None

    @model_validator(mode="after")
    def _nonempty(self) -> "ProblemModel":
        if not self.vars:
            raise ValueError("at least one variable required")
        if not self.constraints:
            raise ValueError("at least one constraint required")
        return self


class PaveRequest(BaseModel):
    builtin: Optional[str] = None
    problem: Optional[ProblemModel] = None
    eps: Union[str, float]
    contractor: Literal["hc4", "centered"] = "centered"
    max_boxes: int = Field(default=10**6, ge=1)
    threads: int = Field(default=0, ge=0)
    project: Optional[Tuple[str, str]] = None

    @model_validator(mode="after")
    def _one_source(self) -> "PaveRequest":
        if (self.builtin is None) == (self.problem is None):
            raise ValueError("exactly one of 'builtin' or 'problem' is required")
        parse_eps(self.eps)  # validate early
        return self


class ParseRequest(BaseModel):
    text: str


class CountsModel(BaseModel):
    boundary: int
    discarded: int
    bisections: int


class VarEcho(BaseModel):
    name: str
    lo: str
    hi: str


class ProblemEcho(BaseModel):
    vars: List[VarEcho]
    constraints: List[str]


class ConfigEcho(BaseModel):
    eps: str
    contractor: str
    max_boxes: int
    threads: int


class ResultModel(BaseModel):
    boundary: List[List[Tuple[str, str]]]
    counts: CountsModel
    duration_ms: Optional[int] = None
    truncated: bool


class PaveResponse(BaseModel):
    problem: ProblemEcho
    config: ConfigEcho
    result: ResultModel


class SvgRequest(BaseModel):
    boxes: List[Tuple[Tuple[float, float], Tuple[float, float]]]
    frame: Tuple[Tuple[float, float], Tuple[float, float]]


class HealthResponse(BaseModel):
    status: str
    version: str
