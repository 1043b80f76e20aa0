"""Request and response bodies for the service endpoints.

Requests carry either s or g, never both; omitting both means s = 1, the
value every figure-style default uses.  Responses never contain NaN or
infinities (strict JSON): undefined entries are null and the CSV layer turns
them back into the literal token nan.
"""

from __future__ import annotations

import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..spectrum import ModelParams


def clean_float(v) -> float | None:
    """None for missing or non-finite values; plain float otherwise."""
    if v is None:
        return None
    v = float(v)
    return v if math.isfinite(v) else None


class ParamsRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    s: float | None = Field(default=None, ge=0.0, description="oscillator index s >= 0")
    g: float | None = Field(default=None, ge=0.0, description="barrier strength g = s(s+1)")

    @model_validator(mode="after")
    def _exactly_one(self):
        if self.s is not None and self.g is not None:
            raise ValueError("give either s or g, not both")
        return self

    def to_params(self) -> ModelParams:
        if self.g is not None:
            return ModelParams.from_g(self.g)
        return ModelParams.from_s(self.s if self.s is not None else 1.0)


class HealthResponse(BaseModel):
    status: str
    version: str


class SpectrumRequest(ParamsRequest):
    n_max: int = Field(default=10, ge=0, le=100000)


class LevelOut(BaseModel):
    n: int
    energy: float


class SpectrumResponse(BaseModel):
    s: float
    g: float
    levels: list[LevelOut]


class GridField(BaseModel):
    model_config = ConfigDict(extra="forbid")

    min: float = Field(gt=0.0)
    max: float
    count: int = Field(ge=16, le=200000)

    @model_validator(mode="after")
    def _ordered(self):
        if not self.max > self.min:
            raise ValueError("grid needs max > min")
        return self


class WavefnRequest(ParamsRequest):
    n: int = Field(default=0, ge=0, le=64)
    grid: GridField | None = None


class WavefnResponse(BaseModel):
    n: int
    x: list[float]
    psi: list[float]


class StateRequest(ParamsRequest):
    family: Literal["bg", "gp"]
    z_re: float = 0.0
    z_im: float = 0.0
    dim: int | None = Field(default=None, ge=1, le=100000)
    tail_threshold: float = Field(default=1e-12, gt=0.0, lt=1.0)


class CoeffOut(BaseModel):
    n: int
    re: float
    im: float
    abs2: float


class StateResponse(BaseModel):
    family: str
    label: str
    z_re: float
    z_im: float
    dim: int
    tail_bound: float | None
    coeff: list[CoeffOut]


class MetricsScanRequest(ParamsRequest):
    family: Literal["bg", "gp"]
    z_min: float
    z_max: float
    steps: int = Field(ge=0, le=100000)
    dim: int | None = Field(default=None, ge=4, le=100000)
    tail_threshold: float = Field(default=1e-12, gt=0.0, lt=1.0)


class MetricsRecordOut(BaseModel):
    z: float
    s_x1: float | None
    s_p1: float | None
    s_x2: float | None
    s_p2: float | None
    q: float | None
    trunc_dim: int
    tail_bound: float | None
    error: str | None = None


class MetricsScanResponse(BaseModel):
    family: str
    records: list[MetricsRecordOut]
    warnings: list[str]


class IdentityCheckRequest(ParamsRequest):
    family: Literal["bg", "gp"]
    n_max: int | None = Field(default=None, ge=0, le=12)
    tolerance: float | None = Field(default=None, gt=0.0)


class MomentRowOut(BaseModel):
    n: int
    quadrature: float
    closed_form: float
    rel_err: float


class QuadratureSchemeOut(BaseModel):
    kind: str
    node_count: int
    transform: str
    error_estimate: float | None


class IdentityCheckResponse(BaseModel):
    family: str
    tolerance: float
    max_rel_err: float
    passed: bool
    scheme: QuadratureSchemeOut
    rows: list[MomentRowOut]


class AlgebraCheckRequest(ParamsRequest):
    dim: int = Field(default=256, ge=8, le=4096)
    n_grid: int = Field(default=6, ge=0, le=16)
    interior_tol: float = Field(default=1e-12, gt=0.0)
    grid_tol: float = Field(default=1e-4, gt=0.0)


class CommutatorOut(BaseModel):
    lowering_raising: float
    weight_raising: float
    weight_lowering: float
    hamiltonian_match: float
    edge_residual: float | None
    max_interior: float


class GridResidualOut(BaseModel):
    n: int
    ladder_plus: float
    ladder_minus: float
    shift_a: float
    shift_adjoint: float


class AlgebraCheckResponse(BaseModel):
    dim: int
    interior_tol: float
    grid_tol: float
    commutators: CommutatorOut
    grid: list[GridResidualOut]
    passed: bool


class VerifyCheckOut(BaseModel):
    name: str
    passed: bool
    measured: float | None
    bound: float | None
    comparator: str
    detail: str
    line: str


class VerifyResponse(BaseModel):
    all_passed: bool
    elapsed: float
    results: list[VerifyCheckOut]
