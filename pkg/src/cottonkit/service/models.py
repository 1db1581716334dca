"""Pydantic request/response models for the curvature service.

Requests carry file CONTENT (metric/tensor spec text), not paths: parsing
happens server-side with the toolkit's own grammar so diagnostics carry
positions.  Exact scalars travel as "p/q" strings.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

Mode = Literal["exact", "float"]


class CurvatureRequest(BaseModel):
    metric: str = Field(description="metric spec document (YAML)")
    at: Optional[list[dict[str, str]]] = Field(
        default=None, description="explicit points, one {coord: value} map each")
    samples: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = None
    mode: Optional[Mode] = Field(default=None, description="override file mode")
    tolerance: Optional[float] = Field(default=None, gt=0)


class SymmetryChecks(BaseModel):
    cotton_antisymmetry: str | float
    cotton_cyclic: str | float
    cotton_trace: str | float
    ok: bool
    div_schouten_equals_d_trace: bool
    div_schouten_residual: str | float


class TensorComponents(BaseModel):
    components: dict[str, str | float]
    zero: bool
    max_abs: float


class PointReport(BaseModel):
    point: dict[str, str | float]
    signature: dict[str, int]
    ricci: TensorComponents
    scalar_curvature: str | float
    schouten: TensorComponents
    cotton: TensorComponents
    nabla_cotton: TensorComponents
    weyl: Optional[TensorComponents] = None
    symmetry_checks: SymmetryChecks


class CurvatureResponse(BaseModel):
    mode: Mode
    coords: list[str]
    dim: int
    points: list[PointReport]


class ClassifyRequest(BaseModel):
    metric: str
    samples: Optional[int] = Field(
        default=None, ge=1,
        description="random sample count; defaults to 20 when no explicit "
                    "points are given")
    seed: Optional[int] = None
    at: Optional[list[dict[str, str]]] = None
    mode: Optional[Mode] = None
    tolerance: Optional[float] = Field(default=None, gt=0)
    allow_skip: bool = False


class EvidenceRecord(BaseModel):
    point: dict[str, str | float]
    cotton_norm: float
    nabla_cotton_norm: float
    cotton_zero: bool
    nabla_zero: bool
    skipped: bool


class ClassifyResponse(BaseModel):
    verdict: str
    disclaimer: str
    mode: Mode
    sample_count: int
    seed: Optional[int]
    witness: Optional[dict[str, str | float]]
    evidence: list[EvidenceRecord]


class VerifyModelRequest(BaseModel):
    a: str = "0"
    samples: int = Field(default=20, ge=1)
    seed: int = 0
    mode: Mode = "exact"
    tolerance: Optional[float] = Field(default=None, gt=0)


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str


class VerifyModelResponse(BaseModel):
    a: str
    mode: Mode
    samples: int
    seed: int
    passed: bool
    checks: list[CheckResult]


class DecomposeRequest(BaseModel):
    tensor: str = Field(description="tensor spec document (YAML)")
    tolerance: Optional[float] = Field(default=None, gt=0)


class DecomposeResponse(BaseModel):
    kind: str
    kernel_dim: int
    kernel_basis: list[list[str | float]]
    kernel_causal: list[str]
    index_q: int
    mode: Mode
    u: Optional[list[float]] = None
    v: Optional[list[float]] = None
    a: Optional[float] = None
    residual: Optional[float] = None
    certificate: Optional[dict] = None


class SelftestRequest(BaseModel):
    mode: Mode = "exact"
    seed: int = 0
    criteria: Optional[list[int]] = None
    corrupt_fixture: bool = False


class CriterionRecord(BaseModel):
    id: int
    name: str
    passed: bool
    detail: str
    seconds: float


class SelftestResponse(BaseModel):
    mode: Mode
    seed: int
    corrupt_fixture: bool
    passed: bool
    criteria: list[CriterionRecord]


class HealthResponse(BaseModel):
    status: str
    version: str
