"""Request/response models for the HTTP service."""
from __future__ import annotations

import math
from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..montecarlo import Estimate


class RunRequest(BaseModel):
    """A trial plan in wire form."""

    experiment: Literal["bitflip", "c4c6"]
    decoder: Literal["analog", "digital", "both"] = "both"
    sigmas: list[float] = Field(min_length=1)
    levels: list[int] = Field(default_factory=list)
    trials: Optional[int] = Field(default=None, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)


class EstimateModel(BaseModel):
    """One estimate row; rate fields are null for failed cells."""

    experiment: str
    decoder: str
    level: int
    basis_mode: str
    sigma: float
    squeezing_db: float
    trials: int
    failures: int
    p_fail: Optional[float]
    ci_low: Optional[float]
    ci_high: Optional[float]
    seed: int
    error: Optional[str] = None

    @classmethod
    def from_estimate(cls, e: Estimate) -> "EstimateModel":
        as_opt = lambda v: None if math.isnan(v) else v
        return cls(
            experiment=e.experiment,
            decoder=e.decoder,
            level=e.level,
            basis_mode=e.basis_mode,
            sigma=e.sigma,
            squeezing_db=e.squeezing_db,
            trials=e.trials,
            failures=e.failures,
            p_fail=as_opt(e.p_fail),
            ci_low=as_opt(e.ci_low),
            ci_high=as_opt(e.ci_high),
            seed=e.seed,
            error=e.error,
        )

    def to_estimate(self) -> Estimate:
        as_float = lambda v: math.nan if v is None else v
        return Estimate(
            experiment=self.experiment,
            decoder=self.decoder,
            level=self.level,
            basis_mode=self.basis_mode,
            sigma=self.sigma,
            squeezing_db=self.squeezing_db,
            trials=self.trials,
            failures=self.failures,
            p_fail=as_float(self.p_fail),
            ci_low=as_float(self.ci_low),
            ci_high=as_float(self.ci_high),
            seed=self.seed,
            error=self.error,
        )


class RunResponse(BaseModel):
    estimates: list[EstimateModel]


class OracleRequest(BaseModel):
    code: Literal["bitflip"] = "bitflip"
    sigma: float = Field(gt=0)
    decoder: Literal["analog", "digital"]
    grid: int = 400


class OracleResponse(BaseModel):
    code: str
    sigma: float
    decoder: str
    grid: int
    p_fail: float


class HashingRequest(BaseModel):
    mode: Literal["digital", "analog"]
    lo: float = Field(default=0.3, gt=0)
    hi: float = Field(default=0.9, gt=0)
    tol: float = Field(default=1e-4, gt=0)


class HashingResponse(BaseModel):
    mode: str
    sigma_root: float
    db_root: float
    tolerance: float
