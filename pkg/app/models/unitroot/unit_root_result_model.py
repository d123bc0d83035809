import math
from typing import Optional

import numpy as np
from pydantic import Field, field_validator, model_validator

from app.models.core_model import CoreModel, frozen_array
from app.models.enum.method import Method
from app.models.enum.step_two_form import StepTwoForm
from app.models.regression.design_matrix_model import DesignMatrix
from app.models.regression.ols_fit_model import OlsFit
from util import Utils

T_DF_TOL = 1e-10
ROUND_TRIP_TOL = 1e-12


class LagReparam(CoreModel):
    """Level coefficients rho_1..rho_p and their ADF form (rho, beta_1..beta_k)."""
    rho_j: np.ndarray
    rho: float
    beta: np.ndarray

    @field_validator('rho_j', 'beta', mode='before')
    @classmethod
    def validate_vector(cls, v) -> np.ndarray:
        return frozen_array(v, ndim=1)

    @model_validator(mode='after')
    def validate_round_trip(self) -> 'LagReparam':
        if self.rho_j.size != self.beta.size + 1:
            raise ValueError("rho_j must have exactly one more entry than beta")
        rebuilt = np.diff(np.concatenate(([-self.rho], self.beta, [0.0])))
        if not np.allclose(rebuilt, self.rho_j, rtol=0.0, atol=ROUND_TRIP_TOL * (1.0 + np.abs(self.rho_j).max())):
            raise ValueError("rho_j and (rho, beta) are not mutually inverse")
        return self

    @property
    def k(self) -> int:
        return self.beta.size

    @property
    def p(self) -> int:
        return self.rho_j.size


class UnitRootResult(CoreModel):
    """
    Output of one estimation pipeline. The Wald and LM t-forms are tied to
    the exclusion F of the lagged level and are checked on construction.
    """
    method: Method
    form: Optional[StepTwoForm] = None
    spec: str
    rho_hat: float
    se_rho: float = Field(..., gt=0)
    t_df: float
    f_stat: float = Field(..., ge=0)
    chi: float = Field(..., ge=0)
    t_lm: float
    k: int = Field(..., ge=0)
    p: int = Field(..., ge=1)
    n_obs: int = Field(..., ge=1)
    t_effective: int = Field(..., ge=1)
    m: int = Field(..., ge=1)
    gamma_structural: Optional[np.ndarray] = None
    gamma_step1: Optional[np.ndarray] = None
    det_labels: list[str] = Field(default_factory=list)
    beta: np.ndarray
    fit: OlsFit
    design: DesignMatrix
    response: np.ndarray

    @field_validator('beta', 'response', mode='before')
    @classmethod
    def validate_vector(cls, v) -> np.ndarray:
        return frozen_array(v, ndim=1)

    @field_validator('gamma_structural', 'gamma_step1', mode='before')
    @classmethod
    def validate_optional_vector(cls, v):
        if v is None:
            return v
        return frozen_array(v, ndim=1)

    @model_validator(mode='after')
    def validate_statistics(self) -> 'UnitRootResult':
        sign = Utils.sign(self.rho_hat - 1.0)
        if self.p != self.k + 1:
            raise ValueError("p must equal k + 1")
        if self.beta.size != self.k:
            raise ValueError("beta must have k entries")
        if self.t_df != sign * math.sqrt(self.f_stat):
            raise ValueError("t_df must equal sign(rho_hat - 1) * sqrt(F)")
        ratio = (self.rho_hat - 1.0) / self.se_rho
        if abs(self.t_df - ratio) > T_DF_TOL * max(1.0, abs(ratio)):
            raise ValueError("t_df disagrees with (rho_hat - 1) / se_rho")
        dof = self.t_effective - self.m
        if dof <= 0:
            raise ValueError("t_effective must exceed m")
        if self.chi != self.t_effective * self.f_stat / (dof + self.f_stat):
            raise ValueError("chi must equal T F / ((T - m) + F)")
        if self.t_lm != sign * math.sqrt(self.chi):
            raise ValueError("t_lm must equal sign(rho_hat - 1) * sqrt(chi)")
        expected_rows = self.n_obs if self.method == Method.ZERO_PADDED else self.n_obs - self.p
        if self.t_effective != expected_rows:
            raise ValueError(f"t_effective {self.t_effective} does not match {self.method.value} sample")
        if self.method == Method.RESIDUAL_ONLY and self.gamma_structural is not None:
            raise ValueError("The residual-only autoregression does not estimate gamma")
        return self

    @property
    def sigma2(self) -> float:
        return self.fit.sigma2

    def levels(self) -> LagReparam:
        """rho_1..rho_p implied by (rho_hat, beta)."""
        rho_j = np.diff(np.concatenate(([-self.rho_hat], self.beta, [0.0])))
        return LagReparam(rho_j=rho_j, rho=self.rho_hat, beta=self.beta)
