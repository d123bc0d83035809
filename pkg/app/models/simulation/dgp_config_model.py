from typing import List, Optional

import numpy as np
from pydantic import Field, field_serializer, field_validator, model_validator

from app.exceptions.simulation.simulation_exceptions import NonStationaryErrorPolynomial
from app.models.core_model import CoreModel
from app.models.deterministics.det_spec_model import DetSpec
from app.models.enum.innovation import InitialCondition, Innovation
from config import MIN_STUDENT_T_DF

MAX_SEED = 2 ** 64 - 1


def ar_polynomial_is_stationary(coefficients: List[float]) -> bool:
    """True when 1 - b_1 L - ... - b_k L^k has every root outside the unit circle."""
    if not coefficients:
        return True
    inverse_roots = np.roots(np.concatenate(([1.0], -np.asarray(coefficients, dtype=float))))
    return bool(np.all(np.abs(inverse_roots) < 1.0 - 1e-12))


class DgpConfig(CoreModel):
    """
    y_t = gamma' x_t + z_t,  z_t = alpha z_{t-1} + u_t,
    u_t = b_1 u_{t-1} + ... + b_k u_{t-k} + eps_t,  sd(eps_t) = sigma.
    """
    name: Optional[str] = None
    gamma: List[float] = Field(default_factory=list)
    det: DetSpec = Field(default_factory=DetSpec.none)
    alpha: float = 1.0
    error_ar: List[float] = Field(default_factory=list)
    sigma: float = Field(1.0, gt=0)
    z0: float = 0.0
    burn_in: int = Field(0, ge=0)
    innovation: Innovation = Innovation.GAUSSIAN
    df: float = Field(MIN_STUDENT_T_DF, ge=MIN_STUDENT_T_DF)
    initial: InitialCondition = InitialCondition.FIXED

    @field_validator('det', mode='before')
    @classmethod
    def parse_det(cls, v):
        if isinstance(v, str):
            return DetSpec.parse(v)
        return v

    @field_serializer('det')
    def serialize_det(self, det: DetSpec) -> str:
        return det.to_string()

    @model_validator(mode='after')
    def validate_process(self) -> 'DgpConfig':
        if len(self.gamma) != self.det.n_columns:
            raise ValueError(
                f"gamma has {len(self.gamma)} entries but det '{self.det}' "
                f"has {self.det.n_columns} columns"
            )
        if not ar_polynomial_is_stationary(self.error_ar):
            raise NonStationaryErrorPolynomial(
                detail=f"Error AR coefficients {self.error_ar} define a non-stationary polynomial"
            )
        if self.initial == InitialCondition.STATIONARY and abs(self.alpha) >= 1:
            raise ValueError("A stationary initial condition requires |alpha| < 1")
        return self

    @property
    def label(self) -> str:
        return self.name or f"alpha={self.alpha:g}"


class SeedSpec(CoreModel):
    """The innovation stream of one replication is a pure function of these two numbers."""
    base_seed: int = Field(..., ge=0, le=MAX_SEED)
    replication_index: int = Field(0, ge=0)
