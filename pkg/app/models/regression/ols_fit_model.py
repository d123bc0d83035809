from typing import List

import numpy as np
from pydantic import Field, field_validator

from app.models.core_model import CoreModel, frozen_array


class OlsFit(CoreModel):
    """Least-squares output with classical (homoskedastic) inference."""
    coefficients: np.ndarray
    residuals: np.ndarray
    fitted: np.ndarray
    rss: float = Field(..., ge=0)
    sigma2: float = Field(..., ge=0)
    std_errors: np.ndarray
    cov: np.ndarray
    n: int = Field(..., ge=1)
    m: int = Field(..., ge=1)
    column_labels: List[str]

    @field_validator('coefficients', 'residuals', 'fitted', 'std_errors', mode='before')
    @classmethod
    def validate_vector(cls, v) -> np.ndarray:
        return frozen_array(v, ndim=1)

    @field_validator('cov', mode='before')
    @classmethod
    def validate_matrix(cls, v) -> np.ndarray:
        return frozen_array(v, ndim=2)

    @property
    def dof(self) -> int:
        return self.n - self.m

    def index_of(self, label: str) -> int:
        return self.column_labels.index(label)

    def coefficient(self, label: str) -> float:
        return float(self.coefficients[self.index_of(label)])
