from typing import Dict, List, Optional

from pydantic import BaseModel

from app.models.enum.method import Method
from app.models.enum.response_status import ResponseStatus
from app.models.enum.step_two_form import StepTwoForm
from app.models.unitroot.unit_root_result_model import UnitRootResult


class UnitRootSummary(BaseModel):
    method: Method
    form: Optional[StepTwoForm] = None
    spec: str
    rho_hat: float
    se_rho: float
    t_df: float
    f_stat: float
    chi: float
    t_lm: float
    k: int
    n_obs: int
    t_effective: int
    m: int
    sigma2: float
    beta: List[float]
    gamma_structural: Optional[Dict[str, float]] = None
    design_columns: List[str]

    @classmethod
    def from_result(cls, result: UnitRootResult) -> 'UnitRootSummary':
        gamma = None
        if result.gamma_structural is not None:
            gamma = {label: float(v) for label, v in zip(result.det_labels, result.gamma_structural)}
        return cls(
            method=result.method,
            form=result.form,
            spec=result.spec,
            rho_hat=result.rho_hat,
            se_rho=result.se_rho,
            t_df=result.t_df,
            f_stat=result.f_stat,
            chi=result.chi,
            t_lm=result.t_lm,
            k=result.k,
            n_obs=result.n_obs,
            t_effective=result.t_effective,
            m=result.m,
            sigma2=result.sigma2,
            beta=[float(b) for b in result.beta],
            gamma_structural=gamma,
            design_columns=result.design.column_labels
        )


class UnitRootTestResponse(BaseModel):
    result: UnitRootSummary
    status: ResponseStatus
