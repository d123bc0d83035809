from typing import Dict, List, Optional

from pydantic import Field, field_serializer, field_validator, model_validator

from app.exceptions.montecarlo.montecarlo_exceptions import MissingCriticalValueError
from app.models.core_model import CoreModel
from app.models.deterministics.det_spec_model import DetSpec
from app.models.enum.experiment_kind import ExperimentKind
from app.models.enum.k_rule import KRule
from app.models.enum.method import Method
from app.models.enum.statistic import Statistic
from app.models.enum.step_two_form import StepTwoForm
from app.models.simulation.dgp_config_model import MAX_SEED, DgpConfig
from config import DEFAULT_BASE_SEED, DEFAULT_QUANTILES
from util import Utils


class ExperimentConfig(CoreModel):
    name: str = "experiment"
    kind: ExperimentKind = ExperimentKind.CRITICAL_VALUES
    methods: List[Method] = Field(..., min_length=1)
    spec: DetSpec = Field(default_factory=DetSpec.none)
    n_obs: int = Field(..., alias="T", ge=10)
    k_rule: KRule = KRule.FIXED
    k: int = Field(0, ge=0)
    form: StepTwoForm = StepTwoForm.LEVELS
    reps: int = Field(..., ge=1)
    base_seed: int = Field(DEFAULT_BASE_SEED, ge=0, le=MAX_SEED)
    dgp_null: DgpConfig = Field(default_factory=lambda: DgpConfig(name="null"))
    dgp_alts: List[DgpConfig] = Field(default_factory=list)
    nominal_size: float = Field(0.05, gt=0, lt=1)
    quantiles: List[float] = Field(default_factory=lambda: list(DEFAULT_QUANTILES))

    @field_validator('spec', mode='before')
    @classmethod
    def parse_spec(cls, v):
        if isinstance(v, str):
            return DetSpec.parse(v)
        return v

    @field_validator('methods')
    @classmethod
    def validate_methods(cls, v: List[Method]) -> List[Method]:
        if len(set(v)) != len(v):
            raise ValueError("methods must not repeat")
        return v

    @field_validator('quantiles')
    @classmethod
    def validate_quantiles(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("at least one quantile is required")
        if any(not 0 < q < 1 for q in v):
            raise ValueError("quantiles must lie strictly between 0 and 1")
        return sorted(set(v))

    @field_serializer('spec')
    def serialize_spec(self, spec: DetSpec) -> str:
        return spec.to_string()

    @model_validator(mode='after')
    def validate_null(self) -> 'ExperimentConfig':
        if self.dgp_null.alpha != 1.0:
            raise ValueError("dgp_null must have alpha = 1")
        if self.kind == ExperimentKind.SIZE_POWER and not any(abs(q - self.nominal_size) < 1e-12 for q in self.quantiles):
            raise ValueError(f"quantiles must include the nominal size {self.nominal_size:g}")
        return self

    @property
    def lags(self) -> int:
        if self.k_rule == KRule.SCHWERT:
            return Utils.schwert_lags(self.n_obs)
        return self.k

    @property
    def dgps(self) -> List[DgpConfig]:
        return [self.dgp_null, *self.dgp_alts]

    def summary(self) -> Dict:
        return self.model_dump(mode='json', by_alias=True)

    def fingerprint(self) -> str:
        return Utils.config_hash(self.summary())


class CriticalValueEntry(CoreModel):
    method: Method
    statistic: Statistic
    quantile: float
    value: float


class CriticalValueTable(CoreModel):
    """Empirical null quantiles keyed by (method, statistic, quantile)."""
    entries: List[CriticalValueEntry]
    config: Optional[ExperimentConfig] = None
    reps: int = Field(..., ge=1)
    base_seed: int
    dropped: int = Field(0, ge=0)
    mean_abs_lm_gap: Dict[Method, float] = Field(default_factory=dict)
    publishable: bool = True

    @model_validator(mode='after')
    def validate_monotone(self) -> 'CriticalValueTable':
        groups: Dict = {}
        for entry in self.entries:
            groups.setdefault((entry.method, entry.statistic), []).append(entry)
        for key, group in groups.items():
            ordered = sorted(group, key=lambda e: e.quantile)
            values = [e.value for e in ordered]
            if any(b < a for a, b in zip(values, values[1:])):
                raise ValueError(f"Critical values for {key} are not monotone in the quantile")
        return self

    def lookup(self, method: Method, statistic: Statistic, quantile: float) -> float:
        for entry in self.entries:
            if entry.method == method and entry.statistic == statistic and abs(entry.quantile - quantile) < 1e-12:
                return entry.value
        raise MissingCriticalValueError(
            detail=f"No critical value for {method.value}/{statistic.value} at quantile {quantile:g}"
        )

    def quantiles_for(self, method: Method, statistic: Statistic) -> List[float]:
        return sorted(e.quantile for e in self.entries if e.method == method and e.statistic == statistic)


class RejectionRate(CoreModel):
    method: Method
    statistic: Statistic
    dgp: str
    alpha: float
    rate: float = Field(..., ge=0, le=1)
    mc_se: float = Field(..., ge=0)


class VarianceComparison(CoreModel):
    dgp: str
    alpha: float
    reps: int
    mean_sigma2_two_step: float
    mean_sigma2_residual_only: float
    mean_dof_sigma2_two_step: float
    mean_dof_sigma2_residual_only: float
    # rss / rows; nested fits, so this ordering holds in every replication
    mean_difference: float
    difference_se: float
    ordering_fraction: float = Field(..., ge=0, le=1)
    # rss / (rows - columns)
    mean_dof_difference: float
    dof_difference_se: float
    dof_ordering_fraction: float = Field(..., ge=0, le=1)


class GammaMse(CoreModel):
    dgp: str
    alpha: float
    estimator: str
    coefficient: str
    mse: float = Field(..., ge=0)
    mc_se: float = Field(..., ge=0)


class ExperimentReport(CoreModel):
    kind: ExperimentKind
    config: ExperimentConfig
    reps: int
    dropped: int = 0
    rejection_rates: List[RejectionRate] = Field(default_factory=list)
    variance_comparison: List[VarianceComparison] = Field(default_factory=list)
    gamma_mse: List[GammaMse] = Field(default_factory=list)
    standard_error_of_rate: Optional[float] = None

    def rate(self, method: Method, statistic: Statistic, dgp: str) -> RejectionRate:
        for row in self.rejection_rates:
            if row.method == method and row.statistic == statistic and row.dgp == dgp:
                return row
        raise KeyError(f"No rejection rate for {method.value}/{statistic.value}/{dgp}")

    def variance_for(self, dgp: str) -> VarianceComparison:
        for row in self.variance_comparison:
            if row.dgp == dgp:
                return row
        raise KeyError(f"No variance comparison for {dgp}")
