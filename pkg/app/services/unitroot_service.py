import logging
import math
from typing import Optional, Tuple

import numpy as np

from app.exceptions.regression.regression_exceptions import (
    DegenerateDofError,
    InsufficientObservationsError
)
from app.exceptions.deterministics.deterministics_exceptions import InvalidBreakDateError
from app.exceptions.unitroot.unitroot_exceptions import DegenerateResidualVarianceError
from app.models.deterministics.det_spec_model import DetSpec
from app.models.enum.det_kind import DetKind
from app.models.enum.method import Method
from app.models.enum.step_two_form import StepTwoForm
from app.models.regression.design_matrix_model import DesignMatrix
from app.models.regression.ols_fit_model import OlsFit
from app.models.unitroot.unit_root_result_model import LagReparam, UnitRootResult
from app.services.deterministics_service import deterministics_service
from app.services.regression_service import regression_service
from config import DEGENERATE_TOL
from singleton import SingletonMeta
from util import Utils


# Get logger
logger = logging.getLogger(__name__)


class UnitRootService(metaclass=SingletonMeta):
    """
    Dickey-Fuller estimation pipelines:

    - one step:       y_t on y_{t-1}, dy_{t-1..k} and {x_t, ..., x_{t-p}}, t = p+1..T
    - two step:       y_t (or z^_t) on x_t, z^_{t-1}, dz^_{t-1..k},         t = p+1..T
    - residual only:  z^_t on z^_{t-1}, dz^_{t-1..k} (x_t omitted),          t = p+1..T
    - zero padded:    as two step with z^_0 = ... = z^_{1-p} = 0,             t = 1..T

    z^_t are the residuals of y_t on x_t over the full sample.
    """

    # -- lag polynomial algebra ------------------------------------------

    def reparam_levels_to_adf(self, rho_j) -> LagReparam:
        """rho = sum rho_j, beta_j = -(rho_{j+1} + ... + rho_p)."""
        rho_j = np.asarray(rho_j, dtype=float).reshape(-1)
        if rho_j.size < 1:
            raise ValueError("At least one level coefficient is required")
        tail_sums = np.cumsum(rho_j[::-1])[::-1]
        return LagReparam(rho_j=rho_j, rho=float(rho_j.sum()), beta=-tail_sums[1:])

    def reparam_adf_to_levels(self, rho: float, beta) -> LagReparam:
        """Inverse of reparam_levels_to_adf: rho_j = beta_j - beta_{j-1}, beta_0 = -rho, beta_p = 0."""
        beta = np.asarray(beta, dtype=float).reshape(-1)
        rho_j = np.diff(np.concatenate(([-rho], beta, [0.0])))
        return LagReparam(rho_j=rho_j, rho=float(rho), beta=beta)

    # -- test statistic layer --------------------------------------------

    def lm_from_f(self, f_stat: float, t_effective: int, m: int, sign: int) -> Tuple[float, float]:
        """chi = T F / ((T - m) + F) and its signed square root."""
        if t_effective <= m:
            raise DegenerateDofError(
                detail=f"Effective sample {t_effective} does not exceed {m} regressors"
            )
        if f_stat < 0:
            raise ValueError("F statistic must be nonnegative")
        chi = t_effective * f_stat / ((t_effective - m) + f_stat)
        return chi, sign * math.sqrt(chi)

    def f_from_lm(self, chi: float, t_effective: int, m: int) -> float:
        """F = (T - m) chi / (T - chi)."""
        return (t_effective - m) * chi / (t_effective - chi)

    # -- building blocks --------------------------------------------------

    def _check_variance(self, rss: float, regressand: np.ndarray, context: str):
        if rss <= DEGENERATE_TOL * float(regressand @ regressand):
            raise DegenerateResidualVarianceError(
                detail=f"{context}: residual variance is zero, the series is fitted exactly"
            )

    def step_one(self, y: np.ndarray, spec: DetSpec) -> Tuple[Optional[np.ndarray], np.ndarray]:
        """LS of y_t on x_t over t = 1..T; returns (gamma_hat, residuals z^_t)."""
        if spec.is_empty:
            self._check_variance(float(y @ y), y, "Step one")
            return None, y.copy()
        x = deterministics_service.build(spec, 1, y.size)
        fit = regression_service.ols_fit(y, x)
        self._check_variance(fit.rss, y, "Step one")
        return fit.coefficients, fit.residuals

    def _lagged(self, z: np.ndarray, lag: int, t: np.ndarray) -> np.ndarray:
        """z_{t-lag} on a 1-based grid, zero for indices <= 0."""
        index = t - lag
        values = np.zeros(t.size)
        inside = index >= 1
        values[inside] = z[index[inside] - 1]
        return values

    def _adf_block(self, z: np.ndarray, k: int, t: np.ndarray, prefix: str) -> DesignMatrix:
        """[z_{t-1}, dz_{t-1}, ..., dz_{t-k}] with dz_s = z_s - z_{s-1}."""
        columns = [self._lagged(z, 1, t)]
        labels = [f"{prefix}_L1"]
        for j in range(1, k + 1):
            columns.append(self._lagged(z, j, t) - self._lagged(z, j + 1, t))
            labels.append(f"d{prefix}_L{j}")
        return DesignMatrix.from_columns(columns, labels, t.size)

    def _levels_block(self, z: np.ndarray, p: int, t: np.ndarray, prefix: str) -> DesignMatrix:
        columns = [self._lagged(z, j, t) for j in range(1, p + 1)]
        labels = [f"{prefix}_L{j}" for j in range(1, p + 1)]
        return DesignMatrix.from_columns(columns, labels, t.size)

    def _validate_inputs(self, y, spec: DetSpec, k: int, method: Method) -> np.ndarray:
        y = np.asarray(y, dtype=float).reshape(-1)
        if k < 0:
            raise ValueError("Augmentation order k must be nonnegative")
        if not np.all(np.isfinite(y)):
            raise ValueError("Series contains non-finite values")
        if y.size <= k + 2:
            raise InsufficientObservationsError(
                detail=f"T = {y.size} is too short for k = {k} augmentation lags"
            )
        # the break must fall inside t = p+1..T for every method
        p = k + 1
        if spec.kind == DetKind.BREAK and not p < spec.break_date < y.size:
            raise InvalidBreakDateError(
                detail=f"{method.value}: break date {spec.break_date} must satisfy {p + 1} <= T_B < {y.size}; "
                       f"with k = {k} the first p = k + 1 = {p} observations only supply lags"
            )
        return y

    def _finalize(
        self,
        method: Method,
        form: Optional[StepTwoForm],
        spec: DetSpec,
        n_obs: int,
        k: int,
        regressand: np.ndarray,
        det: DesignMatrix,
        stochastic: DesignMatrix,
        gamma_step1: Optional[np.ndarray],
        report_gamma: bool
    ) -> UnitRootResult:
        design = det.hstack(stochastic)
        if design.n <= design.m:
            raise InsufficientObservationsError(
                detail=f"{method.value}: {design.n} rows cannot support {design.m} regressors"
            )
        fit = regression_service.ols_fit(regressand, design)
        self._check_variance(fit.rss, regressand, method.value)

        level_index = det.m
        t_stat, f_stat = regression_service.wald_single(fit, level_index, 1.0)
        rho_hat = float(fit.coefficients[level_index])
        sign = Utils.sign(rho_hat - 1.0)
        chi, t_lm = self.lm_from_f(f_stat, design.n, design.m, sign)

        return UnitRootResult(
            method=method,
            form=form,
            spec=spec.to_string(),
            rho_hat=rho_hat,
            se_rho=float(fit.std_errors[level_index]),
            t_df=sign * math.sqrt(f_stat),
            f_stat=f_stat,
            chi=chi,
            t_lm=t_lm,
            k=k,
            p=k + 1,
            n_obs=n_obs,
            t_effective=design.n,
            m=design.m,
            gamma_structural=fit.coefficients[:det.m] if report_gamma and det.m else None,
            gamma_step1=gamma_step1,
            det_labels=det.column_labels,
            beta=fit.coefficients[level_index + 1:level_index + 1 + k],
            fit=fit,
            design=design,
            response=regressand
        )

    # -- estimation pipelines ---------------------------------------------

    def one_step_df(
        self,
        y,
        spec: DetSpec,
        k: int,
        expand_deterministics: bool = True
    ) -> UnitRootResult:
        """
        DF autoregression with the deterministic term expanded over lags 0..p.
        expand_deterministics=False keeps x_t only, which is correct for full
        polynomial trends and misspecified for anything else.
        """
        y = self._validate_inputs(y, spec, k, Method.ONE_STEP)
        n_obs, p = y.size, k + 1
        self.step_one(y, spec)

        t = np.arange(p + 1, n_obs + 1)
        if expand_deterministics:
            det = deterministics_service.lagged_expansion(spec, p, p + 1, n_obs)
        else:
            det = deterministics_service.build(spec, p + 1, n_obs)
        stochastic = self._adf_block(y, k, t, "y")
        return self._finalize(
            Method.ONE_STEP, None, spec, n_obs, k, y[p:], det, stochastic,
            gamma_step1=None, report_gamma=False
        )

    def two_step_df(
        self,
        y,
        spec: DetSpec,
        k: int,
        form: StepTwoForm = StepTwoForm.LEVELS
    ) -> UnitRootResult:
        """Step one detrends by LS; step two keeps x_t next to the lagged residuals."""
        y = self._validate_inputs(y, spec, k, Method.TWO_STEP)
        n_obs, p = y.size, k + 1
        gamma_hat, z_hat = self.step_one(y, spec)

        t = np.arange(p + 1, n_obs + 1)
        det = deterministics_service.build(spec, p + 1, n_obs)
        stochastic = self._adf_block(z_hat, k, t, "z")
        regressand = y[p:] if form == StepTwoForm.LEVELS else z_hat[p:]
        return self._finalize(
            Method.TWO_STEP, form, spec, n_obs, k, regressand, det, stochastic,
            gamma_step1=gamma_hat, report_gamma=form == StepTwoForm.LEVELS
        )

    def residual_only_df(self, y, spec: DetSpec, k: int) -> UnitRootResult:
        """Autoregression of the step-one residuals alone; x_t is omitted."""
        y = self._validate_inputs(y, spec, k, Method.RESIDUAL_ONLY)
        n_obs, p = y.size, k + 1
        gamma_hat, z_hat = self.step_one(y, spec)

        t = np.arange(p + 1, n_obs + 1)
        stochastic = self._adf_block(z_hat, k, t, "z")
        return self._finalize(
            Method.RESIDUAL_ONLY, None, spec, n_obs, k, z_hat[p:], DesignMatrix.empty(t.size),
            stochastic, gamma_step1=gamma_hat, report_gamma=False
        )

    def zero_padded_df(
        self,
        y,
        spec: DetSpec,
        k: int,
        form: StepTwoForm = StepTwoForm.LEVELS
    ) -> UnitRootResult:
        """
        Two-step autoregression over the full sample t = 1..T with the
        pre-sample residuals set to zero before differencing, so dz_1 = z_1.
        """
        y = self._validate_inputs(y, spec, k, Method.ZERO_PADDED)
        n_obs = y.size
        gamma_hat, z_hat = self.step_one(y, spec)

        t = np.arange(1, n_obs + 1)
        det = deterministics_service.build(spec, 1, n_obs)
        stochastic = self._adf_block(z_hat, k, t, "z")
        regressand = y if form == StepTwoForm.LEVELS else z_hat
        return self._finalize(
            Method.ZERO_PADDED, form, spec, n_obs, k, regressand, det, stochastic,
            gamma_step1=gamma_hat, report_gamma=form == StepTwoForm.LEVELS
        )

    def levels_autoregression(
        self,
        y,
        spec: DetSpec,
        k: int,
        padded: bool = False
    ) -> Tuple[LagReparam, OlsFit]:
        """Step two with z^_{t-1}, ..., z^_{t-p} as regressors; returns (rho_j, rho, beta) and the fit."""
        y = self._validate_inputs(y, spec, k, Method.TWO_STEP)
        n_obs, p = y.size, k + 1
        _, z_hat = self.step_one(y, spec)

        t_first = 1 if padded else p + 1
        t = np.arange(t_first, n_obs + 1)
        det = deterministics_service.build(spec, t_first, n_obs)
        design = det.hstack(self._levels_block(z_hat, p, t, "z"))
        fit = regression_service.ols_fit(y[t_first - 1:], design)
        return self.reparam_levels_to_adf(fit.coefficients[det.m:]), fit

    def run(
        self,
        method: Method,
        y,
        spec: DetSpec,
        k: int,
        form: StepTwoForm = StepTwoForm.LEVELS
    ) -> UnitRootResult:
        if method == Method.ONE_STEP:
            return self.one_step_df(y, spec, k)
        if method == Method.TWO_STEP:
            return self.two_step_df(y, spec, k, form)
        if method == Method.RESIDUAL_ONLY:
            return self.residual_only_df(y, spec, k)
        if method == Method.ZERO_PADDED:
            return self.zero_padded_df(y, spec, k, form)
        raise ValueError(f"Unknown method {method}")


unitroot_service = UnitRootService()
