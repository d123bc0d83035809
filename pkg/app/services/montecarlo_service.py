import logging
import math
from functools import partial
from typing import Callable, List, Tuple

import numpy as np
from joblib import Parallel, delayed

from app.exceptions.base.unit_root_exception import EstimationDegeneracy
from app.exceptions.montecarlo.montecarlo_exceptions import (
    ExcessiveDropRateError,
    ExperimentConfigError
)
from app.models.enum.experiment_kind import ExperimentKind
from app.models.enum.method import Method
from app.models.enum.statistic import Statistic
from app.models.enum.step_two_form import StepTwoForm
from app.models.montecarlo.experiment_model import (
    CriticalValueEntry,
    CriticalValueTable,
    ExperimentConfig,
    ExperimentReport,
    GammaMse,
    RejectionRate,
    VarianceComparison
)
from app.models.simulation.dgp_config_model import DgpConfig, SeedSpec
from app.services.simulation_service import simulation_service
from app.services.unitroot_service import unitroot_service
from config import MAX_DROP_RATE, MC_BLOCK_SIZE, MIN_PUBLISHED_REPS, URKIT_THREADS
from singleton import SingletonMeta
from util import Utils


# Get logger
logger = logging.getLogger(__name__)

STATISTICS = (Statistic.T_DF, Statistic.T_LM)


# Replication bodies live at module level so joblib can ship them to workers.

def _statistics_replication(config: ExperimentConfig, dgp: DgpConfig, index: int) -> np.ndarray:
    """[t_df, t_lm] per method for one simulated path; NaN on a degenerate path."""
    y = simulation_service.simulate(dgp, config.n_obs, SeedSpec(base_seed=config.base_seed, replication_index=index))
    row = np.full(2 * len(config.methods), np.nan)
    try:
        for position, method in enumerate(config.methods):
            result = unitroot_service.run(method, y, config.spec, config.lags, config.form)
            row[2 * position] = result.t_df
            row[2 * position + 1] = result.t_lm
    except EstimationDegeneracy:
        row[:] = np.nan
    return row


def _variance_replication(config: ExperimentConfig, dgp: DgpConfig, index: int) -> np.ndarray:
    """Residual variance (rss / rows) and sigma2 of the two-step and residual-only fits on one path."""
    y = simulation_service.simulate(dgp, config.n_obs, SeedSpec(base_seed=config.base_seed, replication_index=index))
    try:
        two_step = unitroot_service.two_step_df(y, config.spec, config.lags, StepTwoForm.RESIDUAL)
        residual_only = unitroot_service.residual_only_df(y, config.spec, config.lags)
    except EstimationDegeneracy:
        return np.full(4, np.nan)
    return np.array([
        two_step.fit.rss / two_step.t_effective,
        residual_only.fit.rss / residual_only.t_effective,
        two_step.sigma2,
        residual_only.sigma2
    ])


def _gamma_replication(config: ExperimentConfig, dgp: DgpConfig, index: int) -> np.ndarray:
    """Estimation errors of gamma_hat, gamma_tilde and gamma_bar, concatenated."""
    y = simulation_service.simulate(dgp, config.n_obs, SeedSpec(base_seed=config.base_seed, replication_index=index))
    gamma = np.asarray(dgp.gamma, dtype=float)
    try:
        two_step = unitroot_service.two_step_df(y, config.spec, config.lags, StepTwoForm.LEVELS)
        zero_padded = unitroot_service.zero_padded_df(y, config.spec, config.lags, StepTwoForm.LEVELS)
    except EstimationDegeneracy:
        return np.full(3 * gamma.size, np.nan)
    return np.concatenate([
        two_step.gamma_step1 - gamma,
        two_step.gamma_structural - gamma,
        zero_padded.gamma_structural - gamma
    ])


def _run_block(body: Callable[[int], np.ndarray], start: int, stop: int) -> np.ndarray:
    return np.vstack([body(index) for index in range(start, stop)])


class MonteCarloService(metaclass=SingletonMeta):
    """
    Replication i always uses SeedSpec(base_seed, i). Blocks of replications
    are farmed out with joblib and stitched back in replication order, so
    every table is identical whatever the worker count.
    """

    def replicate(self, body: Callable[[int], np.ndarray], reps: int, n_jobs: int = None) -> np.ndarray:
        n_jobs = URKIT_THREADS if n_jobs is None else n_jobs
        blocks = [(start, min(start + MC_BLOCK_SIZE, reps)) for start in range(0, reps, MC_BLOCK_SIZE)]
        if n_jobs == 1 or len(blocks) == 1:
            chunks = [_run_block(body, start, stop) for start, stop in blocks]
        else:
            chunks = Parallel(n_jobs=n_jobs)(
                delayed(_run_block)(body, start, stop) for start, stop in blocks
            )
        return np.vstack(chunks)

    def _keep_valid(self, records: np.ndarray, context: str, strict: bool) -> Tuple[np.ndarray, int]:
        valid = np.all(np.isfinite(records), axis=1)
        dropped = int(records.shape[0] - valid.sum())
        if dropped:
            rate = dropped / records.shape[0]
            logger.warning(f"{context}: dropped {dropped} degenerate replications ({rate:.4%})")
            if strict and rate > MAX_DROP_RATE:
                raise ExcessiveDropRateError(
                    detail=f"{context}: {dropped} of {records.shape[0]} replications were degenerate "
                           f"(limit {MAX_DROP_RATE:.2%})"
                )
        if not valid.any():
            raise ExcessiveDropRateError(detail=f"{context}: every replication was degenerate")
        return records[valid], dropped

    @staticmethod
    def _mean_se(values: np.ndarray) -> float:
        return float(values.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else 0.0

    def _null_statistics(self, config: ExperimentConfig, n_jobs: int) -> Tuple[np.ndarray, int]:
        body = partial(_statistics_replication, config, config.dgp_null)
        records = self.replicate(body, config.reps, n_jobs)
        return self._keep_valid(records, f"{config.name}/{config.dgp_null.label}", strict=True)

    def tabulate_critical_values(self, config: ExperimentConfig, n_jobs: int = None) -> CriticalValueTable:
        """Empirical (type-7) quantiles of t_df and t_lm under the unit-root null."""
        logger.info(
            f"Tabulating critical values for {[m.value for m in config.methods]}, spec={config.spec}, "
            f"T={config.n_obs}, k={config.lags}, reps={config.reps}"
        )
        records, dropped = self._null_statistics(config, n_jobs)

        entries: List[CriticalValueEntry] = []
        gaps = {}
        for position, method in enumerate(config.methods):
            for offset, statistic in enumerate(STATISTICS):
                values = records[:, 2 * position + offset]
                quantiles = Utils.empirical_quantiles(values, config.quantiles)
                entries.extend(
                    CriticalValueEntry(method=method, statistic=statistic, quantile=q, value=float(v))
                    for q, v in zip(config.quantiles, quantiles)
                )
            gaps[method] = float(np.mean(np.abs(records[:, 2 * position] - records[:, 2 * position + 1])))

        publishable = config.reps >= MIN_PUBLISHED_REPS
        if not publishable:
            logger.warning(f"Only {config.reps} replications; table is marked as a draft")
        logger.info(f"Critical value table complete ({dropped} dropped)")
        return CriticalValueTable(
            entries=entries,
            config=config,
            reps=config.reps,
            base_seed=config.base_seed,
            dropped=dropped,
            mean_abs_lm_gap=gaps,
            publishable=publishable
        )

    def size_power(
        self,
        config: ExperimentConfig,
        cv: CriticalValueTable,
        n_jobs: int = None
    ) -> ExperimentReport:
        """
        Left-tail rejection frequencies at the nominal size for the null
        and every alternative, against simulated critical values. Power is
        size-adjusted by construction.
        """
        critical = {
            (method, statistic): cv.lookup(method, statistic, config.nominal_size)
            for method in config.methods
            for statistic in STATISTICS
        }
        logger.info(f"Size/power run over {len(config.dgps)} DGPs, reps={config.reps}")

        rates: List[RejectionRate] = []
        total_dropped = 0
        for dgp in config.dgps:
            body = partial(_statistics_replication, config, dgp)
            records, dropped = self._keep_valid(
                self.replicate(body, config.reps, n_jobs), f"{config.name}/{dgp.label}", strict=True
            )
            total_dropped += dropped
            for position, method in enumerate(config.methods):
                for offset, statistic in enumerate(STATISTICS):
                    values = records[:, 2 * position + offset]
                    rate = float(np.mean(values < critical[(method, statistic)]))
                    rates.append(RejectionRate(
                        method=method,
                        statistic=statistic,
                        dgp=dgp.label,
                        alpha=dgp.alpha,
                        rate=rate,
                        mc_se=math.sqrt(rate * (1.0 - rate) / values.size)
                    ))

        return ExperimentReport(
            kind=ExperimentKind.SIZE_POWER,
            config=config,
            reps=config.reps,
            dropped=total_dropped,
            rejection_rates=rates,
            standard_error_of_rate=math.sqrt(config.nominal_size * (1.0 - config.nominal_size) / config.reps)
        )

    def variance_comparison(self, config: ExperimentConfig, n_jobs: int = None) -> ExperimentReport:
        """
        Residual variance of the residual-only autoregression against the
        two-step one on the same paths, for every DGP in the config.
        """
        if config.spec.is_empty:
            logger.warning("Empty deterministic spec: both autoregressions coincide")

        rows: List[VarianceComparison] = []
        total_dropped = 0
        for dgp in config.dgps:
            body = partial(_variance_replication, config, dgp)
            records, dropped = self._keep_valid(
                self.replicate(body, config.reps, n_jobs), f"{config.name}/{dgp.label}", strict=False
            )
            total_dropped += dropped
            difference = records[:, 1] - records[:, 0]
            dof_difference = records[:, 3] - records[:, 2]
            n = difference.size
            rows.append(VarianceComparison(
                dgp=dgp.label,
                alpha=dgp.alpha,
                reps=n,
                mean_sigma2_two_step=float(records[:, 0].mean()),
                mean_sigma2_residual_only=float(records[:, 1].mean()),
                mean_dof_sigma2_two_step=float(records[:, 2].mean()),
                mean_dof_sigma2_residual_only=float(records[:, 3].mean()),
                mean_difference=float(difference.mean()),
                difference_se=self._mean_se(difference),
                ordering_fraction=float(np.mean(records[:, 1] >= records[:, 0])),
                mean_dof_difference=float(dof_difference.mean()),
                dof_difference_se=self._mean_se(dof_difference),
                dof_ordering_fraction=float(np.mean(records[:, 3] >= records[:, 2]))
            ))
            logger.info(
                f"{dgp.label}: mean variance difference {rows[-1].mean_difference:.6g} "
                f"(se {rows[-1].difference_se:.3g}), dof-corrected {rows[-1].mean_dof_difference:.6g} "
                f"(se {rows[-1].dof_difference_se:.3g}, ordered in {rows[-1].dof_ordering_fraction:.1%})"
            )

        return ExperimentReport(
            kind=ExperimentKind.VARIANCE,
            config=config,
            reps=config.reps,
            dropped=total_dropped,
            variance_comparison=rows
        )

    def efficiency_comparison(self, config: ExperimentConfig, n_jobs: int = None) -> ExperimentReport:
        """MSE of gamma_hat (step one), gamma_tilde (two step) and gamma_bar (zero padded)."""
        if config.spec.is_empty:
            raise ExperimentConfigError(detail="Efficiency comparison needs a nonempty deterministic spec")
        targets = [dgp for dgp in config.dgps if abs(dgp.alpha) < 1]
        if not targets:
            raise ExperimentConfigError(detail="Efficiency comparison needs at least one DGP with |alpha| < 1")
        labels = config.spec.labels

        rows: List[GammaMse] = []
        total_dropped = 0
        for dgp in targets:
            if len(dgp.gamma) != len(labels):
                raise ExperimentConfigError(
                    detail=f"DGP '{dgp.label}' has {len(dgp.gamma)} gamma entries; spec '{config.spec}' "
                           f"estimates {len(labels)}"
                )
            body = partial(_gamma_replication, config, dgp)
            records, dropped = self._keep_valid(
                self.replicate(body, config.reps, n_jobs), f"{config.name}/{dgp.label}", strict=False
            )
            total_dropped += dropped
            squared = records ** 2
            for block, estimator in enumerate(("gamma_hat", "gamma_tilde", "gamma_bar")):
                for j, label in enumerate(labels):
                    column = squared[:, block * len(labels) + j]
                    rows.append(GammaMse(
                        dgp=dgp.label,
                        alpha=dgp.alpha,
                        estimator=estimator,
                        coefficient=label,
                        mse=float(column.mean()),
                        mc_se=self._mean_se(column)
                    ))

        return ExperimentReport(
            kind=ExperimentKind.EFFICIENCY,
            config=config,
            reps=config.reps,
            dropped=total_dropped,
            gamma_mse=rows
        )

    def run_experiment(self, config: ExperimentConfig, n_jobs: int = None):
        """Dispatch on config.kind; size/power tabulates its own critical values first."""
        if config.kind == ExperimentKind.CRITICAL_VALUES:
            return self.tabulate_critical_values(config, n_jobs)
        if config.kind == ExperimentKind.SIZE_POWER:
            cv = self.tabulate_critical_values(config, n_jobs)
            return self.size_power(config, cv, n_jobs)
        if config.kind == ExperimentKind.VARIANCE:
            return self.variance_comparison(config, n_jobs)
        if config.kind == ExperimentKind.EFFICIENCY:
            return self.efficiency_comparison(config, n_jobs)
        raise ExperimentConfigError(detail=f"Unknown experiment kind {config.kind}")


montecarlo_service = MonteCarloService()
