import math

import numpy as np
import pytest

from app.exceptions import (
    DegenerateDofError,
    DegenerateResidualVarianceError,
    InsufficientObservationsError,
    InvalidBreakDateError
)
from app.models.deterministics.det_spec_model import DetSpec
from app.models.enum.innovation import InitialCondition
from app.models.enum.method import Method
from app.models.enum.step_two_form import StepTwoForm
from app.models.unitroot.unit_root_result_model import LagReparam
from app.services.deterministics_service import deterministics_service
from app.services.unitroot_service import unitroot_service
from tests.helpers import ols_oracle, simulate
from util import Utils


def assert_statistic_algebra(result):
    sign = Utils.sign(result.rho_hat - 1.0)
    assert result.t_df == sign * math.sqrt(result.f_stat)
    assert result.chi == result.t_effective * result.f_stat / ((result.t_effective - result.m) + result.f_stat)
    assert result.t_lm == sign * math.sqrt(result.chi)
    recovered = unitroot_service.f_from_lm(result.chi, result.t_effective, result.m)
    assert recovered == pytest.approx(result.f_stat, rel=1e-10, abs=1e-10)


class TestReparameterization:
    @pytest.mark.parametrize("rho_j, rho, beta", [
        ([0.5, 0.3], 0.8, [-0.3]),
        ([1.0], 1.0, []),
        ([0.2, 0.2, 0.2], 0.6, [-0.4, -0.2]),
    ])
    def test_levels_to_adf(self, rho_j, rho, beta):
        reparam = unitroot_service.reparam_levels_to_adf(rho_j)

        assert reparam.rho == pytest.approx(rho)
        np.testing.assert_allclose(reparam.beta, beta, atol=1e-15)
        assert reparam.k == len(beta)
        assert reparam.p == len(rho_j)

    def test_round_trip(self):
        rho_j = np.array([0.7, -0.2, 0.15, 0.05])
        adf = unitroot_service.reparam_levels_to_adf(rho_j)
        back = unitroot_service.reparam_adf_to_levels(adf.rho, adf.beta)
        np.testing.assert_allclose(back.rho_j, rho_j, atol=1e-12)

    def test_inconsistent_triple_is_rejected(self):
        with pytest.raises(ValueError):
            LagReparam(rho_j=[0.5, 0.3], rho=0.8, beta=[0.3])


class TestStatisticLayer:
    def test_worked_value(self):
        chi, t_lm = unitroot_service.lm_from_f(4.0, 100, 3, -1)
        assert chi == pytest.approx(400 / 101)
        assert chi == pytest.approx(3.960396, abs=1e-6)
        assert t_lm == pytest.approx(-1.990073, abs=1e-6)

    def test_null_statistic(self):
        assert unitroot_service.lm_from_f(0.0, 50, 2, 0) == (0.0, 0.0)

    def test_large_sample_limit(self):
        _, t_lm = unitroot_service.lm_from_f(6.25, 10 ** 6, 5, -1)
        assert abs(t_lm - (-2.5)) < 1e-5

    def test_inversion(self):
        chi, _ = unitroot_service.lm_from_f(4.0, 100, 3, -1)
        assert unitroot_service.f_from_lm(chi, 100, 3) == pytest.approx(4.0, rel=1e-10)

    def test_degenerate_dof(self):
        with pytest.raises(DegenerateDofError):
            unitroot_service.lm_from_f(1.0, 3, 3, 1)

    @pytest.mark.parametrize("method", list(Method))
    @pytest.mark.parametrize("spec", ["none", "c", "ct", "break:90"])
    def test_algebra_holds_on_every_result(self, trending_ar, method, spec):
        result = unitroot_service.run(method, trending_ar, DetSpec.parse(spec), 2)
        assert_statistic_algebra(result)


class TestOneStep:
    def test_matches_textbook_regression(self, random_walk):
        result = unitroot_service.one_step_df(random_walk, DetSpec.polynomial(0), 0)

        X = np.column_stack([np.ones(199), random_walk[:-1]])
        coefficients, std_errors, _ = ols_oracle(random_walk[1:], X)
        t_oracle = (coefficients[1] - 1.0) / std_errors[1]

        assert result.t_df == pytest.approx(t_oracle, abs=1e-8)
        assert result.rho_hat == pytest.approx(coefficients[1], abs=1e-10)
        assert result.design.column_labels == ["const", "y_L1"]
        assert result.t_effective == 199

    def test_exact_line_is_degenerate(self):
        with pytest.raises(DegenerateResidualVarianceError):
            unitroot_service.one_step_df(np.arange(1.0, 51.0), DetSpec.polynomial(1), 0)

    def test_break_dummies_enter_with_their_lags(self, trending_ar):
        result = unitroot_service.one_step_df(trending_ar, DetSpec.with_break(0, 100), 1)

        labels = result.design.column_labels
        assert {"DU", "DU_L1", "DU_L2"} <= set(labels)
        assert "const_L1" not in labels
        assert np.linalg.matrix_rank(result.design.values) == result.m

    def test_dropping_break_lags_changes_the_statistic(self):
        y = simulate(200, seed=31, det=DetSpec.with_break(0, 100), gamma=[1.0, 3.0], alpha=0.9)
        spec = DetSpec.with_break(0, 100)

        full = unitroot_service.one_step_df(y, spec, 1)
        crippled = unitroot_service.one_step_df(y, spec, 1, expand_deterministics=False)

        assert "DU_L1" not in crippled.design.column_labels
        assert abs(full.t_df - crippled.t_df) > 1e-3

    def test_too_many_lags(self):
        with pytest.raises(InsufficientObservationsError):
            unitroot_service.one_step_df(np.arange(5.0), DetSpec.none(), 3)


class TestTwoStep:
    @pytest.mark.parametrize("order", [0, 1, 2])
    @pytest.mark.parametrize("k", [0, 1, 4])
    def test_equivalent_to_one_step(self, order, k):
        spec = DetSpec.polynomial(order)
        worst = 0.0
        for seed in range(100):
            y = simulate(200, seed=seed, error_ar=[0.3])
            one = unitroot_service.one_step_df(y, spec, k)
            two = unitroot_service.two_step_df(y, spec, k)
            worst = max(worst, abs(one.t_df - two.t_df))
            assert one.m == two.m
        assert worst < 1e-8

    def test_levels_and_residual_forms_agree(self, trending_ar):
        spec = DetSpec.polynomial(1)
        levels = unitroot_service.two_step_df(trending_ar, spec, 2, StepTwoForm.LEVELS)
        residual = unitroot_service.two_step_df(trending_ar, spec, 2, StepTwoForm.RESIDUAL)

        assert residual.rho_hat == pytest.approx(levels.rho_hat, abs=1e-10)
        assert residual.se_rho == pytest.approx(levels.se_rho, abs=1e-10)
        assert residual.t_df == pytest.approx(levels.t_df, abs=1e-10)
        assert residual.gamma_structural is None

        offset = residual.fit.coefficients[:2]
        np.testing.assert_allclose(offset, levels.gamma_structural - levels.gamma_step1, atol=1e-8)

    def test_ar1_trend_case_reproduces_the_df_estimator(self):
        spec = DetSpec.polynomial(1)
        for seed in range(100):
            y = simulate(150, seed=1000 + seed, det=spec, gamma=[2.0, 0.1], alpha=0.9)
            transformed = unitroot_service.two_step_df(y, spec, 0)
            df = unitroot_service.one_step_df(y, spec, 0)
            assert transformed.rho_hat == pytest.approx(df.rho_hat, abs=1e-10)
            assert transformed.se_rho == pytest.approx(df.se_rho, abs=1e-10)

    def test_levels_parameterization_matches_adf_form(self, trending_ar):
        spec = DetSpec.polynomial(1)
        adf = unitroot_service.two_step_df(trending_ar, spec, 2)
        reparam, fit = unitroot_service.levels_autoregression(trending_ar, spec, 2)

        assert reparam.rho == pytest.approx(adf.rho_hat, abs=1e-10)
        np.testing.assert_allclose(reparam.beta, adf.beta, atol=1e-10)
        np.testing.assert_allclose(adf.levels().rho_j, reparam.rho_j, atol=1e-10)
        assert fit.column_labels[-3:] == ["z_L1", "z_L2", "z_L3"]

    def test_k_zero_levels_coefficient_is_rho(self, random_walk):
        reparam, _ = unitroot_service.levels_autoregression(random_walk, DetSpec.polynomial(0), 0)
        adf = unitroot_service.two_step_df(random_walk, DetSpec.polynomial(0), 0)
        assert reparam.rho_j[0] == pytest.approx(adf.rho_hat, abs=1e-12)


class TestResidualOnly:
    def test_no_deterministics_means_nothing_to_omit(self, random_walk):
        residual_only = unitroot_service.residual_only_df(random_walk, DetSpec.none(), 1)
        two_step = unitroot_service.two_step_df(random_walk, DetSpec.none(), 1, StepTwoForm.RESIDUAL)
        assert residual_only.rho_hat == pytest.approx(two_step.rho_hat, abs=1e-12)

    def test_omitting_x_changes_the_estimator(self, trending_ar):
        spec = DetSpec.polynomial(1)
        residual_only = unitroot_service.residual_only_df(trending_ar, spec, 0)
        two_step = unitroot_service.two_step_df(trending_ar, spec, 0)

        assert residual_only.gamma_structural is None
        assert residual_only.m == 1
        assert abs(residual_only.rho_hat - two_step.rho_hat) > 1e-8

    def test_residual_variance_is_never_smaller(self):
        spec = DetSpec.polynomial(0)
        for seed in range(50):
            y = simulate(100, seed=seed)
            two_step = unitroot_service.two_step_df(y, spec, 0, StepTwoForm.RESIDUAL)
            residual_only = unitroot_service.residual_only_df(y, spec, 0)
            assert residual_only.fit.rss >= two_step.fit.rss - 1e-12


class TestZeroPadded:
    def test_uses_every_observation(self, trending_ar):
        result = unitroot_service.zero_padded_df(trending_ar, DetSpec.polynomial(1), 3)

        assert result.t_effective == trending_ar.size
        assert result.m == 2 + 1 + 3
        assert result.design.n == trending_ar.size

    def test_first_row_retains_the_first_observation(self, trending_ar):
        result = unitroot_service.zero_padded_df(trending_ar, DetSpec.polynomial(1), 0)

        np.testing.assert_array_equal(result.design.values[0], [1.0, 1.0, 0.0])
        assert result.response[0] == trending_ar[0]

    def test_first_difference_uses_zero_presample(self, trending_ar):
        result = unitroot_service.zero_padded_df(trending_ar, DetSpec.polynomial(1), 1)
        _, z_hat = unitroot_service.step_one(trending_ar, DetSpec.polynomial(1))

        assert result.design.column("dz_L1")[1] == pytest.approx(z_hat[0])
        assert result.design.column("dz_L1")[0] == 0.0

    def test_dropping_first_row_gives_truncated_fit(self, trending_ar):
        from app.services.regression_service import regression_service

        spec = DetSpec.polynomial(1)
        padded = unitroot_service.zero_padded_df(trending_ar, spec, 0)
        truncated = unitroot_service.two_step_df(trending_ar, spec, 0)

        refit = regression_service.ols_fit(padded.response[1:], padded.design.row_slice(1))
        np.testing.assert_allclose(refit.coefficients, truncated.fit.coefficients, atol=1e-10)
        np.testing.assert_allclose(refit.std_errors, truncated.fit.std_errors, atol=1e-10)

    def test_residual_form_matches_levels_form(self, trending_ar):
        spec = DetSpec.polynomial(1)
        levels = unitroot_service.zero_padded_df(trending_ar, spec, 1, StepTwoForm.LEVELS)
        residual = unitroot_service.zero_padded_df(trending_ar, spec, 1, StepTwoForm.RESIDUAL)

        assert residual.rho_hat == pytest.approx(levels.rho_hat, abs=1e-10)
        assert residual.t_lm == pytest.approx(levels.t_lm, abs=1e-10)

    def test_close_to_truncated_in_large_samples(self):
        y = simulate(10_000, seed=41, alpha=0.5, initial=InitialCondition.STATIONARY,
                     det=DetSpec.polynomial(1), gamma=[1.0, 0.01])
        padded = unitroot_service.zero_padded_df(y, DetSpec.polynomial(1), 0)
        truncated = unitroot_service.two_step_df(y, DetSpec.polynomial(1), 0)

        assert abs(padded.rho_hat - truncated.rho_hat) < 5 * truncated.se_rho / math.sqrt(y.size)


class TestSimilarInvariance:
    @pytest.mark.parametrize("method", list(Method))
    @pytest.mark.parametrize("spec, delta", [
        ("c", [40.0]),
        ("ct", [-3.0, 0.25]),
        ("poly:2", [1.0, -0.05, 0.002]),
    ])
    def test_adding_deterministics_leaves_t_df_unchanged(self, trending_ar, method, spec, delta):
        spec = DetSpec.parse(spec)
        shifted = trending_ar + deterministics_service.build(spec, 1, trending_ar.size).values @ np.array(delta)

        base = unitroot_service.run(method, trending_ar, spec, 2)
        moved = unitroot_service.run(method, shifted, spec, 2)

        assert moved.t_df == pytest.approx(base.t_df, abs=1e-8)


class TestBreakDates:
    @pytest.mark.parametrize("method", list(Method))
    @pytest.mark.parametrize("break_date", [1, 2])
    def test_break_inside_the_lags_is_rejected_by_every_method(self, random_walk, method, break_date):
        with pytest.raises(InvalidBreakDateError, match="observations only supply lags"):
            unitroot_service.run(method, random_walk, DetSpec.with_break(0, break_date), 1)

    @pytest.mark.parametrize("method", list(Method))
    def test_first_admissible_break(self, random_walk, method):
        result = unitroot_service.run(method, random_walk, DetSpec.with_break(0, 3), 1)
        assert np.isfinite(result.t_df)


class TestUnitRootConsistency:
    def test_mean_rho_hat_approaches_one(self):
        means = {}
        for n_obs in (50, 400):
            estimates = [
                unitroot_service.two_step_df(simulate(n_obs, seed=77, index=i), DetSpec.polynomial(0), 0).rho_hat
                for i in range(300)
            ]
            means[n_obs] = float(np.mean(estimates))

        assert means[50] < means[400] < 1.0
        assert 1.0 - means[400] < 0.5 * (1.0 - means[50])


class TestLagRule:
    @pytest.mark.parametrize("n_obs, k", [(100, 4), (200, 4), (1000, 7), (50, 3)])
    def test_schwert(self, n_obs, k):
        assert Utils.schwert_lags(n_obs) == k
