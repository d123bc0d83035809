import numpy as np
import pytest
from pydantic import ValidationError

from app.exceptions import NonStationaryErrorPolynomial
from app.models.deterministics.det_spec_model import DetSpec
from app.models.enum.innovation import InitialCondition, Innovation
from app.models.simulation.dgp_config_model import DgpConfig, SeedSpec, ar_polynomial_is_stationary
from app.services.deterministics_service import deterministics_service
from app.services.simulation_service import simulation_service
from tests.helpers import simulate


class TestDgpConfig:
    def test_explosive_alpha_is_allowed(self):
        assert DgpConfig(alpha=1.5).alpha == 1.5

    @pytest.mark.parametrize("error_ar", [[1.2], [0.5, 0.5], [-1.0]])
    def test_nonstationary_error_polynomial(self, error_ar):
        with pytest.raises(NonStationaryErrorPolynomial):
            DgpConfig(error_ar=error_ar)

    def test_stationary_polynomial(self):
        assert ar_polynomial_is_stationary([0.5, 0.3])
        assert ar_polynomial_is_stationary([])

    def test_gamma_must_match_spec(self):
        with pytest.raises(ValidationError):
            DgpConfig(det=DetSpec.polynomial(1), gamma=[1.0])

    def test_det_accepts_strings(self):
        config = DgpConfig(det="ct", gamma=[1.0, 0.5])
        assert config.det.labels == ["const", "t"]
        assert config.model_dump(mode="json")["det"] == "ct"

    def test_stationary_start_needs_stationary_root(self):
        with pytest.raises(ValidationError):
            DgpConfig(alpha=1.0, initial=InitialCondition.STATIONARY)

    def test_student_t_needs_fourth_moments(self):
        with pytest.raises(ValidationError):
            DgpConfig(innovation=Innovation.STUDENT_T, df=3)

    def test_seed_bounds(self):
        SeedSpec(base_seed=2 ** 64 - 1)
        with pytest.raises(ValidationError):
            SeedSpec(base_seed=-1)


class TestSimulate:
    def test_bit_identical_for_equal_inputs(self):
        first = simulate(200, seed=7, alpha=1.0)
        second = simulate(200, seed=7, alpha=1.0)
        assert np.array_equal(first, second)

    def test_replications_differ(self):
        assert not np.array_equal(simulate(50, seed=7, index=0), simulate(50, seed=7, index=1))

    def test_noiseless_path(self):
        config = DgpConfig(det="ct", gamma=[1.0, 0.5], alpha=0.8, z0=2.0, sigma=1e-300)
        y = simulation_service.simulate(config, 50, SeedSpec(base_seed=1))

        t = np.arange(1, 51)
        np.testing.assert_allclose(y, 1.0 + 0.5 * t + 0.8 ** t * 2.0, rtol=1e-13, atol=1e-13)

    def test_differences_recover_innovations(self):
        config = DgpConfig(alpha=1.0, sigma=2.0)
        seed = SeedSpec(base_seed=5, replication_index=3)
        y = simulation_service.simulate(config, 100, seed)

        eps = simulation_service.innovations(config, 100, simulation_service.generator(seed))
        np.testing.assert_allclose(np.diff(y), eps[1:], rtol=0, atol=1e-12)
        assert y[0] == pytest.approx(eps[0])

    def test_gamma_adds_exactly_the_deterministic_part(self):
        spec = DetSpec.polynomial(1)
        with_trend = simulate(80, seed=9, det=spec, gamma=[3.0, -0.2], alpha=0.7, error_ar=[0.3])
        without = simulate(80, seed=9, det=spec, gamma=[0.0, 0.0], alpha=0.7, error_ar=[0.3])

        x = deterministics_service.build(spec, 1, 80).values
        np.testing.assert_allclose(with_trend - without, x @ np.array([3.0, -0.2]), atol=1e-12)

    def test_white_noise_variance(self):
        y = simulate(1_000_000, seed=13, alpha=0.0, sigma=1.5)
        assert y.var() == pytest.approx(2.25, rel=0.01)

    def test_stationary_ar1_variance(self):
        y = simulate(1_000_000, seed=17, alpha=0.5, initial=InitialCondition.STATIONARY)
        assert y.var() == pytest.approx(1.0 / (1.0 - 0.25), rel=0.02)

    def test_student_t_innovations_have_unit_scale(self):
        y = simulate(1_000_000, seed=19, alpha=0.0, innovation=Innovation.STUDENT_T, df=8)
        assert y.var() == pytest.approx(1.0, rel=0.02)

    def test_independent_replications(self):
        draws = np.array([simulate(1, seed=21, index=i, alpha=0.0)[0] for i in range(10_000)])
        partners = np.array([simulate(1, seed=21, index=i + 10_000, alpha=0.0)[0] for i in range(10_000)])

        r = np.corrcoef(draws, partners)[0, 1]
        assert abs(r) < 4 / np.sqrt(10_000)

    def test_burn_in_changes_the_path_but_not_its_length(self):
        short = simulate(30, seed=3, error_ar=[0.5])
        burned = simulate(30, seed=3, error_ar=[0.5], burn_in=20)
        assert burned.size == short.size == 30
        assert not np.array_equal(short, burned)
