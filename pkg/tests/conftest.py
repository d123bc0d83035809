import pytest

from app.models.deterministics.det_spec_model import DetSpec
from tests.helpers import simulate, write_series_csv


@pytest.fixture
def random_walk():
    return simulate(200, seed=11)


@pytest.fixture
def trending_ar():
    """AR(1) errors around 1 + 0.05 t, near unit root."""
    return simulate(200, seed=23, alpha=0.95, error_ar=[0.4], det=DetSpec.polynomial(1), gamma=[1.0, 0.05])


@pytest.fixture
def rw_csv(tmp_path, random_walk):
    return write_series_csv(tmp_path / "rw.csv", random_walk)
