import numpy as np

from app.models.simulation.dgp_config_model import DgpConfig, SeedSpec
from app.services.simulation_service import simulation_service


def simulate(n_obs: int, seed: int, index: int = 0, **dgp) -> np.ndarray:
    return simulation_service.simulate(DgpConfig(**dgp), n_obs, SeedSpec(base_seed=seed, replication_index=index))


def write_series_csv(path, values, header: bool = True) -> str:
    lines = ["y"] if header else []
    lines.extend(repr(float(v)) for v in values)
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def ols_oracle(y: np.ndarray, X: np.ndarray):
    """Normal equations, for cross-checking the QR path."""
    xtx_inv = np.linalg.inv(X.T @ X)
    coefficients = xtx_inv @ X.T @ y
    residuals = y - X @ coefficients
    sigma2 = residuals @ residuals / (X.shape[0] - X.shape[1])
    return coefficients, np.sqrt(np.diag(sigma2 * xtx_inv)), residuals
