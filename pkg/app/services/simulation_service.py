import logging

import numpy as np
from scipy.signal import lfilter

from app.models.enum.innovation import InitialCondition, Innovation
from app.models.simulation.dgp_config_model import DgpConfig, SeedSpec
from app.services.deterministics_service import deterministics_service
from config import STATIONARY_BURN_IN
from singleton import SingletonMeta


# Get logger
logger = logging.getLogger(__name__)


class SimulationService(metaclass=SingletonMeta):
    """
    Draws series from y_t = gamma' x_t + z_t, z_t = alpha z_{t-1} + u_t with
    AR(b) errors u_t. Each replication owns a PCG64 stream seeded from
    SeedSequence([base_seed, replication_index]); nothing is global.
    """

    def generator(self, seed: SeedSpec) -> np.random.Generator:
        sequence = np.random.SeedSequence([seed.base_seed, seed.replication_index])
        return np.random.Generator(np.random.PCG64(sequence))

    def _burn_in(self, config: DgpConfig) -> int:
        if config.initial == InitialCondition.STATIONARY:
            return max(config.burn_in, STATIONARY_BURN_IN)
        return config.burn_in

    def innovations(self, config: DgpConfig, size: int, rng: np.random.Generator) -> np.ndarray:
        if config.innovation == Innovation.STUDENT_T:
            # Rescaled so the standard deviation is sigma
            draws = rng.standard_t(config.df, size=size) * np.sqrt((config.df - 2.0) / config.df)
        else:
            draws = rng.standard_normal(size)
        return config.sigma * draws

    def simulate(self, config: DgpConfig, n_obs: int, seed: SeedSpec) -> np.ndarray:
        """y_1..y_T; identical (config, T, seed) gives bit-identical output."""
        if n_obs < 1:
            raise ValueError("T must be at least 1")
        burn_in = self._burn_in(config)
        rng = self.generator(seed)
        eps = self.innovations(config, burn_in + n_obs, rng)

        # u_t = b_1 u_{t-1} + ... + eps_t, pre-sample u = 0
        u = lfilter([1.0], np.concatenate(([1.0], -np.asarray(config.error_ar, dtype=float))), eps)

        if config.initial == InitialCondition.STATIONARY:
            z = lfilter([1.0], [1.0, -config.alpha], u, zi=[config.alpha * config.z0])[0][burn_in:]
        else:
            z = lfilter([1.0], [1.0, -config.alpha], u[burn_in:], zi=[config.alpha * config.z0])[0]

        if config.det.is_empty:
            return z
        x = deterministics_service.build(config.det, 1, n_obs).values
        return x @ np.asarray(config.gamma, dtype=float) + z


simulation_service = SimulationService()
