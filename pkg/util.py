import hashlib
import json
import math
from typing import Any, Dict, Sequence

import numpy as np


class Utils:
    @staticmethod
    def sign(value: float) -> int:
        """sign(x) with sign(0) = 0."""
        if value > 0:
            return 1
        if value < 0:
            return -1
        return 0

    @staticmethod
    def schwert_lags(n_obs: int) -> int:
        """Lag rule k = floor(4 (T/100)^(1/4))."""
        if n_obs < 1:
            raise ValueError("Sample size must be positive.")
        return int(math.floor(4.0 * (n_obs / 100.0) ** 0.25))

    @staticmethod
    def empirical_quantiles(values: np.ndarray, probs: Sequence[float]) -> np.ndarray:
        """Type-7 (linear interpolation) sample quantiles."""
        return np.quantile(np.asarray(values, dtype=float), list(probs), method="linear")

    @staticmethod
    def config_hash(payload: Dict[str, Any]) -> str:
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]

    @staticmethod
    def format_number(value: float) -> str:
        # Human-readable output uses 6 significant digits
        return f"{value:.6g}"

    @staticmethod
    def parse_float_list(text: str) -> list:
        if text is None or not str(text).strip():
            return []
        return [float(item) for item in str(text).split(",") if item.strip()]
