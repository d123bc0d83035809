from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import Field, field_validator

from app.models.core_model import CoreModel, frozen_array
from config import APP_VERSION, MIN_SERIES_LENGTH


class SeriesFile(CoreModel):
    path: str
    time_labels: Optional[List[str]] = None
    values: np.ndarray

    @field_validator('values', mode='before')
    @classmethod
    def validate_values(cls, v) -> np.ndarray:
        array = frozen_array(v, ndim=1)
        if array.size < MIN_SERIES_LENGTH:
            raise ValueError(f"A series needs at least {MIN_SERIES_LENGTH} observations, got {array.size}")
        return array


class RunManifest(CoreModel):
    command: str
    config: Dict[str, Any]
    seed: Optional[int] = None
    version: str = APP_VERSION
    timestamp: str = Field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec='seconds')
    )
