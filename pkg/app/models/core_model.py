import numpy as np
from pydantic import BaseModel, ConfigDict


class CoreModel(BaseModel):
    """Base model with standard configuration."""
    model_config = ConfigDict(
        frozen=True,
        arbitrary_types_allowed=True,
        extra='forbid',
        populate_by_name=True
    )


def frozen_array(value, ndim: int) -> np.ndarray:
    """Float copy of value with the requested rank, marked read-only."""
    array = np.array(value, dtype=float)
    if ndim == 1:
        array = array.reshape(-1)
    elif array.ndim != ndim:
        raise ValueError(f"Expected a {ndim}-dimensional array, got shape {array.shape}")
    array.setflags(write=False)
    return array
