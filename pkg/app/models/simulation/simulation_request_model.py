from typing import Any, Dict

from pydantic import BaseModel, ConfigDict, Field

from app.models.simulation.dgp_config_model import MAX_SEED
from config import DEFAULT_BASE_SEED


class SimulationRequestModel(BaseModel):
    """
    The DGP stays a plain mapping here and is validated by the endpoint,
    so process errors come back with their own status codes.
    """
    model_config = ConfigDict(
        populate_by_name=True,
        json_schema_extra={
            "example": {
                "dgp": {"alpha": 1.0, "sigma": 1.0, "det": "ct", "gamma": [1.0, 0.5]},
                "T": 200,
                "seed": 7
            }
        }
    )

    dgp: Dict[str, Any] = Field(default_factory=dict)
    n_obs: int = Field(..., alias="T", ge=1)
    seed: int = Field(DEFAULT_BASE_SEED, ge=0, le=MAX_SEED)
