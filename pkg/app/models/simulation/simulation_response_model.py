from typing import Any, Dict, List

from pydantic import BaseModel

from app.models.enum.response_status import ResponseStatus


class SimulationResponse(BaseModel):
    dgp: Dict[str, Any]
    seed: int
    values: List[float]
    status: ResponseStatus
