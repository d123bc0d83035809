from typing import List, Literal, Union

from pydantic import BaseModel, Field

from app.models.enum.method import Method
from app.models.enum.step_two_form import StepTwoForm
from config import MIN_SERIES_LENGTH


class UnitRootTestRequestModel(BaseModel):
    """
    Model for unit root test request validation.
    """
    values: List[float] = Field(
        ...,
        min_length=MIN_SERIES_LENGTH,
        description="Observations y_1..y_T in time order"
    )
    method: Method = Method.ZERO_PADDED
    det: str = Field("c", description="Deterministic spec: none, c, ct, poly:r, break:TB[:trend]")
    k: Union[int, Literal["auto"]] = Field("auto", description="Augmentation lags or 'auto'")
    form: StepTwoForm = StepTwoForm.LEVELS

    class Config:
        json_schema_extra = {
            "example": {
                "values": [0.1, 0.4, 0.2, 0.9, 1.3, 1.1, 1.8, 2.2, 2.0, 2.6, 3.1, 2.9],
                "method": "zeropad",
                "det": "ct",
                "k": 1,
                "form": "levels"
            }
        }
