from enum import Enum


class Method(str, Enum):
    ONE_STEP = "onestep"
    TWO_STEP = "twostep"
    RESIDUAL_ONLY = "residual"
    ZERO_PADDED = "zeropad"
